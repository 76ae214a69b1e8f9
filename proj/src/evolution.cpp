#include "omt/evolution.hpp"

#include "omt/errors.hpp"
#include "omt/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace omt {

Eigen::VectorXd CovarianceState::populations() const {
    Eigen::VectorXd n(n_modes());
    for (Index m = 0; m < n_modes(); ++m) n(m) = mode_occupation(sigma, m);
    return n;
}

CovarianceState thermal_state(const std::vector<std::string>& labels, const Eigen::VectorXd& occ, double t) {
    if (static_cast<Index>(labels.size()) != occ.size()) {
        throw std::invalid_argument("thermal_state: one occupation per mode required");
    }
    CovarianceState s;
    s.mode_labels = labels;
    s.t = t;
    s.sigma = Eigen::MatrixXd::Zero(2 * occ.size(), 2 * occ.size());
    for (Index m = 0; m < occ.size(); ++m) {
        s.sigma(2 * m, 2 * m) = s.sigma(2 * m + 1, 2 * m + 1) = 2.0 * occ(m) + 1.0;
    }
    return s;
}

CovarianceState lyapunov_steady(const LinearModel& model) {
    const StabilityReport st = stability_check(model);
    if (!st.stable) {
        std::ostringstream msg;
        msg << "no steady state: model '" << model.label << "' unstable (spectral abscissa "
            << st.spectral_abscissa << ", dominant mode " << st.dominant_mode << ")";
        throw InstabilityError(msg.str());
    }
    CovarianceState s;
    s.mode_labels = model.mode_labels;
    s.sigma = solve_lyapunov(model.A, model.D);
    const double res = lyapunov_residual(model.A, s.sigma, model.D);
    if (!(res < 1e-10)) throw SolverError("Lyapunov residual too large", res);
    return s;
}

namespace {

Eigen::MatrixXd rhs(const LinearModel& m, const Eigen::MatrixXd& sigma) {
    Eigen::MatrixXd as = m.A * sigma;
    return as + as.transpose() + m.D;
}

void check_physical(const CovarianceState& s, double tol) {
    const double margin = physicality_margin(s.sigma);
    if (margin < -tol) {
        std::ostringstream msg;
        msg << "unphysical covariance at t = " << s.t << " (min eigenvalue of sigma + i Omega " << margin << ")";
        throw PhysicalityError(msg.str(), s.t);
    }
}

}  // namespace

Trajectory evolve_covariance(const ModelAt& model_at, const CovarianceState& initial, double t_end,
                             const EvolveOptions& o) {
    if (!(o.dt > 0)) throw std::invalid_argument("evolve_covariance: dt must be positive");
    if (t_end < initial.t) throw std::invalid_argument("evolve_covariance: t_end before initial time");
    const double span = t_end - initial.t;
    const long steps = std::max<long>(1, static_cast<long>(std::ceil(span / o.dt - 1e-9)));
    const double h = span / static_cast<double>(steps);
    const int every = std::max(1, o.sample_every);

    Trajectory tr;
    tr.mode_labels = initial.mode_labels;
    CovarianceState s = initial;
    LinearModel m0 = model_at(s.t);
    if (m0.n_modes() != initial.n_modes()) throw std::invalid_argument("evolve_covariance: dimension mismatch");

    Eigen::EigenSolver<Eigen::MatrixXd> es(m0.A, false);
    const double fastest = es.eigenvalues().cwiseAbs().maxCoeff();
    if (fastest > 0 && h > 0.05 / fastest * 1.0000001) {
        std::ostringstream msg;
        msg << "dt = " << h << " exceeds 0.05 / max|eigenvalue| = " << 0.05 / fastest;
        tr.warnings.push_back(msg.str());
    }

    auto record = [&] {
        check_physical(s, o.physicality_tol);
        tr.times.push_back(s.t);
        tr.bare_populations.push_back(s.populations());
        if (o.observer) o.observer(s);
    };
    record();
    const double t_start = initial.t;
    for (long k = 1; k <= steps; ++k) {
        const double t = s.t;
        const LinearModel mid = model_at(t + 0.5 * h);
        LinearModel m1 = model_at(t + h);
        const Eigen::MatrixXd k1 = rhs(m0, s.sigma);
        const Eigen::MatrixXd k2 = rhs(mid, s.sigma + 0.5 * h * k1);
        const Eigen::MatrixXd k3 = rhs(mid, s.sigma + 0.5 * h * k2);
        const Eigen::MatrixXd k4 = rhs(m1, s.sigma + h * k3);
        s.sigma += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        s.sigma = 0.5 * (s.sigma + s.sigma.transpose()).eval();
        s.t = t_start + static_cast<double>(k) * h;
        m0 = std::move(m1);
        if (k % every == 0 || k == steps) record();
    }
    tr.final_state = s;
    return tr;
}

Trajectory evolve_covariance(const LinearModel& model, const CovarianceState& initial, double t_end,
                             const EvolveOptions& options) {
    return evolve_covariance([&model](double) { return model; }, initial, t_end, options);
}

std::array<double, 3> project_polaritons(const CovarianceState& state, const PolaritonSpectrum& spectrum) {
    if (state.sigma.rows() != 6 || spectrum.transform.rows() != 6) {
        throw std::invalid_argument("project_polaritons: three-mode state and spectrum required");
    }
    const Eigen::MatrixXd s = spectrum.transform * state.sigma * spectrum.transform.transpose();
    return {mode_occupation(s, 0), mode_occupation(s, 1), mode_occupation(s, 2)};
}

double Protocol::delta_a_at(double t) const {
    const double t0v = ramp_start();
    if (t <= t0v) return delta_a_start;
    if (t >= t0v + tau) return delta_a_end;
    const double f = (t - t0v) / tau;
    return delta_a_start + f * (delta_a_end - delta_a_start);
}

Feasibility protocol_feasibility(const Protocol& p, const ModelParams& params) {
    Feasibility f;
    const double gg = std::abs(params.G_a * params.G_b);
    f.tau_min = gg > 0 ? 1.0 / (4.0 * gg) : INFINITY;
    const double kmax = std::max(params.kappa_a, params.kappa_b);
    f.tau_max = kmax > 0 ? 1.0 / kmax : INFINITY;
    f.ok = true;
    if (!(p.tau_r > 0 && p.tau > 0 && p.tau_d > 0)) {
        throw ConfigError("protocol windows tau_r, tau, tau_d must be positive");
    }
    if (p.tau < kRegimeMargin * f.tau_min) {
        f.ok = false;
        std::ostringstream msg;
        msg << "ramp not adiabatic: tau = " << p.tau << " vs omega_m/(4|G_a G_b|) = " << f.tau_min;
        f.messages.push_back(msg.str());
    }
    if (p.tau > f.tau_max / kRegimeMargin) {
        f.ok = false;
        std::ostringstream msg;
        msg << "ramp too slow for the cavity lifetime: tau = " << p.tau << " vs 1/kappa = " << f.tau_max;
        f.messages.push_back(msg.str());
    }
    return f;
}

namespace {

Trajectory protocol_run(const Protocol& p, const ModelParams& params, double dt, int sample_every) {
    auto model_at = [&](double t) {
        ModelParams q = params;
        q.delta_a = p.delta_a_at(t);
        return build_three_mode(q);
    };
    std::optional<PolaritonSpectrum> current;
    std::vector<std::array<double, 3>> pol;
    EvolveOptions o;
    o.dt = dt;
    o.sample_every = sample_every;
    o.observer = [&](const CovarianceState& s) {
        ModelParams q = params;
        q.delta_a = p.delta_a_at(s.t);
        PolaritonSpectrum spec;
        if (!current) {
            spec = diagonalize(q);
        } else {
            const NormalModes modes = williamson(three_mode_hamiltonian(q).matrix());
            spec = track(modes, *current);
        }
        const auto f = spec.sorted_frequencies();
        if (!current || std::min(f[1] - f[0], f[2] - f[1]) > 1e-9) current = spec;
        pol.push_back(project_polaritons(s, spec));
    };
    Eigen::Vector3d occ(params.nbar_a, params.nbar_b, params.nbar_c);
    const CovarianceState init = thermal_state({"a", "b", "c"}, occ, p.start_time());
    try {
        Trajectory tr = evolve_covariance(model_at, init, p.end_time(), o);
        tr.polariton_populations = std::move(pol);
        return tr;
    } catch (const SpectrumError& e) {
        throw InstabilityError(std::string("protocol aborted: ") + e.what());
    }
}

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    const auto it = std::lower_bound(xs.begin(), xs.end(), x);
    if (it == xs.begin()) return ys.front();
    if (it == xs.end()) return ys.back();
    const auto i = static_cast<std::size_t>(it - xs.begin());
    const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return (1 - t) * ys[i - 1] + t * ys[i];
}

}  // namespace

ProtocolResult run_protocol(const Protocol& p, const ModelParams& params) {
    params.validate();
    ProtocolResult r;
    r.feasibility = protocol_feasibility(p, params);
    ModelParams check = params;
    for (double d : {p.delta_a_start, p.delta_a_end}) {
        check.delta_a = d;
        const StabilityReport st = stability_check(build_three_mode(check));
        if (!st.stable) {
            std::ostringstream msg;
            msg << "protocol unstable at Delta_a = " << d << " (dominant mode " << st.dominant_mode << ")";
            throw InstabilityError(msg.str());
        }
    }
    if (!p.check_step_halving) {
        r.trajectory = protocol_run(p, params, p.dt, p.sample_every);
        return r;
    }
    auto runs = parallel_map(2, [&](std::size_t i) {
        return i == 0 ? protocol_run(p, params, p.dt, p.sample_every)
                      : protocol_run(p, params, 0.5 * p.dt, 2 * p.sample_every);
    });
    r.trajectory = std::move(runs[0]);
    const Trajectory& fine = runs[1];
    double dev = 0;
    for (std::size_t k = 0; k < 6; ++k) {
        std::vector<double> ys;
        for (std::size_t i = 0; i < fine.times.size(); ++i) {
            ys.push_back(k < 3 ? fine.bare_populations[i](static_cast<Index>(k)) : fine.polariton_populations[i][k - 3]);
        }
        for (std::size_t i = 0; i < r.trajectory.times.size(); ++i) {
            const double v = k < 3 ? r.trajectory.bare_populations[i](static_cast<Index>(k))
                                   : r.trajectory.polariton_populations[i][k - 3];
            dev = std::max(dev, std::abs(v - interpolate(fine.times, ys, r.trajectory.times[i])));
        }
    }
    r.step_halving_deviation = dev;
    r.step_halving_ok = dev < 1e-4;
    if (!r.step_halving_ok) {
        std::ostringstream msg;
        msg << "step halving changed populations by " << dev << " (> 1e-4)";
        r.trajectory.warnings.push_back(msg.str());
    }
    return r;
}

ProtocolSummary summarize(const Protocol& p, const Trajectory& tr) {
    ProtocolSummary s;
    int nr = 0, nd = 0;
    const double eps = 1e-9;
    std::optional<std::size_t> start;
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        const double t = tr.times[i];
        if (t <= p.ramp_start() + eps) {
            s.receive_n_a += tr.bare_populations[i](0);
            s.receive_n_b += tr.bare_populations[i](1);
            ++nr;
        }
        if (t >= p.ramp_end() - eps) {
            s.detect_n_a += tr.bare_populations[i](0);
            s.detect_n_b += tr.bare_populations[i](1);
            ++nd;
        }
        if (!start && t >= p.ramp_start() - eps) start = i;
    }
    if (nr == 0 || nd == 0 || !start) throw std::invalid_argument("summarize: trajectory does not span the protocol");
    s.receive_n_a /= nr;
    s.receive_n_b /= nr;
    s.detect_n_a /= nd;
    s.detect_n_b /= nd;
    if (!tr.polariton_populations.empty()) {
        const auto& p0 = tr.polariton_populations[*start];
        const double scale = p0[0] + p0[1];
        double drift = 0;
        for (std::size_t i = *start; i < tr.times.size() && tr.times[i] <= p.ramp_end() + eps; ++i) {
            for (int k = 0; k < 2; ++k) {
                drift = std::max(drift, std::abs(tr.polariton_populations[i][static_cast<std::size_t>(k)] -
                                                 p0[static_cast<std::size_t>(k)]));
            }
        }
        s.polariton_drift = scale > 0 ? drift / scale : 0;
    }
    return s;
}

}  // namespace omt
