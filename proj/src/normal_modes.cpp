#include "omt/normal_modes.hpp"

#include "omt/errors.hpp"
#include "omt/linear_model.hpp"
#include "omt/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace omt {

using cd = std::complex<double>;

namespace {

constexpr std::array<std::array<int, 3>, 6> kPermutations{{
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

// Fixes the arbitrary eigenvector phase: the dominant annihilation
// coefficient becomes real and positive.
void fix_phase(Eigen::Ref<Eigen::VectorXcd> c) {
    const Index n = c.size() / 2;
    Index best = 0;
    double best_abs = -1;
    for (Index j = 0; j < n; ++j) {
        const double m = std::abs(c(2 * j) - cd(0, 1) * c(2 * j + 1));
        if (m > best_abs + 1e-12) {
            best_abs = m;
            best = j;
        }
    }
    const cd u = c(2 * best) - cd(0, 1) * c(2 * best + 1);
    if (std::abs(u) > 0) c *= std::conj(u) / std::abs(u);
}

PolaritonSpectrum assemble(const NormalModes& m, const std::array<int, 3>& perm) {
    PolaritonSpectrum s;
    s.omega_A = m.omega(perm[0]);
    s.omega_B = m.omega(perm[1]);
    s.omega_C = m.omega(perm[2]);
    s.transform.resize(6, 6);
    s.vectors.resize(6, 3);
    for (int l = 0; l < 3; ++l) {
        s.composition.row(l) = m.composition.row(perm[l]);
        s.transform.row(2 * l) = m.transform.row(2 * perm[l]);
        s.transform.row(2 * l + 1) = m.transform.row(2 * perm[l] + 1);
        s.vectors.col(l) = m.vectors.col(perm[l]);
    }
    return s;
}

PolaritonSpectrum label_by_composition(const NormalModes& m) {
    const std::array<int, 3>* best = &kPermutations[0];
    double best_score = -1e300;
    for (const auto& p : kPermutations) {
        const double score = m.composition(p[0], 0) + m.composition(p[1], 1) + m.composition(p[2], 2);
        if (score > best_score + 1e-12) {
            best_score = score;
            best = &p;
        }
    }
    return assemble(m, *best);
}

double min_separation(const NormalModes& m) {
    double gap = 1e300;
    for (Index k = 1; k < m.omega.size(); ++k) gap = std::min(gap, m.omega(k) - m.omega(k - 1));
    return gap;
}

NormalModes modes_at(const ModelParams& params, double delta_a) {
    ModelParams p = params;
    p.delta_a = delta_a;
    return williamson(three_mode_hamiltonian(p).matrix());
}

}  // namespace

NormalModes williamson(const Eigen::MatrixXd& K) {
    const Index dim = K.rows();
    const Index n = dim / 2;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ks(K);
    const double scale = std::max(1.0, ks.eigenvalues().cwiseAbs().maxCoeff());
    if (ks.eigenvalues()(0) <= 1e-12 * scale) {
        std::ostringstream msg;
        msg << "Hamiltonian not positive definite (eigenvalue " << ks.eigenvalues()(0)
            << ", direction [" << ks.eigenvectors().col(0).transpose() << "])";
        throw SpectrumError(msg.str());
    }
    const Eigen::MatrixXd r = ks.operatorSqrt();
    const Eigen::MatrixXd m = r * symplectic_form<double>(n) * r;
    const Eigen::MatrixXcd h = cd(0, 1) * m.cast<cd>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> hs(h);

    // Eigenvalue -omega/2 belongs to the annihilation operator of frequency omega.
    // Ascending eigenvalues: entries n-1 .. 0 give ascending frequencies.
    NormalModes out;
    out.omega.resize(n);
    out.vectors.resize(dim, n);
    out.transform.resize(dim, dim);
    out.composition.resize(n, n);
    for (Index k = 0; k < n; ++k) {
        const Index src = n - 1 - k;
        const double w = -2.0 * hs.eigenvalues()(src);
        out.omega(k) = w;
        Eigen::VectorXcd c = r.cast<cd>() * hs.eigenvectors().col(src) / std::sqrt(w);
        fix_phase(c);
        out.vectors.col(k) = c;
        out.transform.row(2 * k) = 2.0 * c.real().transpose();
        out.transform.row(2 * k + 1) = 2.0 * c.imag().transpose();
        for (Index j = 0; j < n; ++j) {
            const cd u = c(2 * j) - cd(0, 1) * c(2 * j + 1);
            const cd v = c(2 * j) + cd(0, 1) * c(2 * j + 1);
            out.composition(k, j) = std::norm(u) - std::norm(v);
        }
    }
    return out;
}

Eigen::MatrixXd mode_overlap(const Eigen::MatrixXcd& previous, const Eigen::MatrixXcd& current) {
    const Index n = previous.rows() / 2;
    const Eigen::MatrixXcd omega = symplectic_form<double>(n).cast<cd>();
    return (cd(0, 2) * previous.transpose() * omega * current.conjugate()).cwiseAbs();
}

std::array<double, 3> PolaritonSpectrum::sorted_frequencies() const {
    std::array<double, 3> f{omega_A, omega_B, omega_C};
    std::sort(f.begin(), f.end());
    return f;
}

PolaritonSpectrum diagonalize(const ModelParams& params) {
    return label_by_composition(williamson(three_mode_hamiltonian(params).matrix()));
}

PolaritonSpectrum track(const NormalModes& modes, const PolaritonSpectrum& previous) {
    const Eigen::MatrixXd o = mode_overlap(previous.vectors, modes.vectors);
    const auto prev_f = previous.frequencies();
    const std::array<int, 3>* best = &kPermutations[0];
    double best_score = -1e300, best_dist = 1e300;
    for (const auto& p : kPermutations) {
        const double score = o(0, p[0]) + o(1, p[1]) + o(2, p[2]);
        double dist = 0;
        for (int l = 0; l < 3; ++l) dist += std::abs(modes.omega(p[l]) - prev_f[static_cast<std::size_t>(l)]);
        if (score > best_score + 1e-9 || (std::abs(score - best_score) <= 1e-9 && dist < best_dist)) {
            best_score = std::max(score, best_score);
            best_dist = dist;
            best = &p;
        }
    }
    return assemble(modes, *best);
}

std::vector<SweepPoint> spectrum_sweep(const ModelParams& params,
                                       const std::vector<double>& grid,
                                       const SweepOptions& options) {
    if (!std::is_sorted(grid.begin(), grid.end())) {
        throw std::invalid_argument("spectrum_sweep: grid must be sorted ascending");
    }
    struct Raw {
        std::optional<NormalModes> modes;
        std::string error;
    };
    auto raw = parallel_map(
        grid.size(),
        [&](std::size_t i) {
            Raw r;
            try {
                r.modes = modes_at(params, grid[i]);
            } catch (const SpectrumError& e) {
                r.error = e.what();
            }
            return r;
        },
        options.threads);

    std::vector<SweepPoint> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out[i].delta_a = grid[i];
        out[i].error = raw[i].error;
    }
    const double anchor_value = options.anchor_delta_a.value_or(0.5 * (params.delta_b - 1.0));
    std::optional<std::size_t> anchor;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!raw[i].modes) continue;
        if (!anchor || std::abs(grid[i] - anchor_value) < std::abs(grid[*anchor] - anchor_value)) anchor = i;
    }
    if (!anchor) return out;

    out[*anchor].spectrum = label_by_composition(*raw[*anchor].modes);
    // Degenerate points carry arbitrary vectors inside the degenerate
    // subspace, so the reference for tracking is the last well-separated point.
    auto walk = [&](long step) {
        PolaritonSpectrum reference = *out[*anchor].spectrum;
        for (long i = static_cast<long>(*anchor) + step; i >= 0 && i < static_cast<long>(grid.size()); i += step) {
            const auto& r = raw[static_cast<std::size_t>(i)];
            if (!r.modes) continue;
            auto s = track(*r.modes, reference);
            if (min_separation(*r.modes) > 1e-9) reference = s;
            out[static_cast<std::size_t>(i)].spectrum = std::move(s);
        }
    };
    walk(+1);
    walk(-1);
    return out;
}

CrossingGap crossing_gap(const ModelParams& params, Crossing which) {
    const double separation = std::abs(1.0 + params.delta_b);
    const double half = std::min(0.3, 0.45 * separation);
    const double center = which == Crossing::mechanical ? -1.0 : params.delta_b;
    const Index lower = which == Crossing::mechanical ? 1 : 0;
    auto gap = [&](double d) {
        const NormalModes m = modes_at(params, d);
        return m.omega(lower + 1) - m.omega(lower);
    };
    if (half <= 0) throw SpectrumError("crossing_gap: resonances coincide, no scan window");

    constexpr int kScan = 201;
    std::vector<double> xs(kScan), ys(kScan);
    for (int i = 0; i < kScan; ++i) {
        xs[static_cast<std::size_t>(i)] = center - half + 2.0 * half * i / (kScan - 1);
    }
    ys = parallel_map(kScan, [&](std::size_t i) { return gap(xs[i]); });
    const auto it = std::min_element(ys.begin(), ys.end());
    const auto k = static_cast<std::size_t>(it - ys.begin());
    if (k == 0 || k + 1 == ys.size()) {
        throw SpectrumError("crossing_gap: no interior minimum in [" + std::to_string(xs.front()) + ", " +
                            std::to_string(xs.back()) + "]");
    }
    // Golden-section refinement on the bracketing cells.
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = xs[k - 1], b = xs[k + 1];
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = gap(c), fd = gap(d);
    while (b - a > 1e-11) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = gap(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = gap(d);
        }
    }
    const double x = 0.5 * (a + b);
    CrossingGap out{gap(x), x};
    if (*it < out.gap) out = {*it, xs[k]};
    return out;
}

}  // namespace omt
