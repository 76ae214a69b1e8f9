#include "omt/spectra.hpp"

#include "omt/errors.hpp"
#include "omt/parallel.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace omt {

using cd = std::complex<double>;

Eigen::MatrixXcd response_matrix(const LinearModel& model, double omega) {
    const Index dim = model.A.rows();
    Eigen::MatrixXcd m = -model.A.cast<cd>();
    m.diagonal().array() -= cd(0, omega);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
    if (!(lu.rcond() > 1e-14)) {
        std::ostringstream msg;
        msg << "response matrix singular at omega = " << omega << " (rcond " << lu.rcond() << ")";
        throw SingularityError(msg.str());
    }
    Eigen::VectorXcd b(dim);
    for (Index m_i = 0; m_i < model.n_modes(); ++m_i) {
        b(2 * m_i) = b(2 * m_i + 1) = std::sqrt(2.0 * model.port_rates(m_i));
    }
    return lu.solve(Eigen::MatrixXcd(b.asDiagonal()));
}

Eigen::MatrixXcd ladder_response(const LinearModel& model, double omega) {
    const Index n = model.n_modes();
    return quadrature_to_ladder(n) * response_matrix(model, omega) * ladder_to_quadrature(n);
}

PSDResult psd(const LinearModel& model, const std::vector<double>& grid, const std::string& mode,
              unsigned threads) {
    const StabilityReport st = stability_check(model);
    if (!st.stable) {
        std::ostringstream msg;
        msg << "psd: model '" << model.label << "' unstable (spectral abscissa " << st.spectral_abscissa
            << ", dominant mode " << st.dominant_mode << ")";
        throw InstabilityError(msg.str());
    }
    const Index row = 2 * model.index_of(mode);
    const Eigen::MatrixXcd& c = model.input_correlation;
    PSDResult out;
    out.omega = grid;
    out.model_label = model.label;
    out.mode = mode;
    out.S = parallel_map(
        grid.size(),
        [&](std::size_t i) {
            const Eigen::RowVectorXcd x = ladder_response(model, grid[i]).row(row);
            const cd s = x.conjugate() * c * x.transpose();
            return s.real() / kTwoPi;
        },
        threads);
    return out;
}

std::vector<double> adaptive_grid(const LinearModel& model, const GridOptions& o) {
    std::vector<double> g;
    g.reserve(static_cast<std::size_t>(o.base_points));
    for (int i = 0; i < o.base_points; ++i) {
        g.push_back(-o.span + 2.0 * o.span * i / (o.base_points - 1));
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(model.A, false);
    for (Index k = 0; k < es.eigenvalues().size(); ++k) {
        const cd lambda = es.eigenvalues()(k);
        const double width = std::abs(lambda.real());
        if (width <= 0) continue;
        const double step = width / o.steps_per_width;
        const int half = static_cast<int>(std::lround(o.refine_halfwidth * o.steps_per_width));
        // The eigenvalue -w i - width contributes a peak at omega = w.
        const double center = -lambda.imag();
        for (int j = -half; j <= half; ++j) {
            const double w = center + j * step;
            if (std::abs(w) <= o.span) g.push_back(w);
        }
    }
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
            g.end());
    return g;
}

OccupationEstimate mean_occupation_from_psd(const PSDResult& p) {
    OccupationEstimate est;
    if (p.omega.size() < 2) {
        est.coverage_ok = false;
        est.warning = "fewer than two grid points";
        return est;
    }
    double total = 0;
    for (std::size_t i = 1; i < p.omega.size(); ++i) {
        total += 0.5 * (p.S[i] + p.S[i - 1]) * (p.omega[i] - p.omega[i - 1]);
    }
    est.value = total;
    const double peak = *std::max_element(p.S.begin(), p.S.end());
    const double edge = std::max(std::abs(p.S.front()), std::abs(p.S.back()));
    if (peak > 0 && edge >= 1e-6 * peak) {
        est.coverage_ok = false;
        std::ostringstream msg;
        msg << "grid may not cover all peaks: boundary value " << edge << " vs max " << peak;
        est.warning = msg.str();
    }
    return est;
}

std::vector<Peak> local_maxima(const PSDResult& p) {
    std::vector<Peak> out;
    for (std::size_t i = 1; i + 1 < p.S.size(); ++i) {
        if (p.S[i] > p.S[i - 1] && p.S[i] >= p.S[i + 1]) out.push_back({p.omega[i], p.S[i]});
    }
    return out;
}

Peak max_in_window(const PSDResult& p, double center, double halfwidth) {
    Peak best{center, -1e300};
    for (std::size_t i = 0; i < p.S.size(); ++i) {
        if (std::abs(p.omega[i] - center) <= halfwidth && p.S[i] > best.value) best = {p.omega[i], p.S[i]};
    }
    if (best.value == -1e300) throw std::invalid_argument("max_in_window: window contains no grid point");
    return best;
}

double psd_at(const PSDResult& p, double omega) {
    if (p.omega.empty()) throw std::invalid_argument("psd_at: empty grid");
    if (omega <= p.omega.front()) return p.S.front();
    if (omega >= p.omega.back()) return p.S.back();
    const auto it = std::upper_bound(p.omega.begin(), p.omega.end(), omega);
    const auto i = static_cast<std::size_t>(it - p.omega.begin());
    const double t = (omega - p.omega[i - 1]) / (p.omega[i] - p.omega[i - 1]);
    return (1 - t) * p.S[i - 1] + t * p.S[i];
}

std::complex<double> mechanical_noise_correlation(const ModelParams& p, double tau, Side side) {
    const double G = side == Side::optical ? p.G_a : p.G_b;
    const double kappa = side == Side::optical ? p.kappa_a : p.kappa_b;
    if (!(kappa > 0)) throw DomainError("mechanical_noise_correlation: kappa must be positive");
    const double g = tau >= 0 ? p.gamma : -p.gamma;
    const double pre = G * G / (2.0 * kappa);
    return pre * p.nbar_c * std::exp(cd(-g, -1.0) * tau) + pre * (p.nbar_c + 1.0) * std::exp(cd(-g, 1.0) * tau);
}

TransferFunction transfer_function(double omega, double kappa) {
    if (!(kappa > 0)) throw DomainError("transfer_function: kappa must be positive");
    const cd den(kappa, omega);
    return {kappa / den, cd(0, -omega) / den};
}

ConversionFrequencies conversion_frequencies(const SystemConfig& config, const ModelParams& params,
                                             const SteadyState* steady) {
    const double x_c = steady ? steady->x_c : params.x_c;
    const double wm = config.omega_m;
    const double Ga = params.G_a * wm, Gb = params.G_b * wm;
    return {config.omega_b - x_c * config.g_b0 - 2.0 * Gb * Gb / wm,
            config.omega_a - x_c * config.g_a0 - 2.0 * Ga * Ga / wm};
}

}  // namespace omt
