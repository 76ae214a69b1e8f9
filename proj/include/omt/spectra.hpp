// spectra.hpp — frequency-domain response, power spectral densities, the
// colored mechanical noise kernel, the two-sided cavity transfer function and
// the sensitivity budget.
//
// Fourier convention O(omega) = int exp(i omega t) O(t) dt, so a mode
// oscillating as exp(-i w t) peaks at omega = +w. Spectral densities are
// normally ordered: the vacuum contributes nothing and int S d(omega) = <a^dag a>.

#pragma once

#include "omt/linear_model.hpp"
#include "omt/params.hpp"
#include "omt/steady_state.hpp"

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace omt {

struct PSDResult {
    std::vector<double> omega;
    std::vector<double> S;
    std::string model_label;
    std::string mode;
};

// Quadrature response X(omega) = (-i omega I - A)^-1 B with B = diag(sqrt(2 kappa)).
// Throws SingularityError when the system matrix is numerically singular.
Eigen::MatrixXcd response_matrix(const LinearModel& model, double omega);

// The same response in the interleaved ladder basis.
Eigen::MatrixXcd ladder_response(const LinearModel& model, double omega);

// Throws InstabilityError for an unstable model.
PSDResult psd(const LinearModel& model, const std::vector<double>& omega_grid,
              const std::string& mode, unsigned threads = 0);

struct GridOptions {
    double span{12.0};           // grid covers [-span, span]
    int base_points{4001};       // uniform background
    double refine_halfwidth{20}; // in units of each eigenvalue's damping
    int steps_per_width{10};     // local step = damping / steps_per_width
};

// Uniform grid plus refinement around every drift eigenfrequency.
std::vector<double> adaptive_grid(const LinearModel& model, const GridOptions& options = {});

struct OccupationEstimate {
    double value{0};
    bool coverage_ok{true};
    std::string warning;
};

// Trapezoidal integral. Coverage requires both boundary values below 1e-6 of the maximum.
OccupationEstimate mean_occupation_from_psd(const PSDResult& psd);

struct Peak {
    double omega{0};
    double value{0};
};

// Interior local maxima of S, in grid order.
std::vector<Peak> local_maxima(const PSDResult& psd);

// Largest sample with |omega - center| <= halfwidth.
Peak max_in_window(const PSDResult& psd, double center, double halfwidth);

// Linear interpolation of S at omega (clamped to the grid ends).
double psd_at(const PSDResult& psd, double omega);

// Correlation m(tau) of the mechanical noise seen by the optical (or
// microwave) mode after eliminating the phonon; tau in units of 1/omega_m.
std::complex<double> mechanical_noise_correlation(const ModelParams& params, double tau,
                                                  Side side = Side::optical);

struct TransferFunction {
    std::complex<double> gain;        // microwave in -> optical out
    std::complex<double> reflection;  // optical in -> optical out
};

// Throws DomainError when kappa <= 0.
TransferFunction transfer_function(double omega, double kappa);

struct ConversionFrequencies {
    double omega_s{0};  // microwave signal, rad/s
    double omega_o{0};  // optical output, rad/s
};

// Uses steady->x_c when given, otherwise params.x_c.
ConversionFrequencies conversion_frequencies(const SystemConfig& config, const ModelParams& params,
                                             const SteadyState* steady = nullptr);

struct BudgetReport {
    double n_s{0};              // microwave input occupation
    double n_o{0};              // optical output occupation
    double mech_noise_term{0};  // (G_a^2 + G_b^2) gamma (2 nbar_c + 1) / kappa, normalized
    bool n_s_from_temperature{false};
    double nbar_c{0};
    double omega_s{0}, omega_o{0};  // rad/s
    double tau_min{0}, tau_max{0};  // adiabatic window, s
    double window_ratio{0};         // tau_max / tau_min
    bool window_feasible{false};    // tau_min < tau_max
    double dead_time{0};            // 1 / kappa, s
    double min_gate_window{0};      // receive/detect windows should exceed this, s
    std::vector<std::string> notes;
};

// Requires kappa_a == kappa_b (UnsupportedConfiguration otherwise). n_s
// defaults to the microwave thermal occupation.
BudgetReport noise_budget(const SystemConfig& config, const ModelParams& params,
                          std::optional<double> n_s = std::nullopt,
                          const SteadyState* steady = nullptr);

}  // namespace omt
