// steady_state.hpp — classical steady state of the driven five-mode device
// and the intermode-scattering noise estimates.
//
// The leading-order steady relations are a one-dimensional self-consistency
// in the mechanical displacement x_c:
//   beta_p  = eta_b / (kappa_b + i g_b0 x_c)     beta  = g_b0 beta_p x_c / Delta_b
//   alpha_p = eta_a / (kappa_a + i g_a0 x_c)     alpha = g_a0 alpha_p x_c / Delta_a
//   x_c     = -(g_b0 |beta_p|^2 + g_a0 |alpha_p|^2) / omega_m
// with Delta the bare pump-cavity detunings. All rates in rad/s.

#pragma once

#include "omt/params.hpp"

#include <array>
#include <complex>

namespace omt {

struct SteadyState {
    std::complex<double> alpha{}, alpha_p{}, beta{}, beta_p{};
    std::complex<double> C{};  // mechanical amplitude, stored as x_c / 2
    double x_c{0};
    int iterations{0};
    double residual{0};
};

struct SteadyOptions {
    double tolerance = 1e-12;
    int max_iterations = 20000;
};

SteadyState solve_steady(const SystemConfig& config, const SteadyOptions& options = {});

// Residuals of the five steady relations, each relative to the magnitude of
// its right-hand side (absolute when that is below 1).
std::array<double, 5> steady_residuals(const SystemConfig& config, const SteadyState& s);

// Tolerance below which |x_c g| is treated as balanced:
// 1e-3 * min(|Delta_a|, |Delta_b|).
double balance_threshold(const SystemConfig& config);

struct BalancedDrive {
    std::complex<double> eta_a{}, eta_b{};
    SteadyState steady;
    bool exact_cancellation{false};  // |x_c g| below balance_threshold on both sides
    double x_c_shift{0};             // max(|x_c g_a0|, |x_c g_b0|), rad/s
};

// Drive strengths that produce alpha_p g_a0 = G_a, beta_p g_b0 = G_b.
// With the targets fixed, x_c = -(G_b^2/g_b0 + G_a^2/g_a0)/omega_m is
// determined; when it is not ~0 the result is flagged.
BalancedDrive balance_pumps(const SystemConfig& config, double target_G_a, double target_G_b);

enum class Side { optical, microwave };

struct ScatteringEstimate {
    double scattering_occupation{0};          // (g0/wm)^2 nbar_p (2 nbar_c + 1)
    double radiation_pressure_occupation{0};  // (g0^2 |pump|^2/wm^2)(gamma/kappa)(2 nbar_c + 1)
    double ratio{0};                          // nbar_p kappa / (|pump|^2 gamma)
};

// Uses normalized params: |beta_p|^2 = G_b^2 / g_b0^2 (likewise optical).
ScatteringEstimate scattering_noise_estimate(const ModelParams& params, double nbar_pump,
                                             Side side = Side::microwave);

}  // namespace omt
