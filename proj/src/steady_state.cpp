#include "omt/steady_state.hpp"

#include "omt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace omt {

namespace {

using cd = std::complex<double>;

// Right-hand side of the x_c relation as a function of x_c.
double displacement_map(const SystemConfig& c, double x) {
    const double pb = std::norm(*c.eta_b) / (c.kappa_b * c.kappa_b + c.g_b0 * c.g_b0 * x * x);
    const double pa = std::norm(*c.eta_a) / (c.kappa_a * c.kappa_a + c.g_a0 * c.g_a0 * x * x);
    return -(c.g_b0 * pb + c.g_a0 * pa) / c.omega_m;
}

SteadyState amplitudes_at(const SystemConfig& c, double x) {
    SteadyState s;
    s.x_c = x;
    s.C = cd(x / 2.0, 0.0);
    s.beta_p = *c.eta_b / cd(c.kappa_b, c.g_b0 * x);
    s.alpha_p = *c.eta_a / cd(c.kappa_a, c.g_a0 * x);
    if (x != 0.0 && c.g_b0 != 0.0) {
        if (c.detuning_b() == 0.0) {
            throw SingularityError("solve_steady: microwave detuning is zero with nonzero x_c");
        }
        s.beta = c.g_b0 * s.beta_p * x / c.detuning_b();
    }
    if (x != 0.0 && c.g_a0 != 0.0) {
        if (c.detuning_a() == 0.0) {
            throw SingularityError("solve_steady: optical detuning is zero with nonzero x_c");
        }
        s.alpha = c.g_a0 * s.alpha_p * x / c.detuning_a();
    }
    return s;
}

double rel(cd lhs, cd rhs) { return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)); }

}  // namespace

SteadyState solve_steady(const SystemConfig& config, const SteadyOptions& options) {
    config.validate();
    if (!config.drive_is_eta()) {
        throw ConfigError("solve_steady needs an eta-specified drive", "drive");
    }
    double x = 0.0;
    double damping = 1.0;
    double prev_step = 0.0;
    double residual = std::numeric_limits<double>::infinity();
    double prev_residual = residual;
    for (int it = 1; it <= options.max_iterations; ++it) {
        const double step = displacement_map(config, x) - x;
        residual = std::abs(step) / std::max(1.0, std::abs(x));
        if (residual < options.tolerance) {
            SteadyState s = amplitudes_at(config, x);
            s.iterations = it;
            s.residual = residual;
            return s;
        }
        // Oscillation or growth: switch to damped updates.
        if ((prev_step != 0.0 && (step > 0) != (prev_step > 0)) || residual > prev_residual) {
            damping = damping == 1.0 ? 0.5 : std::max(damping * 0.5, 1.0 / 1024.0);
        }
        x += damping * step;
        if (!std::isfinite(x)) break;
        prev_step = step;
        prev_residual = residual;
    }
    throw SolverError("solve_steady: x_c fixed point did not converge (last residual " +
                          std::to_string(residual) + ")",
                      residual);
}

std::array<double, 5> steady_residuals(const SystemConfig& c, const SteadyState& s) {
    std::array<double, 5> r{};
    r[0] = rel(s.beta_p, *c.eta_b / cd(c.kappa_b, c.g_b0 * s.x_c));
    r[1] = c.detuning_b() == 0.0 ? std::abs(s.beta)
                                 : rel(s.beta, c.g_b0 * s.beta_p * s.x_c / c.detuning_b());
    r[2] = rel(s.alpha_p, *c.eta_a / cd(c.kappa_a, c.g_a0 * s.x_c));
    r[3] = c.detuning_a() == 0.0 ? std::abs(s.alpha)
                                 : rel(s.alpha, c.g_a0 * s.alpha_p * s.x_c / c.detuning_a());
    const double rhs = -(c.g_b0 * std::norm(s.beta_p) + c.g_a0 * std::norm(s.alpha_p)) / c.omega_m;
    r[4] = std::abs(s.x_c - rhs) / std::max(1.0, std::abs(rhs));
    return r;
}

double balance_threshold(const SystemConfig& c) {
    return 1e-3 * std::min(std::abs(c.detuning_a()), std::abs(c.detuning_b()));
}

BalancedDrive balance_pumps(const SystemConfig& config, double target_G_a, double target_G_b) {
    auto check = [](double G, double g, const char* key) {
        if (G == 0.0) return;
        if (g == 0.0 || G * g <= 0.0) {
            throw ConfigError("infeasible: target coupling must have the sign of the single-photon "
                              "coupling",
                              key);
        }
    };
    check(target_G_a, config.g_a0, "optical.g_a0_hz");
    check(target_G_b, config.g_b0, "microwave.g_b0_hz");

    const double pa = target_G_a == 0.0 ? 0.0 : target_G_a * target_G_a / (config.g_a0 * config.g_a0);
    const double pb = target_G_b == 0.0 ? 0.0 : target_G_b * target_G_b / (config.g_b0 * config.g_b0);
    const double x = -(config.g_b0 * pb + config.g_a0 * pa) / config.omega_m;

    BalancedDrive out;
    const double alpha_p = target_G_a == 0.0 ? 0.0 : target_G_a / config.g_a0;
    const double beta_p = target_G_b == 0.0 ? 0.0 : target_G_b / config.g_b0;
    out.eta_a = cd(config.kappa_a, config.g_a0 * x) * alpha_p;
    out.eta_b = cd(config.kappa_b, config.g_b0 * x) * beta_p;

    SystemConfig driven = config;
    driven.G_a.reset();
    driven.G_b.reset();
    driven.eta_a = out.eta_a;
    driven.eta_b = out.eta_b;
    out.steady = amplitudes_at(driven, x);
    out.steady.residual = std::abs(displacement_map(driven, x) - x);
    out.x_c_shift = std::max(std::abs(x * config.g_a0), std::abs(x * config.g_b0));
    out.exact_cancellation = out.x_c_shift <= balance_threshold(config);
    return out;
}

ScatteringEstimate scattering_noise_estimate(const ModelParams& p, double nbar_pump, Side side) {
    const bool mw = side == Side::microwave;
    const double g = mw ? p.g_b0 : p.g_a0;
    const double G = mw ? p.G_b : p.G_a;
    const double kappa = mw ? p.kappa_b : p.kappa_a;
    const double thermal = 2.0 * p.nbar_c + 1.0;

    ScatteringEstimate e;
    e.scattering_occupation = g * g * nbar_pump * thermal;
    e.radiation_pressure_occupation = G * G * (p.gamma / kappa) * thermal;
    if (e.radiation_pressure_occupation > 0) {
        e.ratio = e.scattering_occupation / e.radiation_pressure_occupation;
    } else {
        e.ratio = e.scattering_occupation > 0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    return e;
}

}  // namespace omt
