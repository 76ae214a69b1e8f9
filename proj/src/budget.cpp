#include "omt/errors.hpp"
#include "omt/spectra.hpp"

#include <cmath>
#include <sstream>

namespace omt {

BudgetReport noise_budget(const SystemConfig& config, const ModelParams& params,
                          std::optional<double> n_s, const SteadyState* steady) {
    const double ka = params.kappa_a, kb = params.kappa_b;
    if (std::abs(ka - kb) > 1e-12 * std::max(std::abs(ka), std::abs(kb))) {
        throw UnsupportedConfiguration(
            "noise budget assumes kappa_a == kappa_b; choose symmetric cavity linewidths", "kappa_b_hz");
    }
    if (!(ka > 0)) throw ConfigError("noise budget needs kappa > 0", "kappa_a_hz");
    const double wm = config.omega_m;

    BudgetReport r;
    r.n_s_from_temperature = !n_s.has_value();
    r.n_s = n_s.value_or(params.nbar_b);
    r.nbar_c = params.nbar_c;
    r.mech_noise_term = (params.G_a * params.G_a + params.G_b * params.G_b) * params.gamma *
                        (2.0 * params.nbar_c + 1.0) / ka;
    r.n_o = r.n_s + r.mech_noise_term;

    const auto f = conversion_frequencies(config, params, steady);
    r.omega_s = f.omega_s;
    r.omega_o = f.omega_o;

    const double kappa_si = ka * wm;
    const double gg = std::abs(params.G_a * params.G_b);
    r.tau_max = 1.0 / kappa_si;
    r.tau_min = gg > 0 ? 1.0 / (4.0 * gg * wm) : INFINITY;
    r.window_ratio = r.tau_max / r.tau_min;
    r.window_feasible = r.tau_min < r.tau_max;
    r.dead_time = 1.0 / kappa_si;
    r.min_gate_window = kRegimeMargin * r.dead_time;

    if (!r.window_feasible) {
        r.notes.push_back("adiabatic window empty: omega_m/(4|G_a G_b|) >= 1/kappa");
    } else if (r.window_ratio < kRegimeMargin * kRegimeMargin) {
        std::ostringstream msg;
        msg << "adiabatic window narrow: tau_max/tau_min = " << r.window_ratio;
        r.notes.push_back(msg.str());
    }
    std::ostringstream gate;
    gate << "receive and detect windows should exceed " << r.min_gate_window << " s (>> 1/kappa)";
    r.notes.push_back(gate.str());
    return r;
}

}  // namespace omt
