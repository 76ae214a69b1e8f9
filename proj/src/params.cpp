#include "omt/params.hpp"

#include "omt/errors.hpp"
#include "omt/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace omt {

double thermal_occupation(double omega, double temperature) {
    if (!(omega > 0) || !std::isfinite(omega)) {
        throw DomainError("thermal_occupation: omega must be positive and finite");
    }
    if (temperature < 0 || !std::isfinite(temperature)) {
        throw DomainError("thermal_occupation: temperature must be >= 0");
    }
    if (temperature == 0) return 0.0;
    const double x = kHbar * omega / (kBoltzmann * temperature);
    return 1.0 / std::expm1(x);
}

namespace {

void require(bool cond, const std::string& key, const std::string& msg) {
    if (!cond) throw ConfigError(msg, key);
}

void require_occupation(const std::optional<double>& v, const std::string& key) {
    if (v) require(std::isfinite(*v) && *v >= 0, key, "occupation must be >= 0");
}

}  // namespace

void SystemConfig::validate() const {
    require(omega_m > 0 && std::isfinite(omega_m), "mechanics.omega_m_hz", "must be > 0");
    require(kappa_a > 0, "optical.kappa_a_hz", "must be > 0");
    require(kappa_b > 0, "microwave.kappa_b_hz", "must be > 0");
    require(gamma > 0, "mechanics.gamma_hz", "must be > 0");
    require(T_a >= 0, "optical.T_a_k", "must be >= 0");
    require(T_b >= 0, "microwave.T_b_k", "must be >= 0");
    require(T_c >= 0, "mechanics.T_c_k", "must be >= 0");
    require_occupation(nbar_a, "optical.nbar_a");
    require_occupation(nbar_b, "microwave.nbar_b");
    require_occupation(nbar_c, "mechanics.nbar_c");
    require_occupation(nbar_ap, "optical.nbar_ap");
    require_occupation(nbar_bp, "microwave.nbar_bp");
    const bool has_eta = eta_a.has_value() || eta_b.has_value();
    const bool has_g = G_a.has_value() || G_b.has_value();
    require(!(has_eta && has_g), "drive",
            "specify either eta_a_hz/eta_b_hz or G_a_hz/G_b_hz, not both");
    require(has_eta || has_g, "drive", "missing drive: need eta_a_hz/eta_b_hz or G_a_hz/G_b_hz");
    if (has_eta) require(eta_a && eta_b, "drive", "eta_a_hz and eta_b_hz must both be given");
    if (has_g) require(G_a && G_b, "drive", "G_a_hz and G_b_hz must both be given");
}

void ModelParams::validate() const {
    auto rate = [](double v, const char* name) {
        require(std::isfinite(v) && v >= 0, name, "rate must be finite and >= 0");
    };
    rate(kappa_a, "kappa_a");
    rate(kappa_b, "kappa_b");
    rate(gamma, "gamma");
    for (auto [v, name] : {std::pair{nbar_a, "nbar_a"}, std::pair{nbar_b, "nbar_b"},
                           std::pair{nbar_c, "nbar_c"}, std::pair{nbar_ap, "nbar_ap"},
                           std::pair{nbar_bp, "nbar_bp"}}) {
        require(std::isfinite(v) && v >= 0, name, "occupation must be >= 0");
    }
    for (double v : {delta_a, delta_b, G_a, G_b, g_a0, g_b0, x_c}) {
        require(std::isfinite(v), "params", "non-finite parameter");
    }
}

ModelParams normalize(const SystemConfig& config, const SteadyState* steady) {
    config.validate();
    const double wm = config.omega_m;
    ModelParams p;
    double x_c = config.x_c;
    double G_a = 0;
    double G_b = 0;
    if (config.drive_is_eta()) {
        if (steady == nullptr) {
            throw DependencyError("eta-specified drive needs the steady state to derive G and x_c",
                                  "drive");
        }
        x_c = steady->x_c;
        G_a = std::abs(steady->alpha_p) * config.g_a0;
        G_b = std::abs(steady->beta_p) * config.g_b0;
    } else {
        G_a = *config.G_a;
        G_b = *config.G_b;
        if (steady != nullptr) x_c = steady->x_c;
    }
    p.delta_a = (config.detuning_a() + x_c * config.g_a0) / wm;
    p.delta_b = (config.detuning_b() + x_c * config.g_b0) / wm;
    p.G_a = G_a / wm;
    p.G_b = G_b / wm;
    p.kappa_a = config.kappa_a / wm;
    p.kappa_b = config.kappa_b / wm;
    p.gamma = config.gamma / wm;
    auto occ = [](const std::optional<double>& direct, double omega, double temperature) {
        if (direct) return *direct;
        if (temperature == 0) return 0.0;
        return thermal_occupation(omega, temperature);
    };
    p.nbar_a = occ(config.nbar_a, config.omega_a, config.T_a);
    p.nbar_b = occ(config.nbar_b, config.omega_b, config.T_b);
    p.nbar_c = occ(config.nbar_c, config.omega_m, config.T_c);
    p.nbar_ap = occ(config.nbar_ap, config.omega_a, config.T_a);
    p.nbar_bp = occ(config.nbar_bp, config.omega_b, config.T_b);
    p.g_a0 = config.g_a0 / wm;
    p.g_b0 = config.g_b0 / wm;
    p.x_c = x_c;
    return p;
}

SiRates denormalize(const ModelParams& p, double omega_m) {
    return {p.delta_a * omega_m, p.delta_b * omega_m, p.G_a * omega_m, p.G_b * omega_m,
            p.kappa_a * omega_m, p.kappa_b * omega_m, p.gamma * omega_m};
}

namespace {

std::string fmt_ratio(double r) {
    std::ostringstream os;
    os.precision(3);
    os << r;
    return os.str();
}

double safe_ratio(double num, double den) {
    if (den == 0) return std::numeric_limits<double>::infinity();
    return num / den;
}

}  // namespace

RegimeReport validate_regime(const ModelParams& p) {
    RegimeReport r;
    const double slow = std::max({std::abs(p.delta_a), std::abs(p.delta_b), std::abs(p.G_a),
                                  std::abs(p.G_b), p.kappa_a, p.kappa_b, p.gamma});
    r.adiabatic_elimination.margin = safe_ratio(1.0, slow);
    r.adiabatic_elimination.ok = r.adiabatic_elimination.margin >= kRegimeMargin;

    const double fast = std::min({1.0, std::abs(p.delta_a), std::abs(p.delta_b)});
    const double damping = std::max({p.kappa_a, p.kappa_b, p.gamma});
    r.sideband_resolved.margin = safe_ratio(fast, damping);
    r.sideband_resolved.ok = r.sideband_resolved.margin >= kRegimeMargin;

    r.coupling_weak.margin = safe_ratio(1.0, std::max(std::abs(p.G_a), std::abs(p.G_b)));
    r.coupling_weak.ok = r.coupling_weak.margin >= kRegimeMargin;

    auto note = [&](const RegimeCheck& c, const std::string& what) {
        r.messages.push_back(what + (c.ok ? " holds" : " violated") + " (ratio " +
                             fmt_ratio(c.margin) + ", required >= " + fmt_ratio(kRegimeMargin) + ")");
    };
    note(r.adiabatic_elimination, "adiabatic elimination: omega_m >> |Delta|, |G|, kappa, gamma");
    note(r.sideband_resolved, "resolved sidebands: omega_m, |Delta_a|, |Delta_b| >> kappa, gamma");
    note(r.coupling_weak, "weak coupling: |G|/omega_m << 1");
    return r;
}

}  // namespace omt
