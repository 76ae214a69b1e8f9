// params.hpp — physical parameter sets, unit conversion, thermal occupations.
//
// SystemConfig holds SI angular frequencies (rad/s) and temperatures (K).
// ModelParams is the same device in units of the mechanical frequency
// (omega_m == 1); every model builder consumes ModelParams only.

#pragma once

#include <complex>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace omt {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kHbar = 1.054571817e-34;      // J s
inline constexpr double kBoltzmann = 1.380649e-23;    // J / K

struct SteadyState;

struct SystemConfig {
    double omega_m{0};   // mechanical frequency
    double omega_a{0};   // optical signal mode
    double omega_b{0};   // microwave signal mode
    double omega_ap{0};  // optical pump
    double omega_bp{0};  // microwave pump
    double g_a0{0};      // single-photon couplings, signed
    double g_b0{0};
    double kappa_a{0};   // amplitude decay rates
    double kappa_b{0};
    double gamma{0};
    double T_a{0}, T_b{0}, T_c{0};

    // Direct occupation overrides; when set they replace the Bose-Einstein
    // value computed from the matching temperature.
    std::optional<double> nbar_a, nbar_b, nbar_c;
    std::optional<double> nbar_ap, nbar_bp;

    // Exactly one drive specification is present.
    std::optional<std::complex<double>> eta_a, eta_b;
    std::optional<double> G_a, G_b;

    // Static mechanical displacement used with a direct G specification.
    double x_c{0};

    bool drive_is_eta() const noexcept { return eta_a.has_value(); }
    double detuning_a() const noexcept { return omega_ap - omega_a; }
    double detuning_b() const noexcept { return omega_bp - omega_b; }

    // Throws ConfigError naming the violated invariant.
    void validate() const;

    bool operator==(const SystemConfig&) const = default;
};

struct ModelParams {
    double delta_a{0}, delta_b{0};
    double G_a{0}, G_b{0};
    double kappa_a{0}, kappa_b{0}, gamma{0};
    double nbar_a{0}, nbar_b{0}, nbar_c{0};
    double nbar_ap{0}, nbar_bp{0};
    double g_a0{0}, g_b0{0};
    double x_c{0};

    // Rates >= 0, occupations >= 0, all finite. Throws ConfigError.
    void validate() const;
};

struct RegimeCheck {
    bool ok{false};
    double margin{0};  // ratio behind the "much greater" condition
};

struct RegimeReport {
    RegimeCheck adiabatic_elimination;  // omega_m >> |Delta|, |G|, kappa, gamma
    RegimeCheck sideband_resolved;      // omega_m, |Delta_a|, |Delta_b| >> kappa_a, kappa_b, gamma
    RegimeCheck coupling_weak;          // |G| / omega_m << 1
    std::vector<std::string> messages;
};

// "Much greater than" is read as a ratio of at least this factor.
inline constexpr double kRegimeMargin = 5.0;

// Bose-Einstein occupation 1 / (exp(hbar omega / k_B T) - 1); exactly 0 at T = 0.
double thermal_occupation(double omega, double temperature);

SystemConfig load_config(const std::filesystem::path& path);
SystemConfig parse_config(std::istream& in, const std::string& source = "<stream>");
SystemConfig parse_config_string(const std::string& text);
void save_config(const SystemConfig& config, const std::filesystem::path& path);
std::string format_config(const SystemConfig& config);

// Divides every rate by omega_m and evaluates occupations. An eta-specified
// drive needs the steady state for G = alpha_p g_a0, beta_p g_b0 and x_c.
ModelParams normalize(const SystemConfig& config, const SteadyState* steady = nullptr);

// SI view of the normalized rates (rad/s), the inverse of normalize.
struct SiRates {
    double delta_a, delta_b, G_a, G_b, kappa_a, kappa_b, gamma;
};
SiRates denormalize(const ModelParams& params, double omega_m);

RegimeReport validate_regime(const ModelParams& params);

}  // namespace omt
