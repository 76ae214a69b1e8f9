#include "doctest.h"

#include "omt/errors.hpp"
#include "omt/params.hpp"

#include <filesystem>
#include <string>

using namespace omt;

namespace {
std::string cfg(const std::string& name) { return std::string(OMT_CONFIG_DIR) + "/" + name; }

const char* kMinimal = R"(
[mechanics]
omega_m_hz = 4e9
Q = 87e3
T_c_k = 14
[optical]
omega_a_hz = 193.4e12
kappa_a_hz = 850e3
detuning_a_hz = -2e9
[microwave]
omega_b_hz = 300e9
kappa_b_hz = 850e3
detuning_b_hz = -1.6e9
T_b_k = 3
[drive]
G_a_hz = -200e6
G_b_hz = 300e6
)";
}  // namespace

TEST_SUITE("config") {

TEST_CASE("sensitivity file echoes its values") {
    const SystemConfig c = load_config(cfg("paper_sensitivity.cfg"));
    CHECK(c.omega_m == doctest::Approx(kTwoPi * 4e9));
    CHECK(c.gamma == doctest::Approx(kTwoPi * 4e9 / 87e3));
    CHECK(c.gamma / kTwoPi == doctest::Approx(46e3).epsilon(0.01));
    CHECK(c.kappa_a == doctest::Approx(kTwoPi * 850e3));
    CHECK(*c.G_a == doctest::Approx(-kTwoPi * 200e6));
    CHECK(*c.G_b == doctest::Approx(kTwoPi * 300e6));
    CHECK(c.T_c == 14);
    CHECK(c.T_b == 3);
    CHECK(c.detuning_a() == doctest::Approx(-kTwoPi * 2e9));
}

TEST_CASE("every shipped configuration loads") {
    for (const auto& e : std::filesystem::directory_iterator(OMT_CONFIG_DIR)) {
        if (e.path().extension() != ".cfg") continue;
        CAPTURE(e.path().string());
        CHECK_NOTHROW(normalize(load_config(e.path())));
    }
}

TEST_CASE("both drive specifications are rejected") {
    std::string text = kMinimal;
    text += "eta_a_hz = 1e9\neta_b_hz = 1e9\n";
    CHECK_THROWS_AS(parse_config_string(text), ConfigError);
}

TEST_CASE("empty file lists the required keys") {
    try {
        parse_config_string("");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("missing required keys") != std::string::npos);
        CHECK(msg.find("mechanics.omega_m_hz") != std::string::npos);
        CHECK(msg.find("optical.kappa_a_hz") != std::string::npos);
    }
}

TEST_CASE("unknown keys carry their path") {
    std::string text = kMinimal;
    text += "\n[optical2]\nfoo = 1\n";
    CHECK_THROWS_WITH_AS(parse_config_string(text), doctest::Contains("optical2"), ConfigError);
    std::string typo = kMinimal;
    typo.replace(typo.find("kappa_a_hz"), 10, "kapa_a_hz");
    CHECK_THROWS_WITH_AS(parse_config_string(typo), doctest::Contains("optical.kapa_a_hz"), ConfigError);
}

TEST_CASE("bad numbers and exclusive alternatives") {
    std::string text = kMinimal;
    text.replace(text.find("4e9"), 3, "4x9");
    CHECK_THROWS_WITH_AS(parse_config_string(text), doctest::Contains("mechanics.omega_m_hz"), ConfigError);
    std::string both = kMinimal;
    both.replace(both.find("Q = 87e3"), 8, "Q = 87e3\ngamma_hz = 46e3");
    CHECK_THROWS_AS(parse_config_string(both), ConfigError);
}

TEST_CASE("save then load is the identity") {
    for (const char* name : {"paper_sensitivity.cfg", "fig_s1a.cfg", "fig2.cfg"}) {
        const SystemConfig a = load_config(cfg(name));
        const SystemConfig b = parse_config_string(format_config(a));
        CHECK(format_config(b) == format_config(a));
        CHECK(b.omega_m == doctest::Approx(a.omega_m).epsilon(1e-15));
        CHECK(b.omega_ap == doctest::Approx(a.omega_ap).epsilon(1e-15));
        CHECK(b.gamma == doctest::Approx(a.gamma).epsilon(1e-15));
        CHECK(b.nbar_b == a.nbar_b);
        CHECK(b.T_c == a.T_c);
    }
    const auto path = std::filesystem::temp_directory_path() / "omt_roundtrip.cfg";
    const SystemConfig a = load_config(cfg("paper_sensitivity.cfg"));
    save_config(a, path);
    CHECK(format_config(load_config(path)) == format_config(a));
    std::filesystem::remove(path);
}

TEST_CASE("missing file") {
    CHECK_THROWS_AS(load_config("/nonexistent/omt.cfg"), ConfigError);
}

}
