#include "doctest.h"

#include "fixtures.hpp"
#include "oracles.hpp"
#include "omt/errors.hpp"
#include "omt/evolution.hpp"
#include "omt/linear_model.hpp"
#include "omt/spectra.hpp"

#include <cmath>
#include <random>

using namespace omt;

namespace {

ModelParams isolated() {
    ModelParams p = fixture::fig_s1(-0.5, -0.4);
    p.G_a = p.G_b = 0;
    p.nbar_a = 0.3;
    return p;
}

SystemConfig sensitivity() {
    SystemConfig c;
    c.omega_m = kTwoPi * 4e9;
    c.gamma = c.omega_m / 87e3;
    c.omega_a = kTwoPi * 193.4e12;
    c.omega_b = kTwoPi * 300e9;
    c.omega_ap = c.omega_a - kTwoPi * 2e9;
    c.omega_bp = c.omega_b - kTwoPi * 1.6e9;
    c.kappa_a = c.kappa_b = kTwoPi * 850e3;
    c.T_c = 14;
    c.T_b = 3;
    c.G_a = -kTwoPi * 200e6;
    c.G_b = kTwoPi * 300e6;
    return c;
}

double mech_term(const SystemConfig& c) { return noise_budget(c, normalize(c)).mech_noise_term; }

}  // namespace

TEST_SUITE("spectra") {

TEST_CASE("response matrix solves the linear system") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    const LinearModel m = build_five_mode(fixture::fig_s1(-0.5, -0.4));
    for (int i = 0; i < 20; ++i) {
        const double w = 2 * u(rng);
        const Eigen::MatrixXcd x = response_matrix(m, w);
        const Eigen::MatrixXcd lhs =
            (std::complex<double>(0, -w) * Eigen::MatrixXcd::Identity(10, 10) - m.A.cast<std::complex<double>>()) * x;
        Eigen::VectorXd b(10);
        for (Index k = 0; k < 5; ++k) b(2 * k) = b(2 * k + 1) = std::sqrt(2 * m.port_rates(k));
        CHECK((lhs - b.cast<std::complex<double>>().asDiagonal().toDenseMatrix()).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("undamped system is singular on resonance") {
    ModelParams p = fixture::fig2();
    p.G_a = p.G_b = 0;
    p.kappa_a = p.kappa_b = p.gamma = 0;
    const LinearModel m = build_three_mode(p);
    CHECK_THROWS_AS(response_matrix(m, 0.5), SingularityError);
    CHECK_NOTHROW(response_matrix(m, 0.7));
}

TEST_CASE("isolated thermal mode is a Lorentzian") {
    const LinearModel m = build_three_mode(isolated());
    const std::vector<double> g = adaptive_grid(m);
    const PSDResult r = psd(m, g, "a");
    CHECK(r.mode == "a");
    CHECK(r.model_label == "three-mode");
    for (std::size_t i = 0; i < g.size(); i += 97) {
        CHECK(r.S[i] == doctest::Approx(oracle::lorentzian_psd(g[i], 0.5, 0.01, 0.3)).epsilon(1e-10));
    }
    const Peak pk = max_in_window(r, 0.5, 0.05);
    CHECK(pk.omega == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(psd_at(r, 0.5 + 0.01) == doctest::Approx(pk.value / 2).epsilon(1e-3));
    const auto peaks = local_maxima(r);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].omega == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("integrated spectrum gives the occupation") {
    ModelParams p = isolated();
    const LinearModel m = build_three_mode(p);
    const OccupationEstimate b = mean_occupation_from_psd(psd(m, adaptive_grid(m), "b"));
    CHECK(b.coverage_ok);
    CHECK(b.value == doctest::Approx(0.04).epsilon(0.01));

    p.nbar_a = p.nbar_b = p.nbar_c = 0;
    const LinearModel cold = build_three_mode(p);
    CHECK(std::abs(mean_occupation_from_psd(psd(cold, adaptive_grid(cold), "a")).value) < 1e-14);
}

TEST_CASE("integrated spectra match Lyapunov for every model") {
    const ModelParams p = fixture::fig_s1(-0.5, -0.4);
    for (const LinearModel& m : {build_three_mode(p), build_five_mode(p), build_two_mode_adiabatic(p)}) {
        CAPTURE(m.label);
        const Eigen::VectorXd n = lyapunov_steady(m).populations();
        const std::vector<double> g = adaptive_grid(m);
        for (const std::string mode : {"a", "b"}) {
            const PSDResult r = psd(m, g, mode);
            for (double s : r.S) CHECK(s >= -1e-12);
            const OccupationEstimate e = mean_occupation_from_psd(r);
            CHECK(e.value == doctest::Approx(n(m.index_of(mode))).epsilon(0.01));
        }
    }
}

TEST_CASE("spectra of unstable models are refused") {
    ModelParams p = fixture::fig2();
    p.delta_a = 1.0;
    p.G_a = 0.2;
    p.kappa_a = p.kappa_b = p.gamma = 1e-3;
    const LinearModel m = build_three_mode(p);
    CHECK_THROWS_AS(psd(m, {0.0, 0.5}, "a"), InstabilityError);
}

TEST_CASE("unknown mode label") {
    const LinearModel m = build_three_mode(isolated());
    CHECK_THROWS_AS(psd(m, {0.0, 0.5}, "z"), std::out_of_range);
}

TEST_CASE("adaptive grid resolves every resonance") {
    const LinearModel m = build_three_mode(isolated());
    const std::vector<double> g = adaptive_grid(m);
    CHECK(std::is_sorted(g.begin(), g.end()));
    CHECK(g.front() == doctest::Approx(-12));
    CHECK(g.back() == doctest::Approx(12));
    for (double w0 : {0.5, 0.4, 1.0, -0.5}) {
        const auto it = std::lower_bound(g.begin(), g.end(), w0);
        CHECK(*it - *(it - 1) <= 0.01 / 10 + 1e-12);
    }
}

TEST_CASE("cavity transfer function") {
    const double k = 0.3;
    CHECK(transfer_function(0, k).gain == std::complex<double>(1, 0));
    CHECK(std::abs(transfer_function(0, k).reflection) == 0.0);
    CHECK(std::norm(transfer_function(k, k).gain) == doctest::Approx(0.5));
    CHECK(std::abs(transfer_function(1e6, k).gain) < 1e-6);
    CHECK(std::abs(transfer_function(1e6, k).reflection - std::complex<double>(-1, 0)) < 1e-6);
    for (double w = -5; w <= 5; w += 0.5) {
        const TransferFunction t = transfer_function(w, k);
        CHECK(std::norm(t.gain) + std::norm(t.reflection) == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK_THROWS_AS(transfer_function(0, 0), DomainError);
    CHECK_THROWS_AS(transfer_function(0, -1), DomainError);
}

TEST_CASE("mechanical noise kernel") {
    ModelParams p = fixture::fig_s2(0.01);
    CHECK(std::abs(mechanical_noise_correlation(p, 1e4)) < 1e-30);
    const double pre = p.G_a * p.G_a / (2 * p.kappa_a);
    const std::complex<double> m0 = mechanical_noise_correlation(p, 0);
    CHECK(m0.real() == doctest::Approx(pre * (2 * p.nbar_c + 1)));

    const double T = 3000;
    const long n = 600000;
    auto f = [&](double t) { return mechanical_noise_correlation(p, t); };
    const std::complex<double> integral = oracle::simpson(f, -T, 0.0, n) + oracle::simpson(f, 0.0, T, n);
    const double m_a = squeezing_params(p).m_a;
    CHECK(integral.real() == doctest::Approx(m_a / (1 + p.gamma * p.gamma)).epsilon(1e-6));
    CHECK(std::abs(integral.imag()) < 1e-9);

    p.nbar_c = 0;
    const double t = 2.7;
    const std::complex<double> vac = pre * std::exp(std::complex<double>(-p.gamma, 1.0) * t);
    CHECK(std::abs(mechanical_noise_correlation(p, t) - vac) < 1e-15);
    p.kappa_a = 0;
    CHECK_THROWS_AS(mechanical_noise_correlation(p, 0), DomainError);
}

TEST_CASE("conversion frequencies") {
    SystemConfig c = sensitivity();
    c.G_a = c.G_b = 0.0;
    ModelParams p = normalize(c);
    ConversionFrequencies f = conversion_frequencies(c, p);
    CHECK(f.omega_s == c.omega_b);
    CHECK(f.omega_o == c.omega_a);

    c = sensitivity();
    p = normalize(c);
    f = conversion_frequencies(c, p);
    CHECK((f.omega_s - c.omega_b) / kTwoPi == doctest::Approx(-45e6).epsilon(1e-9));
    CHECK((f.omega_o - c.omega_a) / kTwoPi == doctest::Approx(-20e6).epsilon(1e-9));
}

TEST_CASE("sensitivity budget") {
    const SystemConfig c = sensitivity();
    const BudgetReport r = noise_budget(c, normalize(c));
    CHECK(r.mech_noise_term >= 0.048);
    CHECK(r.mech_noise_term <= 0.072);
    CHECK(r.n_s_from_temperature);
    CHECK(r.n_o == doctest::Approx(r.n_s + r.mech_noise_term));
    CHECK(r.dead_time > 100e-9);
    CHECK(r.dead_time < 300e-9);
    CHECK(r.window_feasible);
    CHECK(r.tau_min < r.tau_max);
    CHECK(noise_budget(c, normalize(c), 0.5).n_s == 0.5);
}

TEST_CASE("budget needs equal linewidths") {
    SystemConfig c = sensitivity();
    c.kappa_b *= 1.5;
    CHECK_THROWS_AS(noise_budget(c, normalize(c)), UnsupportedConfiguration);
}

TEST_CASE("budget without mechanical noise passes the input through") {
    const SystemConfig c = sensitivity();
    ModelParams p = normalize(c);
    p.nbar_c = 0;
    p.gamma = 0;
    const BudgetReport r = noise_budget(c, p, 0.2);
    CHECK(r.n_o == 0.2);
}

TEST_CASE("mechanical noise term is monotone") {
    const double base = mech_term(sensitivity());
    SystemConfig c = sensitivity();
    c.T_c = 20;
    CHECK(mech_term(c) > base);
    c = sensitivity();
    c.gamma *= 2;
    CHECK(mech_term(c) > base);
    c = sensitivity();
    *c.G_b *= 1.2;
    CHECK(mech_term(c) > base);
    c = sensitivity();
    c.kappa_a = c.kappa_b = c.kappa_a * 2;
    CHECK(mech_term(c) < base);
    c = sensitivity();
    c.omega_m *= 1.5;
    c.omega_ap = c.omega_a - kTwoPi * 2e9;
    CHECK(mech_term(c) < base);
}

}
