#include "doctest.h"

#include "fixtures.hpp"
#include "omt/errors.hpp"
#include "omt/evolution.hpp"
#include "omt/linear_model.hpp"
#include "omt/normal_modes.hpp"

#include <cmath>

using namespace omt;

namespace {

const std::vector<std::string> kLabels{"a", "b", "c"};

// Symplectic spectrum: moduli of the eigenvalues of i Omega sigma.
Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& sigma) {
    const Eigen::MatrixXd m = symplectic_form(sigma.rows() / 2) * sigma;
    Eigen::EigenSolver<Eigen::MatrixXd> es(m);
    Eigen::VectorXd v = es.eigenvalues().cwiseAbs();
    std::sort(v.data(), v.data() + v.size());
    return v;
}

Protocol short_protocol(double tau) {
    Protocol pr;
    pr.tau_r = 20;
    pr.tau_d = 20;
    pr.tau = tau;
    pr.check_step_halving = false;
    return pr;
}

ModelParams lz_params() {
    ModelParams p = fixture::fig2();
    p.kappa_a = p.kappa_b = p.gamma = 1e-5;
    p.nbar_b = 0.04;
    p.nbar_c = 0.1;
    return p;
}

}  // namespace

TEST_SUITE("evolution") {

TEST_CASE("thermal state populations") {
    const CovarianceState s = thermal_state(kLabels, Eigen::Vector3d(0, 0.04, 2.5), 3.0);
    CHECK(s.t == 3.0);
    const Eigen::VectorXd n = s.populations();
    CHECK(n(0) == 0.0);
    CHECK(n(1) == doctest::Approx(0.04));
    CHECK(n(2) == doctest::Approx(2.5));
}

TEST_CASE("relaxation reaches the Lyapunov steady state") {
    const ModelParams p = fixture::fig_s2(0.05);
    const LinearModel m = build_three_mode(p);
    const CovarianceState target = lyapunov_steady(m);
    EvolveOptions o;
    o.dt = 0.02;
    o.sample_every = 1000;
    const Trajectory tr = evolve_covariance(m, thermal_state(kLabels, Eigen::Vector3d(1, 2, 3)), 600, o);
    CHECK(tr.final_state.t == doctest::Approx(600));
    CHECK((tr.final_state.sigma - target.sigma).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(tr.warnings.empty());
}

TEST_CASE("the steady state does not move") {
    const LinearModel m = build_three_mode(fixture::fig_s2(0.01));
    const CovarianceState ss = lyapunov_steady(m);
    const Trajectory tr = evolve_covariance(m, ss, 100);
    for (const Eigen::VectorXd& n : tr.bare_populations) {
        CHECK((n - ss.populations()).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("closed dynamics conserve the symplectic spectrum") {
    ModelParams p = fixture::fig2();
    p.kappa_a = p.kappa_b = p.gamma = 0;
    const LinearModel m = build_three_mode(p);
    const CovarianceState init = thermal_state(kLabels, Eigen::Vector3d(0.2, 1.0, 3.0));
    EvolveOptions o;
    o.dt = 0.01;
    const Trajectory tr = evolve_covariance(m, init, 200, o);
    const Eigen::VectorXd before = symplectic_eigenvalues(init.sigma);
    const Eigen::VectorXd after = symplectic_eigenvalues(tr.final_state.sigma);
    CHECK((before - after).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(tr.final_state.sigma.determinant() == doctest::Approx(init.sigma.determinant()).epsilon(1e-8));
}

TEST_CASE("unphysical initial state is reported with its time") {
    const LinearModel m = build_three_mode(fixture::fig2());
    CovarianceState bad = thermal_state(kLabels, Eigen::Vector3d(0, 0, 0), 5.0);
    bad.sigma(0, 0) = 0.5;
    bad.sigma(1, 1) = 0.5;
    try {
        evolve_covariance(m, bad, 10);
        FAIL("expected PhysicalityError");
    } catch (const PhysicalityError& e) {
        CHECK(e.time() == 5.0);
    }
}

TEST_CASE("coarse steps are flagged") {
    const LinearModel m = build_three_mode(fixture::fig2());
    EvolveOptions o;
    o.dt = 0.2;
    const Trajectory tr = evolve_covariance(m, thermal_state(kLabels, Eigen::Vector3d(0, 0, 0)), 2, o);
    CHECK_FALSE(tr.warnings.empty());
}

TEST_CASE("Lyapunov solver rejects unstable models") {
    ModelParams p = fixture::fig2();
    p.delta_a = 1.0;
    p.G_a = 0.2;
    p.kappa_a = p.kappa_b = p.gamma = 1e-3;
    CHECK_THROWS_AS(lyapunov_steady(build_three_mode(p)), InstabilityError);
}

TEST_CASE("polariton projection") {
    ModelParams p = fixture::fig2();
    p.G_a = p.G_b = 0;
    const CovarianceState s = thermal_state(kLabels, Eigen::Vector3d(0.3, 0.04, 0.1));
    auto n = project_polaritons(s, diagonalize(p));
    CHECK(n[0] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(n[1] == doctest::Approx(0.04).epsilon(1e-12));
    CHECK(n[2] == doctest::Approx(0.1).epsilon(1e-12));

    p = fixture::fig2();
    p.delta_a = -0.7;
    const CovarianceState mw = thermal_state(kLabels, Eigen::Vector3d(0, 0.04, 0));
    n = project_polaritons(mw, diagonalize(p));
    CHECK(n[1] == doctest::Approx(0.04).epsilon(0.05));

    p.G_a = -0.01;
    p.G_b = 0.01;
    n = project_polaritons(s, diagonalize(p));
    CHECK(std::abs(n[0] + n[1] + n[2] - 0.44) < 1e-3 * 0.44);

    const CovarianceState five = thermal_state({"a", "b", "c", "a_p", "b_p"}, Eigen::VectorXd::Zero(5));
    CHECK_THROWS_AS(project_polaritons(five, diagonalize(p)), std::invalid_argument);
}

TEST_CASE("protocol timing and feasibility") {
    Protocol pr;
    CHECK(pr.start_time() == 0.0);
    CHECK(pr.ramp_start() == 100.0);
    CHECK(pr.end_time() == 4200.0);
    CHECK(pr.delta_a_at(0) == -0.5);
    CHECK(pr.delta_a_at(100 + 2000) == doctest::Approx(-0.4));
    CHECK(pr.delta_a_at(1e9) == -0.3);

    const Feasibility ok = protocol_feasibility(pr, lz_params());
    CHECK(ok.tau_min == doctest::Approx(25));
    CHECK(ok.tau_max == doctest::Approx(1e5));
    CHECK(ok.ok);
    pr.tau = 40;
    CHECK_FALSE(protocol_feasibility(pr, lz_params()).ok);
    ModelParams lossy = lz_params();
    lossy.kappa_a = 1e-2;
    pr.tau = 4000;
    CHECK_FALSE(protocol_feasibility(pr, lossy).ok);
}

TEST_CASE("uncoupled protocol leaves bare populations frozen") {
    ModelParams p = lz_params();
    p.G_a = p.G_b = 0;
    const ProtocolResult r = run_protocol(short_protocol(200), p);
    for (const Eigen::VectorXd& n : r.trajectory.bare_populations) {
        CHECK(n(0) == doctest::Approx(0).epsilon(1e-9));
        CHECK(n(1) == doctest::Approx(0.04).epsilon(1e-6));
        CHECK(n(2) == doctest::Approx(0.1).epsilon(1e-6));
    }
}

TEST_CASE("slower ramps follow the polaritons more closely") {
    double prev = INFINITY;
    for (double tau : {50.0, 100.0, 200.0, 400.0}) {
        const Protocol pr = short_protocol(tau);
        const ProtocolResult r = run_protocol(pr, lz_params());
        for (const Eigen::VectorXd& n : r.trajectory.bare_populations) CHECK(n.minCoeff() >= -1e-8);
        const double drift = summarize(pr, r.trajectory).polariton_drift;
        CAPTURE(tau);
        CHECK(drift < prev);
        prev = drift;
    }
}

TEST_CASE("step halving check") {
    Protocol pr = short_protocol(200);
    pr.check_step_halving = true;
    const ProtocolResult r = run_protocol(pr, lz_params());
    CHECK(r.step_halving_ok);
    CHECK(r.step_halving_deviation < 1e-4);
}

}
