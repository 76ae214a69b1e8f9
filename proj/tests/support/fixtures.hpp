// fixtures.hpp — normalized parameter sets used across the tests.

#pragma once

#include "omt/params.hpp"

namespace fixture {

inline omt::ModelParams fig2() {
    omt::ModelParams p;
    p.delta_a = -0.5;
    p.delta_b = -0.4;
    p.G_a = -0.1;
    p.G_b = 0.1;
    p.kappa_a = p.kappa_b = p.gamma = 0.01;
    return p;
}

inline omt::ModelParams fig_s1(double delta_a, double delta_b) {
    omt::ModelParams p;
    p.delta_a = delta_a;
    p.delta_b = delta_b;
    p.G_a = 0.08;
    p.G_b = -0.08;
    p.kappa_a = p.kappa_b = p.gamma = 0.01;
    p.nbar_a = 0;
    p.nbar_ap = 0;
    p.nbar_b = 0.04;
    p.nbar_bp = 0.04;
    p.nbar_c = 0.1;
    return p;
}

inline omt::ModelParams fig_s2(double rate) {
    omt::ModelParams p;
    p.delta_a = -0.5;
    p.delta_b = -0.4;
    p.G_a = 0.05;
    p.G_b = -0.05;
    p.kappa_a = p.kappa_b = p.gamma = rate;
    p.nbar_a = 0;
    p.nbar_b = 0.04;
    p.nbar_c = 0.1;
    return p;
}

}  // namespace fixture
