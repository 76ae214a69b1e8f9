// fock_oracle.hpp — truncated-Fock Lindblad integrator for the three-mode
// model, used to validate the Gaussian covariance engine.
//
// H = -Delta_a a^dag a - Delta_b b^dag b + c^dag c
//     + G_a (a + a^dag)(c + c^dag) + G_b (b + b^dag)(c + c^dag)
// Each mode u has dissipators 2 kappa_u (nbar_u + 1) L[u] + 2 kappa_u nbar_u L[u^dag],
// matching amplitude damping at kappa_u in the Langevin picture.

#pragma once

#include "omt/params.hpp"

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace omt {

struct FockOptions {
    std::array<int, 3> cutoff{3, 3, 3};  // highest retained Fock number per mode (a, b, c)
    double t_end{1000};
    double dt{0.025};
    int sample_every{40};
    double leakage_limit{1e-3};
};

struct FockTrajectory {
    std::vector<double> times;
    std::vector<Eigen::Vector3d> populations;  // <a^dag a>, <b^dag b>, <c^dag c>
    double max_leakage{0};                     // largest top-level population seen
    double initial_truncation{0};              // thermal weight discarded by the cutoff
};

// Starts from the product thermal state with the bath occupations. Throws
// ConfigError for cutoffs outside [1, 5] or total dimension above 216, and
// LeakageError when a top-level population exceeds leakage_limit.
FockTrajectory fock_oracle(const ModelParams& params, const FockOptions& options = {});

}  // namespace omt
