// normal_modes.hpp — Bogoliubov diagonalization of the dissipation-free
// three-mode Hamiltonian into polaritons A, B, C.
//
// A normal mode k is the operator A_k = c_k^T v (v the bare quadratures),
// normalized so [A_k, A_k^dag] = 1 and evolving as exp(-i omega_k t). The
// normal quadratures are X_k = 2 Re(c_k)^T v and P_k = 2 Im(c_k)^T v.

#pragma once

#include "omt/params.hpp"
#include "omt/quadrature.hpp"

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace omt {

// Normal modes of a positive-definite quadratic Hamiltonian H = 1/2 v^T K v,
// in ascending frequency order.
struct NormalModes {
    Eigen::VectorXd omega;
    Eigen::MatrixXcd vectors;      // column k is c_k
    Eigen::MatrixXd transform;     // rows (X_1, P_1, X_2, P_2, ...)
    Eigen::MatrixXd composition;   // (normal, bare): |u|^2 - |v|^2
};

// Throws SpectrumError when K is not positive definite.
NormalModes williamson(const Eigen::MatrixXd& K);

// |[A_j, A_k^dag]| between modes of two (nearby) Hamiltonians; 1 for the
// same mode, 0 for orthogonal ones.
Eigen::MatrixXd mode_overlap(const Eigen::MatrixXcd& previous, const Eigen::MatrixXcd& current);

struct PolaritonSpectrum {
    double omega_A{0}, omega_B{0}, omega_C{0};
    Eigen::Matrix3d composition;  // rows A, B, C; columns a, b, c
    Eigen::MatrixXd transform;    // 6x6, rows (X_A, P_A, X_B, P_B, X_C, P_C)
    Eigen::MatrixXcd vectors;     // 6x3, columns A, B, C

    std::array<double, 3> frequencies() const { return {omega_A, omega_B, omega_C}; }
    std::array<double, 3> sorted_frequencies() const;
};

// Labels by the permutation that maximizes the summed bare-mode weight
// (A ~ a, B ~ b, C ~ c).
PolaritonSpectrum diagonalize(const ModelParams& params);

// Relabels `modes` to follow `previous` by maximal overlap; ties go to the
// closest frequency.
PolaritonSpectrum track(const NormalModes& modes, const PolaritonSpectrum& previous);

struct SweepOptions {
    // Grid point where labels are assigned by composition before tracking
    // outward. Defaults to halfway between the mechanical and microwave
    // resonances, where all three polaritons are close to bare modes.
    std::optional<double> anchor_delta_a;
    unsigned threads{0};
};

struct SweepPoint {
    double delta_a{0};
    std::optional<PolaritonSpectrum> spectrum;  // empty when flagged
    std::string error;
};

// grid must be sorted ascending. Unstable points are flagged, not thrown.
std::vector<SweepPoint> spectrum_sweep(const ModelParams& params,
                                       const std::vector<double>& delta_a_grid,
                                       const SweepOptions& options = {});

enum class Crossing { mechanical, electromagnetic };

struct CrossingGap {
    double gap{0};
    double delta_a{0};
};

// Minimal separation of the two sorted branches that meet at the resonance
// (Delta_a = -omega_m or Delta_a = Delta_b). Throws SpectrumError when no
// interior minimum exists in the scan window.
CrossingGap crossing_gap(const ModelParams& params, Crossing which);

}  // namespace omt
