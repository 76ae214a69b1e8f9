// evolution.hpp — Gaussian covariance dynamics, Lyapunov steady states and the
// three-step detection protocol (receive, adiabatic ramp, detect).
//
// Times are in units of 1/omega_m. Populations are normally ordered,
// n = (sigma_xx + sigma_pp - 2) / 4.

#pragma once

#include "omt/linear_model.hpp"
#include "omt/normal_modes.hpp"
#include "omt/params.hpp"

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace omt {

struct CovarianceState {
    Eigen::MatrixXd sigma;
    double t{0};
    std::vector<std::string> mode_labels;

    Index n_modes() const { return static_cast<Index>(mode_labels.size()); }
    Eigen::VectorXd populations() const;
};

CovarianceState thermal_state(const std::vector<std::string>& mode_labels,
                              const Eigen::VectorXd& occupations, double t = 0);

// Throws InstabilityError for an unstable model and SolverError when the
// residual exceeds 1e-10.
CovarianceState lyapunov_steady(const LinearModel& model);

using ModelAt = std::function<LinearModel(double t)>;

struct EvolveOptions {
    double dt{0.04};
    int sample_every{20};            // steps between samples (the final time is always sampled)
    double physicality_tol{1e-8};
    // Called at t0 and every sample; may throw to abort the run.
    std::function<void(const CovarianceState&)> observer;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<std::string> mode_labels;
    std::vector<Eigen::VectorXd> bare_populations;
    std::vector<std::array<double, 3>> polariton_populations;  // empty unless tracked
    std::vector<std::string> warnings;
    CovarianceState final_state;
};

// RK4 on d(sigma)/dt = A sigma + sigma A^T + D from initial.t to t_end.
// Throws PhysicalityError (with the time) when sigma + i Omega drops below
// -physicality_tol at a sample.
Trajectory evolve_covariance(const ModelAt& model_at, const CovarianceState& initial, double t_end,
                             const EvolveOptions& options = {});
Trajectory evolve_covariance(const LinearModel& model, const CovarianceState& initial, double t_end,
                             const EvolveOptions& options = {});

// Normal-mode occupations (n_A, n_B, n_C) of a three-mode state.
std::array<double, 3> project_polaritons(const CovarianceState& state, const PolaritonSpectrum& spectrum);

enum class RampShape { linear };

struct Protocol {
    double tau_r{100};
    double tau{4000};
    double tau_d{100};
    double delta_a_start{-0.5};
    double delta_a_end{-0.3};
    RampShape ramp_shape{RampShape::linear};
    std::optional<double> t0;  // ramp start; defaults to tau_r (the run starts at t0 - tau_r)
    double dt{0.04};
    int sample_every{25};
    bool check_step_halving{true};

    double ramp_start() const { return t0.value_or(tau_r); }
    double start_time() const { return ramp_start() - tau_r; }
    double ramp_end() const { return ramp_start() + tau; }
    double end_time() const { return ramp_end() + tau_d; }
    double delta_a_at(double t) const;
};

struct Feasibility {
    double tau_min{0};  // omega_m / (4 |G_a G_b|)
    double tau_max{0};  // 1 / max(kappa_a, kappa_b)
    bool ok{false};     // tau_min * margin <= tau <= tau_max / margin
    std::vector<std::string> messages;
};

Feasibility protocol_feasibility(const Protocol& protocol, const ModelParams& params);

struct ProtocolResult {
    Trajectory trajectory;
    Feasibility feasibility;
    double step_halving_deviation{0};  // max population difference against dt/2
    bool step_halving_ok{true};
};

// Three-mode run with Delta_a(t) following the protocol; polaritons tracked
// by mode overlap from the composition labels at the start.
ProtocolResult run_protocol(const Protocol& protocol, const ModelParams& params);

struct ProtocolSummary {
    double receive_n_a{0}, receive_n_b{0};  // averages over the receive window
    double detect_n_a{0}, detect_n_b{0};    // averages over the detect window
    double polariton_drift{0};  // max |n_A,B(t) - n_A,B(t0)| over the ramp / (n_A + n_B)(t0)
};

ProtocolSummary summarize(const Protocol& protocol, const Trajectory& trajectory);

}  // namespace omt
