// linear_model.hpp — drift and diffusion matrices for the three model levels.
//
// Dynamics in the quadrature basis: dv/dt = A v + sqrt(2 kappa) v_in, with
// second moments obeying d(sigma)/dt = A sigma + sigma A^T + D. An isolated
// mode with occupation nbar relaxes to sigma = (2 nbar + 1) I.
//
// Besides A and D, each model keeps the white-noise input description in the
// interleaved ladder basis (xi_1, xi_1^dag, xi_2, ...):
//   input_correlation(j, k) = <xi_j^dag(t) xi_k(t')> / delta(t - t'),
// where xi_j^dag means the adjoint of element j. Spectra need it because
// normal ordering is not recoverable from the symmetrized D alone.

#pragma once

#include "omt/params.hpp"
#include "omt/quadrature.hpp"

#include <Eigen/Dense>

#include <string>
#include <string_view>
#include <vector>

namespace omt {

struct NoiseChannel {
    std::string label;
    Index mode{0};
    double rate{0};        // amplitude decay rate of the port
    double occupation{0};  // <xi^dag xi> excluding squeezing
    double squeezing{0};   // m: adds m to <xi^dag xi>, sets <xi xi> = -m
};

struct LinearModel {
    std::string label;
    std::vector<std::string> mode_labels;
    Eigen::MatrixXd A;
    Eigen::MatrixXd D;
    Eigen::VectorXd port_rates;          // kappa_u per mode
    Eigen::MatrixXcd input_correlation;  // see file comment
    std::vector<NoiseChannel> noise_channels;

    Index n_modes() const { return static_cast<Index>(mode_labels.size()); }
    // Throws std::out_of_range for an unknown label.
    Index index_of(std::string_view mode) const;
    // "x_a", "p_a", ... in matrix order.
    std::vector<std::string> quadrature_labels() const;
};

struct NoiseModel {
    double m_a{0}, m_b{0}, m_ab{0};
    double delta_a_prime{0}, delta_b_prime{0};
};

// Quadratic Hamiltonian H = 1/2 v^T K v in the quadrature basis. With that
// normalization the coherent drift is 2 Omega K.
class QuadraticHamiltonian {
public:
    explicit QuadraticHamiltonian(Index n_modes);

    // omega a^dag a
    QuadraticHamiltonian& add_frequency(Index mode, double omega);
    // c x_i x_j (i may equal j)
    QuadraticHamiltonian& add_xx(Index i, Index j, double c);
    // g (a_i^dag a_j + a_j^dag a_i)
    QuadraticHamiltonian& add_beam_splitter(Index i, Index j, double g);

    const Eigen::MatrixXd& matrix() const { return k_; }
    Eigen::MatrixXd drift(const Eigen::VectorXd& rates) const;

private:
    void add_entry(Index r, Index c, double v);
    Eigen::MatrixXd k_;
};

Eigen::MatrixXcd thermal_input_correlation(const Eigen::VectorXd& occupations);

// Ladder-basis input correlation for ports with normal moments
// N(j,k) = <xi_j^dag xi_k> and anomalous moments M(j,k) = <xi_j xi_k>.
Eigen::MatrixXcd input_correlation_from_moments(const Eigen::MatrixXcd& normal,
                                                const Eigen::MatrixXcd& anomalous);

// D = B Sigma_sym B with B = diag(sqrt(2 kappa)) per quadrature and Sigma_sym
// the symmetrized quadrature covariance of the inputs.
Eigen::MatrixXd diffusion_from_inputs(const Eigen::VectorXd& rates,
                                      const Eigen::MatrixXcd& input_correlation);

// Quadrature Hamiltonian of the three-mode (a, b, c) system, counter-rotating
// terms included.
QuadraticHamiltonian three_mode_hamiltonian(const ModelParams& params);

LinearModel build_three_mode(const ModelParams& params);
LinearModel build_five_mode(const ModelParams& params);
NoiseModel squeezing_params(const ModelParams& params);
LinearModel build_two_mode_adiabatic(const ModelParams& params);

// Ladder-basis drift M = T^-1 A T (interleaved a, a^dag ordering).
Eigen::MatrixXcd ladder_drift(const LinearModel& model);

struct StabilityReport {
    bool stable{false};
    double spectral_abscissa{0};
    std::string dominant_mode;  // bare mode with the largest weight in the worst eigenvector
    Eigen::VectorXcd eigenvalues;
};

StabilityReport stability_check(const LinearModel& model);

}  // namespace omt
