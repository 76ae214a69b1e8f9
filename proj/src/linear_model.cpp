#include "omt/linear_model.hpp"

#include "omt/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace omt {

using cd = std::complex<double>;

Index LinearModel::index_of(std::string_view mode) const {
    for (std::size_t i = 0; i < mode_labels.size(); ++i) {
        if (mode_labels[i] == mode) return static_cast<Index>(i);
    }
    throw std::out_of_range("model '" + label + "' has no mode '" + std::string(mode) + "'");
}

std::vector<std::string> LinearModel::quadrature_labels() const {
    std::vector<std::string> out;
    for (const auto& m : mode_labels) {
        out.push_back("x_" + m);
        out.push_back("p_" + m);
    }
    return out;
}

QuadraticHamiltonian::QuadraticHamiltonian(Index n_modes)
    : k_(Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes)) {}

void QuadraticHamiltonian::add_entry(Index r, Index c, double v) {
    if (r == c) {
        k_(r, r) += 2.0 * v;
    } else {
        k_(r, c) += v;
        k_(c, r) += v;
    }
}

QuadraticHamiltonian& QuadraticHamiltonian::add_frequency(Index mode, double omega) {
    k_(2 * mode, 2 * mode) += 0.5 * omega;
    k_(2 * mode + 1, 2 * mode + 1) += 0.5 * omega;
    return *this;
}

QuadraticHamiltonian& QuadraticHamiltonian::add_xx(Index i, Index j, double c) {
    add_entry(2 * i, 2 * j, c);
    return *this;
}

QuadraticHamiltonian& QuadraticHamiltonian::add_beam_splitter(Index i, Index j, double g) {
    add_entry(2 * i, 2 * j, 0.5 * g);
    add_entry(2 * i + 1, 2 * j + 1, 0.5 * g);
    return *this;
}

Eigen::MatrixXd QuadraticHamiltonian::drift(const Eigen::VectorXd& rates) const {
    const Index n = k_.rows() / 2;
    if (rates.size() != n) throw std::invalid_argument("drift: one rate per mode required");
    Eigen::MatrixXd a = 2.0 * symplectic_form<double>(n) * k_;
    for (Index m = 0; m < n; ++m) {
        a(2 * m, 2 * m) -= rates(m);
        a(2 * m + 1, 2 * m + 1) -= rates(m);
    }
    return a;
}

Eigen::MatrixXcd input_correlation_from_moments(const Eigen::MatrixXcd& normal,
                                                const Eigen::MatrixXcd& anomalous) {
    const Index n = normal.rows();
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    for (Index j = 0; j < n; ++j) {
        for (Index k = 0; k < n; ++k) {
            c(2 * j, 2 * k) = normal(j, k);
            c(2 * j + 1, 2 * k + 1) = normal(k, j) + (j == k ? 1.0 : 0.0);
            c(2 * j, 2 * k + 1) = std::conj(anomalous(k, j));
            c(2 * j + 1, 2 * k) = anomalous(j, k);
        }
    }
    return c;
}

Eigen::MatrixXcd thermal_input_correlation(const Eigen::VectorXd& occupations) {
    const Index n = occupations.size();
    return input_correlation_from_moments(occupations.cast<cd>().asDiagonal().toDenseMatrix(),
                                          Eigen::MatrixXcd::Zero(n, n));
}

Eigen::MatrixXd diffusion_from_inputs(const Eigen::VectorXd& rates,
                                      const Eigen::MatrixXcd& input_correlation) {
    const Index n = rates.size();
    // Row J of <xi xi^T> is row (partner of J) of <xi^dag xi>.
    Eigen::MatrixXcd plain(2 * n, 2 * n);
    for (Index j = 0; j < n; ++j) {
        plain.row(2 * j) = input_correlation.row(2 * j + 1);
        plain.row(2 * j + 1) = input_correlation.row(2 * j);
    }
    const Eigen::MatrixXcd t = ladder_to_quadrature(n);
    const Eigen::MatrixXcd q = t * plain * t.transpose();
    Eigen::MatrixXd sym = (0.5 * (q + q.transpose())).real();
    Eigen::VectorXd b(2 * n);
    for (Index m = 0; m < n; ++m) b(2 * m) = b(2 * m + 1) = std::sqrt(2.0 * rates(m));
    const Eigen::MatrixXd d = b.asDiagonal() * sym * b.asDiagonal();
    return 0.5 * (d + d.transpose());
}

namespace {

LinearModel assemble(std::string label, std::vector<std::string> modes,
                     const QuadraticHamiltonian& h, Eigen::VectorXd rates,
                     Eigen::MatrixXcd correlation, std::vector<NoiseChannel> channels) {
    LinearModel m;
    m.label = std::move(label);
    m.mode_labels = std::move(modes);
    m.A = h.drift(rates);
    m.D = diffusion_from_inputs(rates, correlation);
    m.port_rates = std::move(rates);
    m.input_correlation = std::move(correlation);
    m.noise_channels = std::move(channels);
    return m;
}

}  // namespace

QuadraticHamiltonian three_mode_hamiltonian(const ModelParams& p) {
    QuadraticHamiltonian h(3);
    h.add_frequency(0, -p.delta_a).add_frequency(1, -p.delta_b).add_frequency(2, 1.0);
    h.add_xx(0, 2, p.G_a).add_xx(1, 2, p.G_b);
    return h;
}

LinearModel build_three_mode(const ModelParams& p) {
    p.validate();
    Eigen::VectorXd rates(3), occ(3);
    rates << p.kappa_a, p.kappa_b, p.gamma;
    occ << p.nbar_a, p.nbar_b, p.nbar_c;
    std::vector<NoiseChannel> ch{{"a_in", 0, p.kappa_a, p.nbar_a, 0},
                                 {"b_in", 1, p.kappa_b, p.nbar_b, 0},
                                 {"c_in", 2, p.gamma, p.nbar_c, 0}};
    return assemble("three-mode", {"a", "b", "c"}, three_mode_hamiltonian(p), rates,
                    thermal_input_correlation(occ), std::move(ch));
}

LinearModel build_five_mode(const ModelParams& p) {
    p.validate();
    // Modes: a, b, c, a_p, b_p.
    QuadraticHamiltonian h(5);
    h.add_frequency(0, -p.delta_a).add_frequency(1, -p.delta_b).add_frequency(2, 1.0);
    h.add_frequency(3, p.g_a0 * p.x_c).add_frequency(4, p.g_b0 * p.x_c);
    h.add_xx(0, 2, p.G_a).add_xx(3, 2, p.G_a);
    h.add_xx(1, 2, p.G_b).add_xx(4, 2, p.G_b);
    h.add_beam_splitter(0, 3, p.g_a0 * p.x_c);
    h.add_beam_splitter(1, 4, p.g_b0 * p.x_c);
    Eigen::VectorXd rates(5), occ(5);
    rates << p.kappa_a, p.kappa_b, p.gamma, p.kappa_a, p.kappa_b;
    occ << p.nbar_a, p.nbar_b, p.nbar_c, p.nbar_ap, p.nbar_bp;
    std::vector<NoiseChannel> ch{{"a_in", 0, p.kappa_a, p.nbar_a, 0},
                                 {"b_in", 1, p.kappa_b, p.nbar_b, 0},
                                 {"c_in", 2, p.gamma, p.nbar_c, 0},
                                 {"a_p_in", 3, p.kappa_a, p.nbar_ap, 0},
                                 {"b_p_in", 4, p.kappa_b, p.nbar_bp, 0}};
    return assemble("five-mode", {"a", "b", "c", "a_p", "b_p"}, h, rates,
                    thermal_input_correlation(occ), std::move(ch));
}

NoiseModel squeezing_params(const ModelParams& p) {
    NoiseModel n;
    const double thermal = 2.0 * p.nbar_c + 1.0;
    n.m_a = p.kappa_a > 0 ? p.G_a * p.G_a * p.gamma / p.kappa_a * thermal : 0.0;
    n.m_b = p.kappa_b > 0 ? p.G_b * p.G_b * p.gamma / p.kappa_b * thermal : 0.0;
    n.m_ab = (p.kappa_a > 0 && p.kappa_b > 0)
                 ? p.G_a * p.G_b * p.gamma / std::sqrt(p.kappa_a * p.kappa_b) * thermal
                 : 0.0;
    n.delta_a_prime = p.delta_a + 2.0 * p.G_a * p.G_a;
    n.delta_b_prime = p.delta_b + 2.0 * p.G_b * p.G_b;
    return n;
}

LinearModel build_two_mode_adiabatic(const ModelParams& p) {
    p.validate();
    const NoiseModel nm = squeezing_params(p);
    QuadraticHamiltonian h(2);
    h.add_frequency(0, -p.delta_a).add_frequency(1, -p.delta_b);
    h.add_xx(0, 0, -p.G_a * p.G_a).add_xx(1, 1, -p.G_b * p.G_b);
    h.add_xx(0, 1, -2.0 * p.G_a * p.G_b);

    Eigen::MatrixXcd normal(2, 2), anomalous(2, 2);
    normal << p.nbar_a + nm.m_a, nm.m_ab, nm.m_ab, p.nbar_b + nm.m_b;
    anomalous << -nm.m_a, -nm.m_ab, -nm.m_ab, -nm.m_b;
    Eigen::VectorXd rates(2);
    rates << p.kappa_a, p.kappa_b;
    std::vector<NoiseChannel> ch{{"a_in'", 0, p.kappa_a, p.nbar_a, nm.m_a},
                                 {"b_in'", 1, p.kappa_b, p.nbar_b, nm.m_b}};
    return assemble("two-mode", {"a", "b"}, h, rates,
                    input_correlation_from_moments(normal, anomalous), std::move(ch));
}

Eigen::MatrixXcd ladder_drift(const LinearModel& model) {
    const Index n = model.n_modes();
    return quadrature_to_ladder(n) * model.A.cast<cd>() * ladder_to_quadrature(n);
}

StabilityReport stability_check(const LinearModel& model) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(model.A);
    if (es.info() != Eigen::Success) throw NumericalError("stability_check: eigensolver failed");
    StabilityReport r;
    r.eigenvalues = es.eigenvalues();
    Index worst = 0;
    for (Index i = 1; i < r.eigenvalues.size(); ++i) {
        if (r.eigenvalues(i).real() > r.eigenvalues(worst).real()) worst = i;
    }
    r.spectral_abscissa = r.eigenvalues(worst).real();
    r.stable = r.spectral_abscissa < 0;
    const Eigen::VectorXcd v = es.eigenvectors().col(worst);
    Index dominant = 0;
    double best = -1;
    for (Index m = 0; m < model.n_modes(); ++m) {
        const double w = std::norm(v(2 * m)) + std::norm(v(2 * m + 1));
        if (w > best) {
            best = w;
            dominant = m;
        }
    }
    r.dominant_mode = model.mode_labels[static_cast<std::size_t>(dominant)];
    return r;
}

}  // namespace omt
