// quadrature.hpp — quadrature-basis conventions and generic dense helpers.
//
// Per mode the real vector is (x, p) with x = a + a^dag, p = -i(a - a^dag),
// so [x, p] = 2i and the vacuum has <x^2> = <p^2> = 1. Covariances are
// symmetrized second moments; a thermal mode has sigma = (2 nbar + 1) I.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>

namespace omt {

using Index = Eigen::Index;

// Block-diagonal symplectic form, one [[0, 1], [-1, 0]] block per mode.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> symplectic_form(Index n_modes) {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> omega =
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(2 * n_modes, 2 * n_modes);
    for (Index k = 0; k < n_modes; ++k) {
        omega(2 * k, 2 * k + 1) = Scalar(1);
        omega(2 * k + 1, 2 * k) = Scalar(-1);
    }
    return omega;
}

// Maps the interleaved ladder vector (a_1, a_1^dag, a_2, a_2^dag, ...) to
// (x_1, p_1, x_2, p_2, ...).
inline Eigen::MatrixXcd ladder_to_quadrature(Index n_modes) {
    using C = std::complex<double>;
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(2 * n_modes, 2 * n_modes);
    for (Index k = 0; k < n_modes; ++k) {
        t(2 * k, 2 * k) = C(1, 0);
        t(2 * k, 2 * k + 1) = C(1, 0);
        t(2 * k + 1, 2 * k) = C(0, -1);
        t(2 * k + 1, 2 * k + 1) = C(0, 1);
    }
    return t;
}

inline Eigen::MatrixXcd quadrature_to_ladder(Index n_modes) {
    using C = std::complex<double>;
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(2 * n_modes, 2 * n_modes);
    for (Index k = 0; k < n_modes; ++k) {
        t(2 * k, 2 * k) = C(0.5, 0);
        t(2 * k, 2 * k + 1) = C(0, 0.5);
        t(2 * k + 1, 2 * k) = C(0.5, 0);
        t(2 * k + 1, 2 * k + 1) = C(0, -0.5);
    }
    return t;
}

// Normally ordered occupation <a^dag a> of one mode from a symmetrized covariance.
template <typename Derived>
typename Derived::Scalar mode_occupation(const Eigen::MatrixBase<Derived>& sigma, Index mode) {
    using S = typename Derived::Scalar;
    return (sigma(2 * mode, 2 * mode) + sigma(2 * mode + 1, 2 * mode + 1) - S(2)) / S(4);
}

// Solves A X + X A^T + Q = 0 by vectorization. Dense Kronecker solve; the
// models here never exceed 10x10, so the (n^2 x n^2) system stays small.
template <typename DerivedA, typename DerivedQ>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic>
solve_lyapunov(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedQ>& q) {
    using S = typename DerivedA::Scalar;
    using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
    const Index n = a.rows();
    if (a.cols() != n || q.rows() != n || q.cols() != n) {
        throw std::invalid_argument("solve_lyapunov: dimension mismatch");
    }
    // vec(A X) = (I (x) A) vec X, vec(X A^T) = (A (x) I) vec X.
    Mat big = Mat::Zero(n * n, n * n);
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) {
            const Index row = j * n + i;
            for (Index k = 0; k < n; ++k) {
                big(row, j * n + k) += a(i, k);
                big(row, k * n + i) += a(j, k);
            }
        }
    }
    Eigen::Matrix<S, Eigen::Dynamic, 1> rhs(n * n);
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) rhs(j * n + i) = -q(i, j);
    }
    const Eigen::Matrix<S, Eigen::Dynamic, 1> x = big.fullPivLu().solve(rhs);
    Mat out(n, n);
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) out(i, j) = x(j * n + i);
    }
    return S(0.5) * (out + out.transpose());
}

template <typename DerivedA, typename DerivedX, typename DerivedQ>
typename DerivedA::RealScalar lyapunov_residual(const Eigen::MatrixBase<DerivedA>& a,
                                                const Eigen::MatrixBase<DerivedX>& x,
                                                const Eigen::MatrixBase<DerivedQ>& q) {
    return (a * x + x * a.transpose() + q).cwiseAbs().maxCoeff();
}

// Smallest eigenvalue of the Hermitian matrix sigma + i Omega; >= 0 for a
// physical state.
template <typename Derived>
double physicality_margin(const Eigen::MatrixBase<Derived>& sigma) {
    const Index n = sigma.rows() / 2;
    Eigen::MatrixXcd h = sigma.template cast<std::complex<double>>();
    h += std::complex<double>(0, 1) * symplectic_form<double>(n).template cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

}  // namespace omt
