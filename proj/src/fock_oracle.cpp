#include "omt/fock_oracle.hpp"

#include "omt/errors.hpp"

#include <Eigen/Sparse>

#include <cmath>
#include <complex>
#include <sstream>

namespace omt {

namespace {

using cd = std::complex<double>;
using Sparse = Eigen::SparseMatrix<cd>;

Sparse identity(int d) {
    Sparse m(d, d);
    m.setIdentity();
    return m;
}

Sparse lowering(int d) {
    Sparse m(d, d);
    for (int n = 1; n < d; ++n) m.insert(n - 1, n) = std::sqrt(static_cast<double>(n));
    return m;
}

Sparse kron(const Sparse& a, const Sparse& b) {
    Sparse out(a.rows() * b.rows(), a.cols() * b.cols());
    std::vector<Eigen::Triplet<cd>> t;
    for (int ka = 0; ka < a.outerSize(); ++ka) {
        for (Sparse::InnerIterator ia(a, ka); ia; ++ia) {
            for (int kb = 0; kb < b.outerSize(); ++kb) {
                for (Sparse::InnerIterator ib(b, kb); ib; ++ib) {
                    t.emplace_back(static_cast<int>(ia.row() * b.rows() + ib.row()),
                                   static_cast<int>(ia.col() * b.cols() + ib.col()), ia.value() * ib.value());
                }
            }
        }
    }
    out.setFromTriplets(t.begin(), t.end());
    return out;
}

// Operator acting as `op` on mode k of (a, b, c), identity elsewhere.
Sparse embed(const Sparse& op, int k, const std::array<int, 3>& dims) {
    Sparse out = k == 0 ? op : identity(dims[0]);
    for (int j = 1; j < 3; ++j) out = kron(out, j == k ? op : identity(dims[static_cast<std::size_t>(j)]));
    return out;
}

Eigen::VectorXd thermal_diagonal(int d, double nbar) {
    Eigen::VectorXd p(d);
    const double r = nbar / (nbar + 1.0);
    for (int n = 0; n < d; ++n) p(n) = std::pow(r, n) / (nbar + 1.0);
    return p;
}

}  // namespace

FockTrajectory fock_oracle(const ModelParams& params, const FockOptions& o) {
    params.validate();
    std::array<int, 3> dims{};
    int total = 1;
    for (int k = 0; k < 3; ++k) {
        const int c = o.cutoff[static_cast<std::size_t>(k)];
        if (c < 1 || c > 5) throw ConfigError("Fock cutoff must lie in [1, 5]", "cutoff");
        dims[static_cast<std::size_t>(k)] = c + 1;
        total *= c + 1;
    }
    if (total > 216) throw ConfigError("total Hilbert dimension exceeds 216", "cutoff");
    if (!(o.dt > 0) || !(o.t_end >= 0)) throw std::invalid_argument("fock_oracle: bad time grid");

    std::array<Sparse, 3> a;
    std::array<Sparse, 3> num;
    for (int k = 0; k < 3; ++k) {
        a[static_cast<std::size_t>(k)] = embed(lowering(dims[static_cast<std::size_t>(k)]), k, dims);
        num[static_cast<std::size_t>(k)] = Sparse(a[static_cast<std::size_t>(k)].adjoint()) * a[static_cast<std::size_t>(k)];
    }
    const std::array<double, 3> freq{-params.delta_a, -params.delta_b, 1.0};
    const std::array<double, 3> rate{params.kappa_a, params.kappa_b, params.gamma};
    const std::array<double, 3> nbar{params.nbar_a, params.nbar_b, params.nbar_c};

    Sparse xc = a[2] + Sparse(a[2].adjoint());
    Sparse ham(total, total);
    for (int k = 0; k < 3; ++k) ham += freq[static_cast<std::size_t>(k)] * num[static_cast<std::size_t>(k)];
    ham += params.G_a * Sparse(Sparse(a[0] + Sparse(a[0].adjoint())) * xc);
    ham += params.G_b * Sparse(Sparse(a[1] + Sparse(a[1].adjoint())) * xc);

    std::vector<Sparse> jumps;
    Sparse k_eff = cd(0, -1) * ham;
    for (int k = 0; k < 3; ++k) {
        const auto u = static_cast<std::size_t>(k);
        const double down = 2.0 * rate[u] * (nbar[u] + 1.0);
        const double up = 2.0 * rate[u] * nbar[u];
        if (down > 0) {
            jumps.push_back(std::sqrt(down) * a[u]);
            k_eff -= 0.5 * down * num[u];
        }
        if (up > 0) {
            Sparse ad = a[u].adjoint();
            jumps.push_back(std::sqrt(up) * ad);
            k_eff -= 0.5 * up * Sparse(a[u] * ad);
        }
    }
    std::vector<Sparse> jumps_adj;
    for (const auto& l : jumps) jumps_adj.emplace_back(l.adjoint());

    // Product thermal state, renormalized after truncation.
    FockTrajectory out;
    Eigen::VectorXd diag = Eigen::VectorXd::Ones(1);
    for (int k = 0; k < 3; ++k) {
        const Eigen::VectorXd p = thermal_diagonal(dims[static_cast<std::size_t>(k)], nbar[static_cast<std::size_t>(k)]);
        out.initial_truncation = std::max(out.initial_truncation, 1.0 - p.sum());
        Eigen::VectorXd next(diag.size() * p.size());
        for (Eigen::Index i = 0; i < diag.size(); ++i) next.segment(i * p.size(), p.size()) = diag(i) * p;
        diag = next;
    }
    if (out.initial_truncation >= o.leakage_limit) {
        std::ostringstream msg;
        msg << "initial thermal weight beyond the cutoff is " << out.initial_truncation;
        throw LeakageError(msg.str(), out.initial_truncation);
    }
    Eigen::MatrixXcd rho = (diag / diag.sum()).cast<cd>().asDiagonal();

    auto deriv = [&](const Eigen::MatrixXcd& r) {
        Eigen::MatrixXcd x = k_eff * r;
        Eigen::MatrixXcd d = x + x.adjoint();
        for (std::size_t j = 0; j < jumps.size(); ++j) {
            Eigen::MatrixXcd lr = jumps[j] * r;
            d += (jumps[j] * lr.adjoint()).adjoint();
        }
        return d;
    };
    // Projector diagonals onto the top Fock level of each mode.
    std::array<Eigen::VectorXd, 3> top;
    for (int k = 0; k < 3; ++k) {
        top[static_cast<std::size_t>(k)] = Eigen::VectorXd::Zero(total);
        for (int idx = 0; idx < total; ++idx) {
            int rem = idx, level = 0;
            for (int j = 2; j >= 0; --j) {
                const int dj = dims[static_cast<std::size_t>(j)];
                if (j == k) level = rem % dj;
                rem /= dj;
            }
            if (level == dims[static_cast<std::size_t>(k)] - 1) top[static_cast<std::size_t>(k)](idx) = 1.0;
        }
    }
    double t = 0;
    auto sample = [&] {
        const Eigen::VectorXd p = rho.diagonal().real();
        Eigen::Vector3d n;
        for (int k = 0; k < 3; ++k) {
            const auto u = static_cast<std::size_t>(k);
            n(k) = (num[u] * rho).trace().real();
            const double leak = p.dot(top[u]);
            out.max_leakage = std::max(out.max_leakage, leak);
            if (leak > o.leakage_limit) {
                std::ostringstream msg;
                msg << "truncation leakage " << leak << " on mode " << "abc"[k] << " at t = " << t
                    << " exceeds " << o.leakage_limit;
                throw LeakageError(msg.str(), leak);
            }
        }
        out.times.push_back(t);
        out.populations.push_back(n);
    };
    sample();
    const long steps = std::max<long>(1, static_cast<long>(std::ceil(o.t_end / o.dt - 1e-9)));
    const double h = o.t_end / static_cast<double>(steps);
    const int every = std::max(1, o.sample_every);
    for (long s = 1; s <= steps; ++s) {
        const Eigen::MatrixXcd k1 = deriv(rho);
        const Eigen::MatrixXcd k2 = deriv(rho + 0.5 * h * k1);
        const Eigen::MatrixXcd k3 = deriv(rho + 0.5 * h * k2);
        const Eigen::MatrixXcd k4 = deriv(rho + h * k3);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        rho = 0.5 * (rho + rho.adjoint()).eval();
        t = static_cast<double>(s) * h;
        if (s % every == 0 || s == steps) sample();
    }
    return out;
}

}  // namespace omt
