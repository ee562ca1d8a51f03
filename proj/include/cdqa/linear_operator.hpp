#pragma once

// Uniform access to the Hamiltonian representations used by the integrators:
// dense matrices, sparse matrices and BoundHamiltonian coefficient sets.

#include <complex>
#include <type_traits>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>

#include "cdqa/chebyshev.hpp"
#include "cdqa/model.hpp"

namespace cdqa::ops {

using SparseMatrix = Eigen::SparseMatrix<cplx>;

template <class T>
concept HasMemberApply = requires(const T& h, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
    h.apply(in, out);
    { h.dense() } -> std::convertible_to<Eigen::MatrixXcd>;
};

template <class Derived>
void apply(const Eigen::EigenBase<Derived>& h, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
    out.noalias() = h.derived() * in;
}

template <HasMemberApply H>
void apply(const H& h, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
    h.apply(in, out);
}

template <class Derived>
Eigen::MatrixXcd dense(const Eigen::EigenBase<Derived>& h) {
    return Eigen::MatrixXcd(h.derived());
}

template <HasMemberApply H>
Eigen::MatrixXcd dense(const H& h) {
    return h.dense();
}

/// Max absolute row sum, an upper bound on the spectral norm.
template <class Derived>
double norm_bound(const Eigen::MatrixBase<Derived>& h) {
    return h.cwiseAbs().rowwise().sum().maxCoeff();
}

inline double norm_bound(const SparseMatrix& h) {
    Eigen::VectorXd rows = Eigen::VectorXd::Zero(h.rows());
    for (int k = 0; k < h.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(h, k); it; ++it) rows[it.row()] += std::abs(it.value());
    return rows.size() ? rows.maxCoeff() : 0.0;
}

template <HasMemberApply H>
double norm_bound(const H& h) {
    return h.norm_bound();
}

/// ψ ← exp(−i H dt) ψ by dense diagonalization.
template <class Derived>
void propagate(const Eigen::EigenBase<Derived>& h, double dt, Eigen::VectorXcd& psi) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense(h));
    Eigen::VectorXcd w = es.eigenvectors().adjoint() * psi;
    for (Eigen::Index k = 0; k < w.size(); ++k) w[k] *= std::polar(1.0, -es.eigenvalues()[k] * dt);
    psi = es.eigenvectors() * w;
}

/// Sparse matrices go through the Chebyshev expansion bracketed by ±norm_bound.
inline void propagate(const SparseMatrix& h, double dt, Eigen::VectorXcd& psi) {
    const double b = norm_bound(h);
    chebyshev_propagate([&](const Eigen::VectorXcd& in, Eigen::VectorXcd& out) { out.noalias() = h * in; },
                        -b, b, dt, psi);
}

template <HasMemberApply H>
void propagate(const H& h, double dt, Eigen::VectorXcd& psi) {
    if constexpr (requires { h.propagate(dt, psi); }) {
        h.propagate(dt, psi);
    } else {
        propagate(h.dense(), dt, psi);
    }
}

}  // namespace cdqa::ops
