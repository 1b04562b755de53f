#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "eph/matrix_core.hpp"
#include "eph/partitions.hpp"

namespace eph {

struct JumpTerm {
    double gamma = 0;
    ComplexMatrix op;
};

/* Markovian master equation data: Hermitian Hamiltonian plus weighted jump
 * operators, all on one finite-dimensional space. */
struct LindbladModel {
    ComplexMatrix h;
    std::vector<JumpTerm> jumps;
};

namespace detail {

inline void validate_model(const LindbladModel& model, const Tolerances& tol) {
    require_square(model.h, "lindblad model");
    tol.validate();
    if ((model.h - model.h.adjoint()).norm() > tol.rank_rtol * model.h.norm() + tol.rank_atol)
        throw std::invalid_argument("lindblad model: Hamiltonian must be Hermitian");
    for (const JumpTerm& j : model.jumps) {
        if (j.gamma < 0)
            throw std::invalid_argument("lindblad model: rates must be nonnegative");
        if (j.op.rows() != model.h.rows() || j.op.cols() != model.h.cols())
            throw std::invalid_argument("lindblad model: jump operator dimension mismatch");
    }
}

} // namespace detail

/* H - (i/2) sum_k gamma_k L_k^dagger L_k, the generator of no-jump evolution. */
inline ComplexMatrix effective_nh_hamiltonian(const LindbladModel& model,
                                              const Tolerances& tol = {}) {
    detail::validate_model(model, tol);
    ComplexMatrix h = model.h;
    for (const JumpTerm& j : model.jumps)
        h -= Complex(0, 0.5) * j.gamma * (j.op.adjoint() * j.op);
    return h;
}

/* Full Liouvillian as a matrix on vectorized density operators, with |m><n|
 * stored at index m*dim + n. In that convention superoperator A rho B becomes
 * kron(A, B^T), which collapses the generator to
 * kron(-i H_nh, 1) + kron(1, i H_nh^*) + sum_k gamma_k kron(L_k, L_k^*). */
inline ComplexMatrix vectorize_liouvillian(const LindbladModel& model,
                                           const Tolerances& tol = {}) {
    detail::validate_model(model, tol);
    const int n = static_cast<int>(model.h.rows());
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    const ComplexMatrix hnh = effective_nh_hamiltonian(model, tol);
    ComplexMatrix l = Eigen::kroneckerProduct(Complex(0, -1) * hnh, id);
    l += Eigen::kroneckerProduct(id, (Complex(0, 1) * hnh.conjugate()).eval());
    for (const JumpTerm& j : model.jumps)
        l += j.gamma * Eigen::kroneckerProduct(j.op, j.op.conjugate()).eval();
    return l;
}

/* Quantum-jump-free part of the Liouvillian for an arbitrary non-Hermitian
 * effective Hamiltonian. */
inline ComplexMatrix no_jump_liouvillian(const ComplexMatrix& h_nh) {
    require_square(h_nh, "no_jump_liouvillian");
    const int n = static_cast<int>(h_nh.rows());
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    return Eigen::kroneckerProduct(Complex(0, -1) * h_nh, id) +
           Eigen::kroneckerProduct(id, (Complex(0, 1) * h_nh.conjugate()).eval());
}

/* Jordan type of the no-jump Liouvillian eigenvalue inherited from an order-N
 * exceptional point of the effective Hamiltonian: one block of every odd size
 * 2N-1, 2N-3, ..., 1. */
inline Partition predicted_partition(int n) {
    if (n < 1)
        throw std::invalid_argument("predicted_partition: n must be positive");
    std::vector<int> parts;
    for (int k = n; k >= 1; --k)
        parts.push_back(2 * k - 1);
    return Partition(std::move(parts));
}

/* Swap operator |m><n| -> |n><m| on vectorized operators. Hermitian, involutive,
 * trace dim, signature (dim(dim+1)/2, dim(dim-1)/2). */
inline ComplexMatrix parity_operator(int dim) {
    if (dim < 1)
        throw std::invalid_argument("parity_operator: dim must be positive");
    ComplexMatrix p = ComplexMatrix::Zero(dim * dim, dim * dim);
    for (int m = 0; m < dim; ++m)
        for (int n = 0; n < dim; ++n)
            p(m * dim + n, n * dim + m) = 1.0;
    return p;
}

/* Few-level decay model reduced to its excited block: the full system keeps a
 * ground level that every excited level decays into, so the no-jump generator is
 * block diagonal and the excited-block compression of the full Liouvillian equals
 * no_jump_liouvillian(h_eff) exactly. `block` lists the vectorized indices of
 * that compression inside the full Liouvillian. */
struct EffectiveModel {
    LindbladModel model;
    ComplexMatrix h_eff;
    ComplexMatrix liouvillian;
    std::vector<int> block;
    bool at_ep = false;
    double lambda_ep = 0;
};

namespace detail {

inline EffectiveModel reduce_decay_model(const ComplexMatrix& excited_h,
                                         const std::vector<double>& gammas) {
    const int ne = static_cast<int>(excited_h.rows());
    const int n = ne + 1;
    EffectiveModel em;
    em.model.h = ComplexMatrix::Zero(n, n);
    em.model.h.bottomRightCorner(ne, ne) = excited_h;
    for (int k = 0; k < ne; ++k) {
        ComplexMatrix l = ComplexMatrix::Zero(n, n);
        l(0, k + 1) = 1.0;
        em.model.jumps.push_back({gammas[static_cast<std::size_t>(k)], std::move(l)});
    }
    em.h_eff = effective_nh_hamiltonian(em.model).bottomRightCorner(ne, ne);
    em.liouvillian = no_jump_liouvillian(em.h_eff);
    for (int m = 1; m < n; ++m)
        for (int l = 1; l < n; ++l)
            em.block.push_back(m * n + l);
    return em;
}

} // namespace detail

/* Two coupled decaying levels over a ground level. The excited block hosts a
 * second-order exceptional point when eps2 = eps3 and gamma2 - gamma3 = +-4t;
 * the 4x4 no-jump Liouvillian then carries the type (3,1) at -((gamma2+gamma3)/2). */
inline EffectiveModel effective_qubit(double eps2, double eps3, double gamma2, double gamma3,
                                      double t) {
    if (gamma2 < 0 || gamma3 < 0)
        throw std::invalid_argument("effective_qubit: rates must be nonnegative");
    ComplexMatrix h = ComplexMatrix::Zero(2, 2);
    h(0, 0) = eps2;
    h(1, 1) = eps3;
    h(0, 1) = t;
    h(1, 0) = t;
    EffectiveModel em = detail::reduce_decay_model(h, {gamma2, gamma3});
    const double scale =
        std::max({1.0, std::abs(eps2), std::abs(eps3), gamma2, gamma3, std::abs(t)});
    const double tau = 1e-9 * scale;
    em.at_ep = std::abs(eps2 - eps3) <= tau &&
               std::min(std::abs(gamma2 - gamma3 - 4 * t), std::abs(gamma2 - gamma3 + 4 * t)) <=
                   tau;
    em.lambda_ep = -(gamma2 + gamma3) / 2;
    return em;
}

/* Three coupled decaying levels in a chain (no direct 2-4 coupling) over a ground
 * level. A third-order exceptional point needs equal detunings, equidistant rates
 * 2 gamma3 = gamma2 + gamma4 and gamma2 - gamma4 = branch * 4 sqrt(2) t; the 9x9
 * no-jump Liouvillian then carries the type (5,3,1) at -gamma3. */
inline EffectiveModel effective_qutrit(double eps, double gamma2, double gamma3, double gamma4,
                                       double t, int branch = 1) {
    if (gamma2 < 0 || gamma3 < 0 || gamma4 < 0)
        throw std::invalid_argument("effective_qutrit: rates must be nonnegative");
    if (branch != 1 && branch != -1)
        throw std::invalid_argument("effective_qutrit: branch must be +-1");
    ComplexMatrix h = ComplexMatrix::Zero(3, 3);
    h(0, 0) = eps;
    h(1, 1) = eps;
    h(2, 2) = eps;
    h(0, 1) = t;
    h(1, 0) = t;
    h(1, 2) = t;
    h(2, 1) = t;
    EffectiveModel em = detail::reduce_decay_model(h, {gamma2, gamma3, gamma4});
    const double scale =
        std::max({1.0, std::abs(eps), gamma2, gamma3, gamma4, std::abs(t)});
    const double tau = 1e-9 * scale;
    em.at_ep = std::abs(2 * gamma3 - gamma2 - gamma4) <= tau &&
               std::abs(gamma2 - gamma4 - branch * 4 * std::numbers::sqrt2 * t) <= tau;
    em.lambda_ep = -gamma3;
    return em;
}

} // namespace eph
