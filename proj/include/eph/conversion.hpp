#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "eph/matrix_core.hpp"
#include "eph/partitions.hpp"
#include "eph/signed_diagrams.hpp"

namespace eph {

/* Nilpotent-free Jordan form: direct sum of blocks sized by the partition, all at
 * the same eigenvalue. */
inline ComplexMatrix jordan_matrix(const Partition& p, Complex lambda) {
    if (p.empty())
        throw std::invalid_argument("jordan_matrix: empty partition");
    ComplexMatrix j = ComplexMatrix::Zero(p.n(), p.n());
    int off = 0;
    for (int m : p.parts()) {
        for (int r = 0; r < m; ++r) {
            j(off + r, off + r) = lambda;
            if (r + 1 < m)
                j(off + r, off + r + 1) = 1.0;
        }
        off += m;
    }
    return j;
}

struct SimilarityTransform {
    ComplexMatrix s;
    ComplexMatrix s_inv;
};

/* Deterministic random invertible S with condition number exactly cond_max:
 * S = U diag(sigma) V^dagger with Haar-ish U, V from QR of seeded Gaussians and
 * log-spaced singular values in [cond_max^-1/2, cond_max^1/2]. cond_max = 1
 * gives a unitary. */
inline SimilarityTransform random_similarity(int n, double cond_max, std::uint64_t seed) {
    if (n < 1)
        throw std::invalid_argument("random_similarity: n must be positive");
    if (!(cond_max >= 1))
        throw std::invalid_argument("random_similarity: cond_max must be >= 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const auto random_unitary = [&] {
        ComplexMatrix g(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double re = gauss(rng);
                const double im = gauss(rng);
                g(i, j) = Complex(re, im);
            }
        return ComplexMatrix(Eigen::HouseholderQR<ComplexMatrix>(g).householderQ());
    };
    const ComplexMatrix u = random_unitary();
    const ComplexMatrix v = random_unitary();
    Eigen::VectorXd sigma(n);
    for (int i = 0; i < n; ++i) {
        const double t = n == 1 ? 0.5 : static_cast<double>(i) / (n - 1);
        sigma(i) = std::pow(cond_max, 0.5 - t);
    }
    SimilarityTransform st;
    st.s = u * sigma.cast<Complex>().asDiagonal() * v.adjoint();
    st.s_inv = v * sigma.cwiseInverse().cast<Complex>().asDiagonal() * u.adjoint();
    return st;
}

inline ComplexMatrix random_conjugate(const ComplexMatrix& h, double cond_max,
                                      std::uint64_t seed) {
    require_square(h, "random_conjugate");
    const SimilarityTransform st = random_similarity(static_cast<int>(h.rows()), cond_max, seed);
    return st.s * h * st.s_inv;
}

/* Sparse superdiagonal pattern: bit i places a 1 at (i, i+1). Maximal runs of
 * consecutive ones of length r form chains of r+1 basis vectors, so the Jordan
 * type is one part r+1 per run plus a singleton for every untouched position. */
inline std::pair<ComplexMatrix, Partition> pattern_degeneracy(const std::vector<int>& bits) {
    const int n = static_cast<int>(bits.size()) + 1;
    if (bits.empty())
        throw std::invalid_argument("pattern_degeneracy: need at least one bit");
    for (int b : bits)
        if (b != 0 && b != 1)
            throw std::invalid_argument("pattern_degeneracy: bits must be 0 or 1");
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    std::vector<int> parts;
    int i = 0;
    while (i < n - 1) {
        if (bits[static_cast<std::size_t>(i)] == 0) {
            ++i;
            continue;
        }
        int run = 0;
        while (i + run < n - 1 && bits[static_cast<std::size_t>(i + run)] == 1) {
            m(i + run, i + run + 1) = 1.0;
            ++run;
        }
        parts.push_back(run + 1);
        i += run + 1;
    }
    int used = 0;
    for (int p : parts)
        used += p;
    for (int k = used; k < n; ++k)
        parts.push_back(1);
    return {m, Partition(std::move(parts))};
}

/* Versal family of the full Jordan block: J_n plus a free bottom row
 * (d_0, ..., d_(n-2), 0). Its characteristic coefficients are read off directly:
 * p_1 = 0 and p_k = d_(n-k) for k >= 2. */
inline ComplexMatrix versal_nonderogatory(int n, const std::vector<Complex>& deltas) {
    if (n < 2)
        throw std::invalid_argument("versal_nonderogatory: n must be >= 2");
    if (static_cast<int>(deltas.size()) != n - 1)
        throw std::invalid_argument("versal_nonderogatory: need n-1 deltas");
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i)
        m(i, i + 1) = 1.0;
    for (int j = 0; j + 1 < n; ++j)
        m(n - 1, j) = deltas[static_cast<std::size_t>(j)];
    return m;
}

/* Versal family around the (2,1) type in trace zero 3x3 form, parameters in the
 * slots (2,1), (3,3), (2,3), (3,1). Characteristic polynomial:
 * lambda^3 - (d21 + d33^2) lambda - (d23 d31 - d21 d33). */
inline ComplexMatrix versal_21(Complex d21, Complex d33, Complex d23, Complex d31) {
    ComplexMatrix m = ComplexMatrix::Zero(3, 3);
    m(0, 1) = 1.0;
    m(1, 0) = d21;
    m(1, 1) = -d33;
    m(1, 2) = d23;
    m(2, 0) = d31;
    m(2, 2) = d33;
    return m;
}

/* Explicit perturbation taking the canonical form of `source` to the type of
 * `target`: H' = J_source + delta has a single eigenvalue of full multiplicity
 * with Jordan type (and sign characteristic, in the signed case) equal to the
 * target. verified=false means the search was exhausted without success. */
struct PerturbationWitness {
    std::variant<Partition, SignedDiagram> source;
    std::variant<Partition, SignedDiagram> target;
    double epsilon = 0;
    ComplexMatrix delta;
    bool verified = false;
    double delta_norm = 0;
    DegeneracyReport degeneracy;
    Diagnostics diagnostics;
    std::vector<std::string> search_log;
};

namespace detail {

/* Damped Gauss-Newton on the stacked real and imaginary parts of the
 * characteristic coefficients of base + delta(x). Converged when every
 * coefficient is below tol_resid in the root-scaled sense |p_k|^(1/k), clamped
 * by the per-degree floating-point resolution floor (coefficients at roundoff
 * level count as zero). */
template <class DeltaFn>
bool newton_project(const ComplexMatrix& base, DeltaFn delta_of, Eigen::VectorXd& x,
                    int max_iters = 50, double tol_resid = 1e-12) {
    const int n = static_cast<int>(base.rows());
    const double scale = scale_of(base);
    const auto residual = [&](const Eigen::VectorXd& coords) {
        const std::vector<Complex> p = char_poly(base + delta_of(coords));
        Eigen::VectorXd r(2 * n);
        for (int k = 0; k < n; ++k) {
            r(2 * k) = p[static_cast<std::size_t>(k)].real();
            r(2 * k + 1) = p[static_cast<std::size_t>(k)].imag();
        }
        return r;
    };
    const auto converged = [&](const Eigen::VectorXd& r) {
        for (int k = 0; k < n; ++k) {
            const double mag = std::hypot(r(2 * k), r(2 * k + 1));
            if (std::pow(mag, 1.0 / (k + 1)) >
                std::max(tol_resid, residual_floor(n, k + 1, scale)))
                return false;
        }
        return true;
    };
    Eigen::VectorXd r = residual(x);
    for (int iter = 0; iter < max_iters; ++iter) {
        if (converged(r))
            return true;
        const int d = static_cast<int>(x.size());
        Eigen::MatrixXd jac(2 * n, d);
        for (int c = 0; c < d; ++c) {
            const double h = 1e-7 * std::max(1.0, std::abs(x(c)));
            Eigen::VectorXd xp = x;
            xp(c) += h;
            jac.col(c) = (residual(xp) - r) / h;
        }
        const Eigen::VectorXd step =
            jac.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(-r);
        double t = 1.0;
        bool improved = false;
        for (int halvings = 0; halvings < 12; ++halvings, t /= 2) {
            const Eigen::VectorXd xn = x + t * step;
            const Eigen::VectorXd rn = residual(xn);
            if (rn.norm() < r.norm()) {
                x = xn;
                r = rn;
                improved = true;
                break;
            }
        }
        if (!improved)
            return converged(r);
    }
    return converged(r);
}

inline std::string entry_name(int i, int j) {
    return "E(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

/* Acceptance test for an unsigned candidate: total degeneracy plus the exact
 * target partition at the mean eigenvalue. */
inline bool check_unsigned_candidate(const ComplexMatrix& hp, const Partition& target,
                                     const Tolerances& tol, PerturbationWitness& w) {
    const DegeneracyReport deg = degeneracy_check(hp, tol);
    if (!deg.degenerate)
        return false;
    const Complex lambda = hp.trace() / static_cast<double>(hp.rows());
    Diagnostics diag;
    Partition got;
    try {
        got = jordan_type(hp, lambda, tol, &diag);
    } catch (const std::invalid_argument&) {
        return false;
    }
    if (got != target)
        return false;
    w.degeneracy = deg;
    w.diagnostics = diag;
    return true;
}

/* Acceptance test for a signed candidate against the canonical metric of the
 * source: total degeneracy, target partition, target sign characteristic, and
 * membership of the target in the signature-consistent candidate set. */
inline bool check_signed_candidate(const ComplexMatrix& hp, const ComplexMatrix& eta,
                                   const SignedDiagram& target, const Tolerances& tol,
                                   PerturbationWitness& w) {
    const DegeneracyReport deg = degeneracy_check(hp, tol);
    if (!deg.degenerate)
        return false;
    const Complex lambda(hp.trace().real() / static_cast<double>(hp.rows()), 0.0);
    try {
        if (!pseudo_hermitian_check(hp, eta, tol))
            return false;
        Diagnostics diag;
        const SignedDiagram got = sign_characteristic(hp, eta, lambda, tol, &diag);
        if (!(got == target))
            return false;
        const ClassificationResult cls = classify_signed_type(hp, eta, lambda, tol);
        if (std::find(cls.signed_candidates.begin(), cls.signed_candidates.end(), target) ==
            cls.signed_candidates.end())
            return false;
        w.degeneracy = deg;
        w.diagnostics = diag;
    } catch (const std::exception&) {
        return false;
    }
    return true;
}

/* Basis of Hermitian matrix units: diagonal E_aa, then E_ab + E_ba and
 * i(E_ab - E_ba) for a < b. Multiplying by an involutive metric P turns these
 * into a basis of the P-pseudo-Hermitian perturbations. */
inline std::vector<std::pair<std::string, ComplexMatrix>> hermitian_basis(int n) {
    std::vector<std::pair<std::string, ComplexMatrix>> out;
    for (int a = 0; a < n; ++a) {
        ComplexMatrix m = ComplexMatrix::Zero(n, n);
        m(a, a) = 1.0;
        out.emplace_back("D" + std::to_string(a + 1), std::move(m));
    }
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            ComplexMatrix re = ComplexMatrix::Zero(n, n);
            re(a, b) = 1.0;
            re(b, a) = 1.0;
            out.emplace_back("S" + std::to_string(a + 1) + std::to_string(b + 1), std::move(re));
            ComplexMatrix im = ComplexMatrix::Zero(n, n);
            im(a, b) = Complex(0, 1);
            im(b, a) = Complex(0, -1);
            out.emplace_back("A" + std::to_string(a + 1) + std::to_string(b + 1), std::move(im));
        }
    return out;
}

} // namespace detail

/* Search for a norm-eps perturbation converting the canonical nilpotent of
 * `source` into Jordan type `target`. Tiers: single strictly upper entries,
 * entry pairs, then random directions projected onto the nilpotent variety by
 * damped Gauss-Newton. Requires target to strictly dominate source. */
inline PerturbationWitness conversion_witness(const Partition& source, const Partition& target,
                                              double eps, std::uint64_t seed = 0,
                                              const Tolerances& tol = {}) {
    if (!(eps > 0 && eps < 1))
        throw std::invalid_argument("conversion_witness: eps must lie in (0, 1)");
    if (!dominates(target, source, true))
        throw std::domain_error("conversion_witness: target does not strictly dominate source");
    const int n = source.n();
    const ComplexMatrix j = jordan_matrix(source, 0.0);
    PerturbationWitness w;
    w.source = source;
    w.target = target;
    w.epsilon = eps;
    w.delta = ComplexMatrix::Zero(n, n);

    const auto accept = [&](const ComplexMatrix& delta, const std::string& name) {
        if (!detail::check_unsigned_candidate(j + delta, target, tol, w))
            return false;
        w.delta = delta;
        w.delta_norm = delta.norm();
        w.verified = true;
        w.search_log.push_back("hit: " + name);
        return true;
    };

    // tier 1: single strictly upper entries at two scales
    for (double scale : {1.0, 0.25})
        for (int i = 0; i < n; ++i)
            for (int k = i + 1; k < n; ++k) {
                ComplexMatrix delta = ComplexMatrix::Zero(n, n);
                delta(i, k) = eps * scale;
                if (accept(delta, "tier1 " + detail::entry_name(i, k) +
                                      (scale == 1.0 ? "" : " quarter-scale")))
                    return w;
            }
    w.search_log.push_back("tier1 exhausted");

    // tier 2: pairs of strictly upper entries with relative sign
    std::vector<std::pair<int, int>> slots;
    for (int i = 0; i < n; ++i)
        for (int k = i + 1; k < n; ++k)
            slots.emplace_back(i, k);
    for (std::size_t a = 0; a < slots.size(); ++a)
        for (std::size_t b = a + 1; b < slots.size(); ++b)
            for (double sign : {1.0, -1.0}) {
                ComplexMatrix delta = ComplexMatrix::Zero(n, n);
                delta(slots[a].first, slots[a].second) = eps / std::numbers::sqrt2;
                delta(slots[b].first, slots[b].second) = sign * eps / std::numbers::sqrt2;
                if (accept(delta, "tier2 " + detail::entry_name(slots[a].first, slots[a].second) +
                                      (sign > 0 ? "+" : "-") +
                                      detail::entry_name(slots[b].first, slots[b].second)))
                    return w;
            }
    w.search_log.push_back("tier2 exhausted");

    // tier 3: random directions projected to the nilpotent variety
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const auto delta_of = [n](const Eigen::VectorXd& x) {
        ComplexMatrix d(n, n);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k)
                d(i, k) = Complex(x(2 * (i * n + k)), x(2 * (i * n + k) + 1));
        return d;
    };
    for (int attempt = 0; attempt < 16; ++attempt) {
        Eigen::VectorXd x(2 * n * n);
        for (int i = 0; i < x.size(); ++i)
            x(i) = gauss(rng);
        x *= (eps / 2) / delta_of(x).norm();
        if (!detail::newton_project(j, delta_of, x)) {
            w.search_log.push_back("tier3 attempt " + std::to_string(attempt) +
                                   ": no convergence");
            continue;
        }
        const ComplexMatrix delta = delta_of(x);
        if (delta.norm() > eps) {
            w.search_log.push_back("tier3 attempt " + std::to_string(attempt) +
                                   ": projected step exceeds eps");
            continue;
        }
        if (accept(delta, "tier3 attempt " + std::to_string(attempt)))
            return w;
        w.search_log.push_back("tier3 attempt " + std::to_string(attempt) + ": wrong type");
    }
    w.search_log.push_back("search exhausted");
    return w;
}

/* Signed variant: the source is realized as its canonical pair (J, P) and every
 * candidate is pseudo-Hermitian with respect to P by construction. Tiers: the
 * pseudo-Hermitian basis directions P M, isotropic Krein rank-one kicks mixing
 * opposite-sign singleton rows, basis pairs, then Gauss-Newton in the
 * pseudo-Hermitian coordinates. `symmetry` only fixes the ambient signature and
 * must match the diagrams. */
inline PerturbationWitness conversion_witness(const SignedDiagram& source,
                                              const SignedDiagram& target, double eps,
                                              const Pseudometric& symmetry,
                                              std::uint64_t seed = 0, const Tolerances& tol = {}) {
    if (!(eps > 0 && eps < 1))
        throw std::invalid_argument("conversion_witness: eps must lie in (0, 1)");
    const DiagramSignature sig = diagram_signature(source);
    if (sig.p != symmetry.p || sig.q != symmetry.q)
        throw std::invalid_argument("conversion_witness: diagram signature differs from metric");
    if (!signed_dominates(target, source, true))
        throw std::domain_error("conversion_witness: target does not strictly dominate source");
    const auto [j, p] = canonical_pair(source);
    const int n = source.n();
    PerturbationWitness w;
    w.source = source;
    w.target = target;
    w.epsilon = eps;
    w.delta = ComplexMatrix::Zero(n, n);

    const auto accept = [&](const ComplexMatrix& delta, const std::string& name) {
        if (!detail::check_signed_candidate(j + delta, p, target, tol, w))
            return false;
        w.delta = delta;
        w.delta_norm = delta.norm();
        w.verified = true;
        w.search_log.push_back("hit: " + name);
        return true;
    };

    const auto basis = detail::hermitian_basis(n);

    // tier 1: single pseudo-Hermitian basis directions, both orientations
    for (double scale : {1.0, 0.25})
        for (const auto& [name, m] : basis)
            for (double sign : {1.0, -1.0}) {
                ComplexMatrix delta = p * m;
                delta *= sign * eps * scale / delta.norm();
                if (accept(delta, "tier1 " + std::string(sign > 0 ? "+" : "-") + "P" + name +
                                      (scale == 1.0 ? "" : " quarter-scale")))
                    return w;
            }
    w.search_log.push_back("tier1 exhausted");

    // tier 1.5: Krein kicks v v^dagger P on isotropic mixes of two singleton rows
    // of opposite sign
    std::vector<std::pair<int, int>> singletons; // (offset, sign)
    {
        int off = 0;
        for (int i = 0; i < source.rows(); ++i) {
            const int m = source.partition().parts()[static_cast<std::size_t>(i)];
            if (m == 1)
                singletons.emplace_back(off, source.signs()[static_cast<std::size_t>(i)]);
            off += m;
        }
    }
    for (std::size_t a = 0; a < singletons.size(); ++a)
        for (std::size_t b = a + 1; b < singletons.size(); ++b) {
            if (singletons[a].second == singletons[b].second)
                continue;
            for (Complex phase : {Complex(1, 0), Complex(-1, 0), Complex(0, 1)}) {
                Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
                v(singletons[a].first) = 1.0;
                v(singletons[b].first) = phase;
                for (double sign : {1.0, -1.0}) {
                    ComplexMatrix delta = v * v.adjoint() * p;
                    delta *= sign * eps / delta.norm();
                    if (accept(delta, "krein rows " + std::to_string(singletons[a].first + 1) +
                                          "," + std::to_string(singletons[b].first + 1)))
                        return w;
                }
            }
        }
    w.search_log.push_back("krein tier exhausted");

    /* tier 1.6: rank-one pencil kicks P v v^dagger over all coordinate pairs.
     * Writing candidates as H = P (P J + delta_A) keeps them pseudo-Hermitian for
     * any Hermitian bump delta_A; the rank-one bumps c v v^dagger with v mixing a
     * chain position and another row merge blocks while keeping the pencil
     * determinant proportional to lambda^n, so the candidates are exactly
     * degenerate. Dyadic c keeps the cancellations exact in floating point. */
    for (int i = 0; i < n; ++i)
        for (int k = i + 1; k < n; ++k)
            for (Complex phase : {Complex(1, 0), Complex(-1, 0), Complex(0, 1), Complex(0, -1)})
                for (double sign : {1.0, -1.0})
                    for (double scale : {1.0, 0.25}) {
                        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
                        v(i) = 1.0;
                        v(k) = phase;
                        const double c =
                            std::exp2(std::floor(std::log2(eps * scale / 2.0)));
                        const ComplexMatrix delta = sign * c * (p * (v * v.adjoint()));
                        if (accept(delta, "rank1 rows " + std::to_string(i + 1) + "," +
                                              std::to_string(k + 1)))
                            return w;
                    }
    w.search_log.push_back("rank1 tier exhausted");

    /* tier 1.7: rank-two foot replacement merging two opposite-sign 2-blocks into
     * a 3-block plus a 1-block. With feet f, f' and tops g, g' of the two blocks,
     * A = eps_1 u u^dagger + eps_2 v v^dagger for u = f + t g, v = f' + 2 t eps_1 g
     * - t g' keeps det(A - lambda P) = lambda^n det(P) identically while
     * rank(A P A) drops to one, which is exactly Jordan structure (3,1) on those
     * four rows. */
    {
        std::vector<std::tuple<int, int, int>> twos; // (top offset, foot offset, sign)
        int off = 0;
        for (int i = 0; i < source.rows(); ++i) {
            const int m = source.partition().parts()[static_cast<std::size_t>(i)];
            if (m == 2)
                twos.emplace_back(off, off + 1, source.signs()[static_cast<std::size_t>(i)]);
            off += m;
        }
        for (std::size_t a = 0; a < twos.size(); ++a)
            for (std::size_t b = 0; b < twos.size(); ++b) {
                if (a == b || std::get<2>(twos[a]) == std::get<2>(twos[b]))
                    continue;
                const auto [ga, fa, ea] = twos[a];
                const auto [gb, fb, eb] = twos[b];
                for (double tsign : {1.0, -1.0}) {
                    const double t = tsign * std::exp2(std::floor(std::log2(eps / 4.0)));
                    Eigen::VectorXcd u = Eigen::VectorXcd::Zero(n);
                    u(fa) = 1.0;
                    u(ga) = t;
                    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
                    v(fb) = 1.0;
                    v(ga) = 2 * t * ea;
                    v(gb) = -t;
                    ComplexMatrix bump = double(ea) * (u * u.adjoint()) +
                                         double(eb) * (v * v.adjoint());
                    bump(fa, fa) -= double(ea);
                    bump(fb, fb) -= double(eb);
                    if (accept(p * bump, "rank2 blocks " + std::to_string(a + 1) + "," +
                                             std::to_string(b + 1)))
                        return w;
                }
            }
    }
    w.search_log.push_back("rank2 tier exhausted");

    // tier 2: pairs of basis directions
    for (std::size_t a = 0; a < basis.size(); ++a)
        for (std::size_t b = a + 1; b < basis.size(); ++b)
            for (double sa : {1.0, -1.0})
                for (double sb : {1.0, -1.0}) {
                    ComplexMatrix da = p * basis[a].second;
                    ComplexMatrix db = p * basis[b].second;
                    ComplexMatrix delta =
                        sa * da / da.norm() + sb * db / db.norm();
                    delta *= eps / delta.norm();
                    if (accept(delta, "tier2 " + std::string(sa > 0 ? "+" : "-") + "P" +
                                          basis[a].first + (sb > 0 ? " +" : " -") + "P" +
                                          basis[b].first))
                        return w;
                }
    w.search_log.push_back("tier2 exhausted");

    // tier 3: Gauss-Newton in pseudo-Hermitian coordinates
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const auto delta_of = [&](const Eigen::VectorXd& x) {
        ComplexMatrix d = ComplexMatrix::Zero(n, n);
        for (std::size_t a = 0; a < basis.size(); ++a)
            d += x(static_cast<int>(a)) * (p * basis[a].second);
        return d;
    };
    for (int attempt = 0; attempt < 16; ++attempt) {
        Eigen::VectorXd x(static_cast<int>(basis.size()));
        for (int i = 0; i < x.size(); ++i)
            x(i) = gauss(rng);
        x *= (eps / 2) / delta_of(x).norm();
        if (!detail::newton_project(j, delta_of, x)) {
            w.search_log.push_back("tier3 attempt " + std::to_string(attempt) +
                                   ": no convergence");
            continue;
        }
        const ComplexMatrix delta = delta_of(x);
        if (delta.norm() > eps) {
            w.search_log.push_back("tier3 attempt " + std::to_string(attempt) +
                                   ": projected step exceeds eps");
            continue;
        }
        if (accept(delta, "tier3 attempt " + std::to_string(attempt)))
            return w;
        w.search_log.push_back("tier3 attempt " + std::to_string(attempt) + ": wrong type");
    }
    w.search_log.push_back("search exhausted");
    return w;
}

template <class Node>
struct EdgeWitnessReport {
    HierarchyDag<Node> dag;
    std::vector<PerturbationWitness> witnesses; // aligned with dag.cover_edges
    int verified_count = 0;
    bool all_verified = false;
};

/* Witness every covering edge of the unsigned hierarchy: for an edge A -> B the
 * search runs from the dominated node B up to A. */
inline EdgeWitnessReport<Partition> verify_hierarchy_edges(int n, double eps = 0.05,
                                                           std::uint64_t seed = 0,
                                                           const Tolerances& tol = {}) {
    if (n < 1 || n > 6)
        throw std::out_of_range("verify_hierarchy_edges: n must be in [1, 6]");
    EdgeWitnessReport<Partition> rep;
    rep.dag = hierarchy_dag(n);
    for (std::size_t e = 0; e < rep.dag.cover_edges.size(); ++e) {
        const auto [hi, lo] = rep.dag.cover_edges[e];
        rep.witnesses.push_back(conversion_witness(
            rep.dag.nodes[static_cast<std::size_t>(lo)],
            rep.dag.nodes[static_cast<std::size_t>(hi)], eps, seed + e, tol));
        if (rep.witnesses.back().verified)
            ++rep.verified_count;
    }
    rep.all_verified = rep.verified_count == static_cast<int>(rep.dag.cover_edges.size());
    return rep;
}

inline EdgeWitnessReport<SignedDiagram> verify_signed_hierarchy_edges(
    int p, int q, double eps = 0.05, std::uint64_t seed = 0, const Tolerances& tol = {}) {
    if (p < 0 || q < 0 || p + q < 1 || p + q > 9)
        throw std::out_of_range("verify_signed_hierarchy_edges: need p, q >= 0, 1 <= p+q <= 9");
    EdgeWitnessReport<SignedDiagram> rep;
    rep.dag = signed_hierarchy_dag(p, q);
    const Pseudometric sym(p, q);
    for (std::size_t e = 0; e < rep.dag.cover_edges.size(); ++e) {
        const auto [hi, lo] = rep.dag.cover_edges[e];
        rep.witnesses.push_back(conversion_witness(
            rep.dag.nodes[static_cast<std::size_t>(lo)],
            rep.dag.nodes[static_cast<std::size_t>(hi)], eps, sym, seed + e, tol));
        if (rep.witnesses.back().verified)
            ++rep.verified_count;
    }
    rep.all_verified = rep.verified_count == static_cast<int>(rep.dag.cover_edges.size());
    return rep;
}

} // namespace eph
