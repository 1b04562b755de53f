#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "eph/partitions.hpp"
#include "eph/signed_diagrams.hpp"

namespace eph {

using Complex = std::complex<double>;

/* Thresholds for the rank, clustering, and degeneracy decisions. The relative
 * tolerances are applied against the scale of the matrix at hand, with a floor
 * of 1 so that near-zero inputs are not judged against a vanishing threshold. */
struct Tolerances {
    double rank_rtol = 1e-8;
    double rank_atol = 1e-12;
    double eig_cluster_tol = 1e-6;
    double degeneracy_tol = 1e-8;

    void validate() const {
        if (!(rank_rtol > 0) || !(rank_atol > 0) || !(eig_cluster_tol > 0) ||
            !(degeneracy_tol > 0))
            throw std::invalid_argument("tolerances must be strictly positive");
    }
};

inline void require_square(const ComplexMatrix& m, const char* who) {
    if (m.rows() < 1 || m.rows() != m.cols())
        throw std::invalid_argument(std::string(who) + ": matrix must be square and nonempty");
}

inline double operator_norm(const ComplexMatrix& m) {
    return Eigen::JacobiSVD<ComplexMatrix>(m).singularValues()(0);
}

inline double scale_of(const ComplexMatrix& m) { return std::max(1.0, operator_norm(m)); }

/* Coefficients p_1..p_n of the characteristic polynomial written as
 * lambda^n - p_1 lambda^(n-1) - ... - p_n, by the Faddeev-LeVerrier recursion
 * p_k = trace(A_k)/k with A_k = H B_(k-1), B_k = A_k - p_k I, B_0 = I. */
inline std::vector<Complex> char_poly(const ComplexMatrix& h) {
    require_square(h, "char_poly");
    const int n = static_cast<int>(h.rows());
    std::vector<Complex> p(static_cast<std::size_t>(n));
    ComplexMatrix b = ComplexMatrix::Identity(n, n);
    for (int k = 1; k <= n; ++k) {
        const ComplexMatrix a = h * b;
        p[static_cast<std::size_t>(k - 1)] = a.trace() / static_cast<double>(k);
        b = a - p[static_cast<std::size_t>(k - 1)] * ComplexMatrix::Identity(n, n);
    }
    return p;
}

/* One thresholded rank decision. `ambiguous` flags a singular value within a
 * factor of 10 of the threshold on either side, meaning the cut is fragile. */
struct RankReport {
    int rank = 0;
    double threshold = 0;
    double smallest_kept = 0;   // 0 when nothing is kept
    double largest_dropped = 0; // 0 when nothing is dropped
    bool ambiguous = false;
};

inline RankReport numerical_rank_report(const ComplexMatrix& m, double threshold) {
    require_square(m, "numerical_rank");
    if (!(threshold >= 0))
        throw std::invalid_argument("numerical_rank: threshold must be nonnegative");
    const Eigen::VectorXd sv = Eigen::JacobiSVD<ComplexMatrix>(m).singularValues();
    RankReport rep;
    rep.threshold = threshold;
    for (int i = 0; i < sv.size(); ++i) {
        const double s = sv(i);
        if (s > threshold) {
            ++rep.rank;
            rep.smallest_kept = s;
        } else if (rep.largest_dropped == 0) {
            rep.largest_dropped = s;
        }
        if (s > threshold / 10 && s < threshold * 10)
            rep.ambiguous = true;
    }
    return rep;
}

inline int numerical_rank(const ComplexMatrix& m, double threshold) {
    return numerical_rank_report(m, threshold).rank;
}

namespace detail {

/* Smallest root-scaled residual |p_k|^(1/k) resolvable in doubles for a matrix
 * of the given scale: coefficient roundoff is of order n^2 u (2 scale)^k, and
 * the k-th root lifts it to 2 scale (8 n^2 u)^(1/k). Residuals below this floor
 * are indistinguishable from an exact zero. */
inline double residual_floor(int n, int k, double scale) {
    const double u = std::numeric_limits<double>::epsilon();
    return 2 * scale * std::pow(8 * n * n * u, 1.0 / k);
}

} // namespace detail

struct EigCluster {
    Complex centroid{};
    int multiplicity = 0;
};

/* Eigenvalues grouped by single-linkage with radius eig_cluster_tol * scale:
 * two eigenvalues share a cluster when a chain of pairwise-close eigenvalues
 * connects them. A fixed radius undershoots defective clusters, because a
 * backward error of order n^2 u fans a k-fold eigenvalue over a disc of radius
 * ~ scale (n^2 u)^(1/k), so a second pass merges every disc of the k-th-root
 * resolution radius that holds at least k eigenvalues: such a configuration is
 * indistinguishable from a single defective cluster. Clusters are sorted by
 * centroid (Re, then Im). */
inline std::vector<EigCluster> cluster_eigenvalues(const ComplexMatrix& h,
                                                   const Tolerances& tol = {}) {
    require_square(h, "cluster_eigenvalues");
    tol.validate();
    const double scale = scale_of(h);
    const double radius = tol.eig_cluster_tol * scale;
    Eigen::ComplexEigenSolver<ComplexMatrix> es(h, false);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("cluster_eigenvalues: eigensolver failed");
    const auto& ev = es.eigenvalues();
    const int n = static_cast<int>(ev.size());
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x)
            x = parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        return x;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(ev(i) - ev(j)) <= radius)
                parent[static_cast<std::size_t>(find(i))] = find(j);
    for (int k = n; k >= 2; --k) {
        const double r = std::max(radius, detail::residual_floor(n, k, scale));
        for (int i = 0; i < n; ++i) {
            std::vector<int> inside;
            for (int j = 0; j < n; ++j)
                if (std::abs(ev(j) - ev(i)) <= r)
                    inside.push_back(j);
            if (static_cast<int>(inside.size()) >= k)
                for (int j : inside)
                    parent[static_cast<std::size_t>(find(j))] = find(i);
        }
    }
    std::vector<EigCluster> clusters;
    std::vector<int> root_index(static_cast<std::size_t>(n), -1);
    std::vector<Complex> sums;
    for (int i = 0; i < n; ++i) {
        const int r = find(i);
        if (root_index[static_cast<std::size_t>(r)] < 0) {
            root_index[static_cast<std::size_t>(r)] = static_cast<int>(clusters.size());
            clusters.push_back({});
            sums.push_back(0.0);
        }
        const int c = root_index[static_cast<std::size_t>(r)];
        ++clusters[static_cast<std::size_t>(c)].multiplicity;
        sums[static_cast<std::size_t>(c)] += ev(i);
    }
    for (std::size_t c = 0; c < clusters.size(); ++c)
        clusters[c].centroid = sums[c] / static_cast<double>(clusters[c].multiplicity);
    std::sort(clusters.begin(), clusters.end(), [](const EigCluster& a, const EigCluster& b) {
        if (a.centroid.real() != b.centroid.real())
            return a.centroid.real() < b.centroid.real();
        return a.centroid.imag() < b.centroid.imag();
    });
    return clusters;
}

struct Diagnostics {
    std::vector<RankReport> rank_reports; // one entry per matrix power tested
    bool low_confidence = false;
    std::vector<std::string> notes;
};

/* Jordan block sizes of `lambda` by staircase deflation of N = H - lambda I.
 * Step i takes the current deflated block A (A_1 = N), finds its numerical
 * kernel, and compresses A onto the complement; the kernel dimension w_i equals
 * rank(N^(i-1)) - rank(N^i), the number of blocks of size >= i, so the partition
 * is the conjugate of (w_1, w_2, ...). Deflating instead of forming powers keeps
 * every rank decision at the scale of N itself (a vanishing power of an exactly
 * degenerate matrix is pure roundoff, and thresholds measured against it are
 * meaningless), so one uniform threshold rank_rtol * sigma_max(N) + rank_atol
 * applies throughout. */
inline Partition jordan_type(const ComplexMatrix& h, Complex lambda, const Tolerances& tol = {},
                             Diagnostics* diag = nullptr) {
    require_square(h, "jordan_type");
    tol.validate();
    const int n = static_cast<int>(h.rows());
    ComplexMatrix a = h - lambda * ComplexMatrix::Identity(n, n);
    const double threshold = tol.rank_rtol * operator_norm(a) + tol.rank_atol;
    std::vector<int> drops;
    for (int i = 1; i <= n && a.rows() > 0; ++i) {
        const Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeFullV);
        RankReport rep;
        rep.threshold = threshold;
        for (int k = 0; k < svd.singularValues().size(); ++k) {
            const double s = svd.singularValues()(k);
            if (s > threshold) {
                ++rep.rank;
                rep.smallest_kept = s;
            } else if (rep.largest_dropped == 0) {
                rep.largest_dropped = s;
            }
            if (s > threshold / 10 && s < threshold * 10)
                rep.ambiguous = true;
        }
        if (diag) {
            diag->rank_reports.push_back(rep);
            if (rep.ambiguous) {
                diag->low_confidence = true;
                diag->notes.push_back("rank decision at depth " + std::to_string(i) +
                                      " has a singular value near the threshold");
            }
        }
        const int w = static_cast<int>(a.rows()) - rep.rank;
        if (w <= 0)
            break;
        if (!drops.empty() && w > drops.back() && diag) {
            diag->low_confidence = true;
            diag->notes.push_back("kernel dimensions are not monotone at depth " +
                                  std::to_string(i));
        }
        drops.push_back(w);
        const ComplexMatrix keep = svd.matrixV().leftCols(rep.rank);
        a = ComplexMatrix(keep.adjoint() * a * keep);
    }
    if (drops.empty())
        throw std::invalid_argument("jordan_type: lambda is not an eigenvalue within tolerance");
    std::vector<int> parts;
    for (int j = 1; j <= drops.front(); ++j)
        parts.push_back(static_cast<int>(std::count_if(
            drops.begin(), drops.end(), [j](int d) { return d >= j; })));
    return Partition(std::move(parts));
}

struct DegeneracyReport {
    bool degenerate = false;
    std::vector<double> residuals; // |p_k|^(1/k) of the traceless shift, k = 2..n
    double max_residual = 0;
    double threshold = 0;
};

/* A matrix is totally degenerate (single eigenvalue of full multiplicity) exactly
 * when its traceless shift H - (tr H / n) I is nilpotent, i.e. all characteristic
 * coefficients past the first vanish. Residuals are root-scaled so one threshold
 * covers every degree; each degree's comparison is clamped below by the
 * floating-point resolution of that coefficient, since |p_k| at roundoff level
 * would otherwise read as a residual of order u^(1/k). */
inline DegeneracyReport degeneracy_check(const ComplexMatrix& h, const Tolerances& tol = {}) {
    require_square(h, "degeneracy_check");
    tol.validate();
    const int n = static_cast<int>(h.rows());
    const ComplexMatrix shifted =
        h - (h.trace() / static_cast<double>(n)) * ComplexMatrix::Identity(n, n);
    const std::vector<Complex> p = char_poly(shifted);
    const double scale = scale_of(h);
    DegeneracyReport rep;
    rep.threshold = tol.degeneracy_tol * scale;
    rep.degenerate = true;
    for (int k = 2; k <= n; ++k) {
        const double r = std::pow(std::abs(p[static_cast<std::size_t>(k - 1)]),
                                  1.0 / static_cast<double>(k));
        rep.residuals.push_back(r);
        rep.max_residual = std::max(rep.max_residual, r);
        if (r > std::max(rep.threshold, detail::residual_floor(n, k, scale)))
            rep.degenerate = false;
    }
    return rep;
}

namespace detail {

/* Eigenvalues of the Hermitian part of eta, after validating that eta really is
 * Hermitian and numerically invertible. */
inline Eigen::VectorXd metric_eigenvalues(const ComplexMatrix& eta, const Tolerances& tol) {
    require_square(eta, "metric");
    tol.validate();
    const double herm_gap = (eta - eta.adjoint()).norm();
    if (herm_gap > tol.rank_rtol * eta.norm() + tol.rank_atol)
        throw std::invalid_argument("metric is not Hermitian within tolerance");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(((eta + eta.adjoint()) / 2.0).eval(),
                                                    Eigen::EigenvaluesOnly);
    const Eigen::VectorXd vals = es.eigenvalues();
    const double vmax = vals.cwiseAbs().maxCoeff();
    if (vals.cwiseAbs().minCoeff() <= tol.rank_rtol * vmax + tol.rank_atol)
        throw std::domain_error("metric is numerically singular");
    return vals;
}

/* Orthonormal basis of the numerical kernel of m, taken as the right singular
 * vectors of the `dim` smallest singular values. */
inline ComplexMatrix kernel_basis(const ComplexMatrix& m, int dim) {
    const Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
    return svd.matrixV().rightCols(dim);
}

} // namespace detail

/* Signature (p, q) of an invertible Hermitian metric. */
inline std::pair<int, int> metric_signature(const ComplexMatrix& eta, const Tolerances& tol = {}) {
    const Eigen::VectorXd vals = detail::metric_eigenvalues(eta, tol);
    int p = 0, q = 0;
    for (int i = 0; i < vals.size(); ++i)
        (vals(i) > 0 ? p : q)++;
    return {p, q};
}

/* Whether eta H eta^-1 = H^dagger within tolerance, tested in the linear form
 * ||eta H - H^dagger eta|| <= rtol ||eta|| ||H|| + atol (Frobenius norms). */
inline bool pseudo_hermitian_check(const ComplexMatrix& h, const ComplexMatrix& eta,
                                   const Tolerances& tol = {}) {
    require_square(h, "pseudo_hermitian_check");
    detail::metric_eigenvalues(eta, tol); // validates eta
    if (eta.rows() != h.rows())
        throw std::invalid_argument("pseudo_hermitian_check: dimension mismatch");
    const double resid = (eta * h - h.adjoint() * eta).norm();
    return resid <= tol.rank_rtol * eta.norm() * h.norm() + tol.rank_atol;
}

namespace detail {

/* Locate the eigenvalue cluster of h containing lambda and insist it is real. */
inline EigCluster real_cluster_at(const ComplexMatrix& h, Complex lambda, const Tolerances& tol) {
    const double radius = tol.eig_cluster_tol * scale_of(h);
    const std::vector<EigCluster> clusters = cluster_eigenvalues(h, tol);
    const EigCluster* best = nullptr;
    double best_dist = std::numeric_limits<double>::infinity();
    for (const EigCluster& c : clusters) {
        const double d = std::abs(c.centroid - lambda);
        if (d < best_dist) {
            best_dist = d;
            best = &c;
        }
    }
    if (!best || best_dist > radius)
        throw std::invalid_argument("lambda is not an eigenvalue of the matrix within tolerance");
    if (std::abs(best->centroid.imag()) > radius)
        throw std::invalid_argument("eigenvalue cluster is not real within tolerance");
    return *best;
}

} // namespace detail

/* Signature of eta restricted to the generalized eigenspace of a real eigenvalue:
 * compress eta onto the numerical kernel of (H - lambda I)^a, a the algebraic
 * multiplicity, and count eigenvalue signs of the compression. The restriction is
 * nondegenerate whenever the eigenvalue is real and eta-compatible, so a tiny
 * eigenvalue of the compression is reported as an error. */
inline std::pair<int, int> restricted_signature(const ComplexMatrix& h, const ComplexMatrix& eta,
                                                Complex lambda, const Tolerances& tol = {}) {
    if (!pseudo_hermitian_check(h, eta, tol))
        throw std::invalid_argument("restricted_signature: matrix is not pseudo-Hermitian");
    const EigCluster cluster = detail::real_cluster_at(h, lambda, tol);
    const int n = static_cast<int>(h.rows());
    const ComplexMatrix nmat =
        h - Complex(cluster.centroid.real(), 0.0) * ComplexMatrix::Identity(n, n);
    ComplexMatrix power = ComplexMatrix::Identity(n, n);
    for (int i = 0; i < cluster.multiplicity; ++i)
        power = power * nmat;
    const ComplexMatrix basis = detail::kernel_basis(power, cluster.multiplicity);
    const ComplexMatrix g = basis.adjoint() * eta * basis;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(((g + g.adjoint()) / 2.0).eval(),
                                                    Eigen::EigenvaluesOnly);
    const Eigen::VectorXd vals = es.eigenvalues();
    const double vmax = vals.cwiseAbs().maxCoeff();
    int p = 0, q = 0;
    for (int i = 0; i < vals.size(); ++i) {
        if (std::abs(vals(i)) <= tol.rank_rtol * vmax + tol.rank_atol)
            throw std::domain_error("restricted_signature: restricted metric is degenerate");
        (vals(i) > 0 ? p : q)++;
    }
    return {p, q};
}

/* Per-row signs of a real eigenvalue of a pseudo-Hermitian matrix. For each block
 * size k the form g_k(x, y) = x^dagger (eta N^(k-1)) y on ker(N^k) has rank equal
 * to the number of size-k blocks, and the signs of its nonzero eigenvalues are the
 * signs those rows carry. The block count is known from the partition, so exactly
 * that many leading eigenvalues are counted instead of thresholding. */
inline SignedDiagram sign_characteristic(const ComplexMatrix& h, const ComplexMatrix& eta,
                                         Complex lambda, const Tolerances& tol = {},
                                         Diagnostics* diag = nullptr) {
    if (!pseudo_hermitian_check(h, eta, tol))
        throw std::invalid_argument("sign_characteristic: matrix is not pseudo-Hermitian");
    const EigCluster cluster = detail::real_cluster_at(h, lambda, tol);
    const Partition partition = jordan_type(h, Complex(cluster.centroid.real(), 0.0), tol, diag);
    const int n = static_cast<int>(h.rows());
    const ComplexMatrix nmat =
        h - Complex(cluster.centroid.real(), 0.0) * ComplexMatrix::Identity(n, n);

    std::vector<std::pair<int, int>> size_counts; // (block size, count), sizes descending
    for (int m : partition.parts()) {
        if (!size_counts.empty() && size_counts.back().first == m)
            ++size_counts.back().second;
        else
            size_counts.emplace_back(m, 1);
    }

    std::vector<int> parts, signs;
    for (const auto& [k, count] : size_counts) {
        int kernel_dim = 0;
        for (int m : partition.parts())
            kernel_dim += std::min(m, k);
        ComplexMatrix power = ComplexMatrix::Identity(n, n);
        for (int i = 0; i < k; ++i)
            power = power * nmat;
        const ComplexMatrix basis = detail::kernel_basis(power, kernel_dim);
        ComplexMatrix w = eta;
        for (int i = 0; i + 1 < k; ++i)
            w = w * nmat;
        const ComplexMatrix g = basis.adjoint() * w * basis;
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(((g + g.adjoint()) / 2.0).eval(),
                                                        Eigen::EigenvaluesOnly);
        std::vector<double> vals(es.eigenvalues().data(),
                                 es.eigenvalues().data() + es.eigenvalues().size());
        std::sort(vals.begin(), vals.end(),
                  [](double a, double b) { return std::abs(a) > std::abs(b); });
        if (diag && static_cast<int>(vals.size()) > count &&
            std::abs(vals[static_cast<std::size_t>(count - 1)]) <
                10 * std::abs(vals[static_cast<std::size_t>(count)])) {
            diag->low_confidence = true;
            diag->notes.push_back("sign characteristic of size-" + std::to_string(k) +
                                  " blocks has a weak rank gap");
        }
        int plus = 0;
        for (int i = 0; i < count; ++i)
            if (vals[static_cast<std::size_t>(i)] > 0)
                ++plus;
        for (int i = 0; i < count; ++i) {
            parts.push_back(k);
            signs.push_back(i < plus ? 1 : -1);
        }
    }
    return SignedDiagram(Partition(std::move(parts)), std::move(signs));
}

/* Sign assignments of `partition` whose diagrams carry exactly p_plus positive and
 * q_minus negative boxes. Can be empty when the totals are unreachable. */
inline std::vector<SignedDiagram> signed_candidates(const Partition& partition, int p_plus,
                                                    int q_minus) {
    if (partition.empty())
        throw std::invalid_argument("signed_candidates: empty partition");
    if (p_plus + q_minus != partition.n())
        throw std::invalid_argument("signed_candidates: box totals must sum to n");
    std::vector<SignedDiagram> out;
    for (SignedDiagram& d : detail::sign_assignments(partition)) {
        const DiagramSignature sig = diagram_signature(d);
        if (sig.p == p_plus && sig.q == q_minus)
            out.push_back(std::move(d));
    }
    return out;
}

struct ClassificationResult {
    Complex eigenvalue{};
    int multiplicity = 0;
    Partition partition;
    std::optional<std::pair<int, int>> restricted; // (p', q') when eta was supplied
    std::vector<SignedDiagram> signed_candidates;
    Diagnostics diagnostics;
};

/* Full signed classification of one real eigenvalue: Jordan partition, restricted
 * signature, and every signed diagram consistent with both. An empty candidate set
 * means the numerical partition and signature contradict each other. */
inline ClassificationResult classify_signed_type(const ComplexMatrix& h, const ComplexMatrix& eta,
                                                 Complex lambda, const Tolerances& tol = {}) {
    ClassificationResult res;
    const EigCluster cluster = detail::real_cluster_at(h, lambda, tol);
    res.eigenvalue = cluster.centroid;
    res.multiplicity = cluster.multiplicity;
    res.partition =
        jordan_type(h, Complex(cluster.centroid.real(), 0.0), tol, &res.diagnostics);
    res.restricted = restricted_signature(h, eta, lambda, tol);
    res.signed_candidates =
        signed_candidates(res.partition, res.restricted->first, res.restricted->second);
    if (res.signed_candidates.empty())
        throw std::domain_error(
            "classify_signed_type: no sign assignment matches the restricted signature");
    return res;
}

/* Jordan classification of every eigenvalue cluster. With a metric, real clusters
 * additionally carry the restricted signature and candidate signed diagrams. */
inline std::vector<ClassificationResult> classify_spectrum(const ComplexMatrix& h,
                                                           const Tolerances& tol = {}) {
    std::vector<ClassificationResult> out;
    for (const EigCluster& c : cluster_eigenvalues(h, tol)) {
        ClassificationResult res;
        res.eigenvalue = c.centroid;
        res.multiplicity = c.multiplicity;
        res.partition = jordan_type(h, c.centroid, tol, &res.diagnostics);
        out.push_back(std::move(res));
    }
    return out;
}

inline std::vector<ClassificationResult> classify_spectrum(const ComplexMatrix& h,
                                                           const ComplexMatrix& eta,
                                                           const Tolerances& tol = {}) {
    if (!pseudo_hermitian_check(h, eta, tol))
        throw std::invalid_argument("classify_spectrum: matrix is not pseudo-Hermitian");
    const double radius = tol.eig_cluster_tol * scale_of(h);
    std::vector<ClassificationResult> out;
    for (const EigCluster& c : cluster_eigenvalues(h, tol)) {
        if (std::abs(c.centroid.imag()) <= radius) {
            out.push_back(classify_signed_type(h, eta, c.centroid, tol));
        } else {
            ClassificationResult res;
            res.eigenvalue = c.centroid;
            res.multiplicity = c.multiplicity;
            res.partition = jordan_type(h, c.centroid, tol, &res.diagnostics);
            out.push_back(std::move(res));
        }
    }
    return out;
}

} // namespace eph
