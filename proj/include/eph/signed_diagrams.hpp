#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "eph/partitions.hpp"

namespace eph {

using ComplexMatrix = Eigen::MatrixXcd;

/* Indefinite inner product eta with signature (p, q): p positive and q negative
 * eigenvalues. When no explicit matrix is supplied the canonical diagonal form
 * diag(1_p, -1_q) is meant. */
struct Pseudometric {
    int p = 0;
    int q = 0;
    std::optional<ComplexMatrix> eta;

    Pseudometric() = default;
    Pseudometric(int p_, int q_) : p(p_), q(q_) {
        if (p < 0 || q < 0 || p + q < 1)
            throw std::invalid_argument("pseudometric signature must be nonnegative, nonzero");
    }

    int dim() const { return p + q; }

    ComplexMatrix matrix() const {
        if (eta)
            return *eta;
        ComplexMatrix m = ComplexMatrix::Zero(dim(), dim());
        for (int i = 0; i < p; ++i)
            m(i, i) = 1.0;
        for (int i = p; i < dim(); ++i)
            m(i, i) = -1.0;
        return m;
    }
};

/* Sign of the box in row of length m at column l (1-based): eps * (-1)^(m-l).
 * The last box of the row always carries eps. */
inline std::vector<int> box_signs(int m, int eps) {
    if (m < 1 || (eps != 1 && eps != -1))
        throw std::invalid_argument("box_signs: need m >= 1 and eps = +-1");
    std::vector<int> row(static_cast<std::size_t>(m));
    for (int l = 1; l <= m; ++l)
        row[static_cast<std::size_t>(l - 1)] = ((m - l) % 2 == 0) ? eps : -eps;
    return row;
}

/* Young diagram with a sign eps_i attached to each row, recording the structure of
 * a real eigenvalue of a pseudo-Hermitian matrix: block sizes plus the sign each
 * Jordan chain contributes to the indefinite product. Rows are kept sorted by
 * descending length, and among equal lengths + rows precede - rows. */
class SignedDiagram {
public:
    SignedDiagram() = default;

    SignedDiagram(Partition parts, std::vector<int> signs) {
        if (parts.empty())
            throw std::invalid_argument("signed diagram needs at least one row");
        if (static_cast<int>(signs.size()) != parts.rows())
            throw std::invalid_argument("signed diagram: one sign per row required");
        for (int s : signs)
            if (s != 1 && s != -1)
                throw std::invalid_argument("signed diagram: signs must be +-1");
        // normalize: within each run of equal lengths, + rows first
        std::vector<std::pair<int, int>> rows;
        rows.reserve(signs.size());
        for (int i = 0; i < parts.rows(); ++i)
            rows.emplace_back(parts.parts()[static_cast<std::size_t>(i)],
                              signs[static_cast<std::size_t>(i)]);
        std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first)
                return a.first > b.first;
            return a.second > b.second;
        });
        std::vector<int> ps, ss;
        for (const auto& [m, s] : rows) {
            ps.push_back(m);
            ss.push_back(s);
        }
        partition_ = Partition(std::move(ps));
        signs_ = std::move(ss);
    }

    const Partition& partition() const { return partition_; }
    const std::vector<int>& signs() const { return signs_; }
    int rows() const { return partition_.rows(); }
    int n() const { return partition_.n(); }
    bool empty() const { return partition_.empty(); }

    friend bool operator==(const SignedDiagram&, const SignedDiagram&) = default;

private:
    Partition partition_;
    std::vector<int> signs_;
};

/* Node order for signed hierarchies: descending lexicographic on the partition,
 * then + before - on the sign vector. */
inline bool signed_node_before(const SignedDiagram& a, const SignedDiagram& b) {
    if (a.partition() != b.partition())
        return a.partition() > b.partition();
    return a.signs() > b.signs();
}

inline std::string format_signed(const SignedDiagram& d) {
    std::ostringstream os;
    os << '(';
    for (int i = 0; i < d.rows(); ++i) {
        os << (i ? "," : "") << d.partition().parts()[static_cast<std::size_t>(i)]
           << (d.signs()[static_cast<std::size_t>(i)] > 0 ? '+' : '-');
    }
    os << ')';
    return os.str();
}

struct DiagramSignature {
    int p = 0;
    int q = 0;
    int p_minus_q = 0;
};

/* Count + and - boxes of the whole diagram. A row of even length m contributes
 * m/2 of each sign; a row of odd length contributes one extra box of its row
 * sign, so p - q equals the sum of the odd-row signs. */
inline DiagramSignature diagram_signature(const SignedDiagram& d) {
    DiagramSignature sig;
    for (int i = 0; i < d.rows(); ++i) {
        const int m = d.partition().parts()[static_cast<std::size_t>(i)];
        const int eps = d.signs()[static_cast<std::size_t>(i)];
        if (m % 2 == 0) {
            sig.p += m / 2;
            sig.q += m / 2;
        } else {
            sig.p += (m + eps) / 2;
            sig.q += (m - eps) / 2;
        }
    }
    sig.p_minus_q = sig.p - sig.q;
    return sig;
}

namespace detail {

/* Sign assignments for one partition, grouped by equal row lengths: choosing how
 * many rows of each equal-length group are + determines the diagram up to the
 * normalization, so a group of g rows offers g+1 choices. Emitted with larger
 * +-counts first, which yields the canonical node order. */
inline std::vector<SignedDiagram> sign_assignments(const Partition& p) {
    std::vector<std::pair<int, int>> groups;    // (length, count)
    for (int m : p.parts()) {
        if (!groups.empty() && groups.back().first == m)
            ++groups.back().second;
        else
            groups.emplace_back(m, 1);
    }
    std::vector<SignedDiagram> out;
    std::vector<int> plus_counts(groups.size());
    std::function<void(std::size_t)> gen = [&](std::size_t g) {
        if (g == groups.size()) {
            std::vector<int> signs;
            for (std::size_t k = 0; k < groups.size(); ++k) {
                for (int i = 0; i < groups[k].second; ++i)
                    signs.push_back(i < plus_counts[k] ? 1 : -1);
            }
            out.emplace_back(p, std::move(signs));
            return;
        }
        for (int c = groups[g].second; c >= 0; --c) {
            plus_counts[g] = c;
            gen(g + 1);
        }
    };
    gen(0);
    return out;
}

} // namespace detail

/* All signed diagrams whose box counts realize the signature (p, q). */
inline std::vector<SignedDiagram> enumerate_signed(int p, int q) {
    if (p < 0 || q < 0 || p + q < 1 || p + q > 24)
        throw std::out_of_range("enumerate_signed: need p, q >= 0 and 1 <= p+q <= 24");
    std::vector<SignedDiagram> out;
    for (const Partition& part : partitions_of(p + q))
        for (SignedDiagram& d : detail::sign_assignments(part)) {
            const DiagramSignature sig = diagram_signature(d);
            if (sig.p == p && sig.q == q)
                out.push_back(std::move(d));
        }
    return out;
}

namespace detail {

/* Cumulative counts of + and - boxes in the first k columns, k = 1..width. */
inline std::pair<std::vector<int>, std::vector<int>> column_cumulatives(const SignedDiagram& d,
                                                                        int width) {
    std::vector<int> plus(static_cast<std::size_t>(width), 0);
    std::vector<int> minus(static_cast<std::size_t>(width), 0);
    for (int i = 0; i < d.rows(); ++i) {
        const int m = d.partition().parts()[static_cast<std::size_t>(i)];
        const std::vector<int> row = box_signs(m, d.signs()[static_cast<std::size_t>(i)]);
        for (int l = 0; l < m; ++l)
            ++(row[static_cast<std::size_t>(l)] > 0 ? plus : minus)[static_cast<std::size_t>(l)];
    }
    for (int k = 1; k < width; ++k) {
        plus[static_cast<std::size_t>(k)] += plus[static_cast<std::size_t>(k - 1)];
        minus[static_cast<std::size_t>(k)] += minus[static_cast<std::size_t>(k - 1)];
    }
    return {plus, minus};
}

} // namespace detail

/* Dominance for signed diagrams of one signature: every column prefix of A must
 * hold no more + boxes and no more - boxes than the same prefix of B. Refines
 * unsigned dominance of the underlying partitions. */
inline bool signed_dominates(const SignedDiagram& a, const SignedDiagram& b, bool strict = false) {
    const DiagramSignature sa = diagram_signature(a), sb = diagram_signature(b);
    if (sa.p != sb.p || sa.q != sb.q)
        throw std::invalid_argument("signed_dominates: signatures differ");
    if (strict && a == b)
        return false;
    const int width = std::max(a.partition().parts().front(), b.partition().parts().front());
    const auto [pa, ma] = detail::column_cumulatives(a, width);
    const auto [pb, mb] = detail::column_cumulatives(b, width);
    for (int k = 0; k < width; ++k)
        if (pa[static_cast<std::size_t>(k)] > pb[static_cast<std::size_t>(k)] ||
            ma[static_cast<std::size_t>(k)] > mb[static_cast<std::size_t>(k)])
            return false;
    return true;
}

/* Hierarchy of all signed diagrams with signature (p, q) under strict signed
 * dominance. Unlike the unsigned case there can be several maximal nodes. */
inline HierarchyDag<SignedDiagram> signed_hierarchy_dag(int p, int q) {
    if (p < 0 || q < 0 || p + q < 1 || p + q > 16)
        throw std::out_of_range("signed_hierarchy_dag: need p, q >= 0 and 1 <= p+q <= 16");
    HierarchyDag<SignedDiagram> dag;
    dag.nodes = enumerate_signed(p, q);
    std::sort(dag.nodes.begin(), dag.nodes.end(), signed_node_before);
    dag.cover_edges = detail::covering_edges(dag.nodes,
                                             [](const SignedDiagram& a, const SignedDiagram& b) {
                                                 return signed_dominates(a, b, true);
                                             });
    dag.meta = "eta(" + std::to_string(p) + "," + std::to_string(q) + ")";
    return dag;
}

/* Upper triangular Jordan block of size m for eigenvalue lambda. */
inline ComplexMatrix jordan_block(int m, std::complex<double> lambda) {
    ComplexMatrix j = ComplexMatrix::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        j(i, i) = lambda;
        if (i + 1 < m)
            j(i, i + 1) = 1.0;
    }
    return j;
}

/* Canonical pseudo-Hermitian pair for a signed diagram at eigenvalue 0: the
 * nilpotent J = direct sum of Jordan blocks sized by the rows, and the metric
 * P = direct sum of eps_i times the antidiagonal unit block. P J = J^dagger P
 * holds exactly. */
inline std::pair<ComplexMatrix, ComplexMatrix> canonical_pair(const SignedDiagram& d) {
    const int n = d.n();
    ComplexMatrix j = ComplexMatrix::Zero(n, n);
    ComplexMatrix p = ComplexMatrix::Zero(n, n);
    int off = 0;
    for (int i = 0; i < d.rows(); ++i) {
        const int m = d.partition().parts()[static_cast<std::size_t>(i)];
        const int eps = d.signs()[static_cast<std::size_t>(i)];
        for (int r = 0; r + 1 < m; ++r)
            j(off + r, off + r + 1) = 1.0;
        for (int r = 0; r < m; ++r)
            p(off + r, off + m - 1 - r) = static_cast<double>(eps);
        off += m;
    }
    return {j, p};
}

inline SignedDiagram flip_signs(const SignedDiagram& d) {
    std::vector<int> flipped;
    flipped.reserve(d.signs().size());
    for (int s : d.signs())
        flipped.push_back(-s);
    return SignedDiagram(d.partition(), std::move(flipped));
}

inline Partition forget_signs(const SignedDiagram& d) { return d.partition(); }

/* ASCII diagram with the per-box signs, rows as in box_signs. */
inline std::string signed_ascii(const SignedDiagram& d) {
    std::string s;
    for (int i = 0; i < d.rows(); ++i) {
        if (i)
            s += '\n';
        for (int v : box_signs(d.partition().parts()[static_cast<std::size_t>(i)],
                               d.signs()[static_cast<std::size_t>(i)]))
            s += v > 0 ? '+' : '-';
    }
    return s;
}

inline std::string emit_dot(const HierarchyDag<SignedDiagram>& dag,
                            DotLabel style = DotLabel::diagram) {
    return emit_dot(dag, [style](const SignedDiagram& d) {
        return style == DotLabel::diagram ? signed_ascii(d) : format_signed(d);
    });
}

} // namespace eph
