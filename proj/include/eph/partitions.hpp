#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace eph {

/* Integer partition with non-increasing positive parts (m_1 >= m_2 >= ... >= m_q).
 * Encodes the multiset of Jordan block sizes of a degenerate eigenvalue; drawn as a
 * Young diagram whose i-th row has m_i boxes. A default-constructed Partition is an
 * empty placeholder; every other constructor enforces the invariants. */
class Partition {
public:
    Partition() = default;

    explicit Partition(std::vector<int> parts) : parts_(std::move(parts)) {
        if (parts_.empty())
            throw std::invalid_argument("partition needs at least one part");
        for (int m : parts_)
            if (m <= 0)
                throw std::invalid_argument("partition parts must be positive");
        std::sort(parts_.begin(), parts_.end(), std::greater<>());
    }

    Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

    const std::vector<int>& parts() const { return parts_; }
    int n() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }
    int rows() const { return static_cast<int>(parts_.size()); }
    bool empty() const { return parts_.empty(); }

    friend bool operator==(const Partition&, const Partition&) = default;
    // Lexicographic on the part vectors; sorting in descending order puts (n) first
    // and (1,...,1) last, the node order used for hierarchy output.
    friend auto operator<=>(const Partition&, const Partition&) = default;

private:
    std::vector<int> parts_;
};

inline std::string format_partition(const Partition& p) {
    std::ostringstream os;
    os << '(';
    for (int i = 0; i < p.rows(); ++i)
        os << (i ? "," : "") << p.parts()[i];
    os << ')';
    return os.str();
}

/* All partitions of n in descending lexicographic order, first (n), last (1^n). */
inline std::vector<Partition> partitions_of(int n) {
    if (n < 1 || n > 64)
        throw std::out_of_range("partitions_of: n must be in [1, 64]");
    std::vector<Partition> out;
    std::vector<int> cur;
    std::function<void(int, int)> gen = [&](int remaining, int maxpart) {
        if (remaining == 0) {
            out.emplace_back(cur);
            return;
        }
        for (int k = std::min(maxpart, remaining); k >= 1; --k) {
            cur.push_back(k);
            gen(remaining - k, k);
            cur.pop_back();
        }
    };
    gen(n, n);
    return out;
}

/* Conjugate (transposed) diagram: column lengths of p. Entry j is #{i : m_i >= j}. */
inline Partition conjugate(const Partition& p) {
    std::vector<int> cols(static_cast<std::size_t>(p.parts().front()), 0);
    for (int m : p.parts())
        for (int j = 0; j < m; ++j)
            ++cols[static_cast<std::size_t>(j)];
    return Partition(std::move(cols));
}

/* rank(J^i) for the nilpotent matrix with block sizes p, i = 1..n. Entry i equals
 * n minus the sum of the first i column lengths; it hits 0 at i = m_1. */
inline std::vector<int> rank_sequence(const Partition& p) {
    const int n = p.n();
    const Partition conj = conjugate(p);
    std::vector<int> ranks(static_cast<std::size_t>(n), 0);
    int cum = 0;
    for (int i = 0; i < n; ++i) {
        cum += i < conj.rows() ? conj.parts()[static_cast<std::size_t>(i)] : 0;
        ranks[static_cast<std::size_t>(i)] = n - cum;
    }
    return ranks;
}

/* Dominance order on partitions of equal n: A dominates B when every prefix sum of
 * A's column lengths is <= the corresponding prefix sum of B's. Equivalent to the
 * componentwise comparison rank_sequence(A) >= rank_sequence(B). The strict variant
 * additionally requires A != B. */
inline bool dominates(const Partition& a, const Partition& b, bool strict = false) {
    if (a.n() != b.n())
        throw std::invalid_argument("dominates: partitions of different n");
    if (strict && a == b)
        return false;
    const Partition ca = conjugate(a), cb = conjugate(b);
    const int w = std::max(ca.rows(), cb.rows());
    int suma = 0, sumb = 0;
    for (int i = 0; i < w; ++i) {
        suma += i < ca.rows() ? ca.parts()[static_cast<std::size_t>(i)] : 0;
        sumb += i < cb.rows() ? cb.parts()[static_cast<std::size_t>(i)] : 0;
        if (suma > sumb)
            return false;
    }
    return true;
}

/* Directed acyclic graph of degeneracy types ordered by dominance. Edges run from
 * the dominating node to the dominated one and form the transitive reduction
 * (covering relations) of the strict order on `nodes`. */
template <class Node>
struct HierarchyDag {
    std::vector<Node> nodes;
    std::vector<std::pair<int, int>> cover_edges;
    std::string meta;
};

namespace detail {

/* Transitive reduction of a strict partial order given as a node list and a
 * comparison predicate. Cubic in the node count, which is fine at these sizes. */
template <class Node, class StrictLess>
std::vector<std::pair<int, int>> covering_edges(const std::vector<Node>& nodes,
                                                StrictLess dominates_strict) {
    const int v = static_cast<int>(nodes.size());
    std::vector<std::vector<bool>> dom(static_cast<std::size_t>(v),
                                       std::vector<bool>(static_cast<std::size_t>(v), false));
    for (int i = 0; i < v; ++i)
        for (int j = 0; j < v; ++j)
            if (i != j)
                dom[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    dominates_strict(nodes[static_cast<std::size_t>(i)],
                                     nodes[static_cast<std::size_t>(j)]);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < v; ++i)
        for (int j = 0; j < v; ++j) {
            if (!dom[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
                continue;
            bool covered = true;
            for (int k = 0; k < v && covered; ++k)
                if (dom[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] &&
                    dom[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)])
                    covered = false;
            if (covered)
                edges.emplace_back(i, j);
        }
    std::sort(edges.begin(), edges.end());
    return edges;
}

} // namespace detail

/* Hierarchy of all partitions of n under strict dominance. Unique maximum (n),
 * unique minimum (1^n). */
inline HierarchyDag<Partition> hierarchy_dag(int n) {
    if (n < 1 || n > 20)
        throw std::out_of_range("hierarchy_dag: n must be in [1, 20]");
    HierarchyDag<Partition> dag;
    dag.nodes = partitions_of(n);
    dag.cover_edges = detail::covering_edges(
        dag.nodes, [](const Partition& a, const Partition& b) { return dominates(a, b, true); });
    dag.meta = "n=" + std::to_string(n);
    return dag;
}

/* Attach one box to the first column: (m_1,...,m_q) -> (m_1,...,m_q,1). Injective
 * and strictly order-preserving between the hierarchies for n and n+1. */
inline Partition embed_one_box(const Partition& p) {
    std::vector<int> parts = p.parts();
    parts.push_back(1);
    return Partition(std::move(parts));
}

struct SelfSimilarEmbedding {
    HierarchyDag<Partition> target;  // hierarchy for n+1
    std::vector<int> node_map;       // source node index -> target node index
};

/* Map every node of an n-hierarchy into the (n+1)-hierarchy by embed_one_box. */
inline SelfSimilarEmbedding embed_self_similar(const HierarchyDag<Partition>& dag) {
    if (dag.nodes.empty())
        throw std::invalid_argument("embed_self_similar: empty hierarchy");
    SelfSimilarEmbedding emb;
    emb.target = hierarchy_dag(dag.nodes.front().n() + 1);
    emb.node_map.reserve(dag.nodes.size());
    for (const Partition& p : dag.nodes) {
        const Partition image = embed_one_box(p);
        const auto it = std::find(emb.target.nodes.begin(), emb.target.nodes.end(), image);
        emb.node_map.push_back(static_cast<int>(it - emb.target.nodes.begin()));
    }
    return emb;
}

/* The self-similar sublattice inside the hierarchy for m: the top node (m) together
 * with the embed_one_box images of every partition of m-1 except (1^{m-1}), with the
 * covering relations of dominance restricted to that node set. For m <= 6 this is a
 * chain from (m) down to (2,1^{m-2}). */
inline HierarchyDag<Partition> self_similar_subgraph(int m) {
    if (m < 2 || m > 20)
        throw std::out_of_range("self_similar_subgraph: m must be in [2, 20]");
    HierarchyDag<Partition> sub;
    sub.nodes.push_back(Partition({m}));
    for (const Partition& p : partitions_of(m - 1))
        if (p.parts().front() > 1)
            sub.nodes.push_back(embed_one_box(p));
    std::sort(sub.nodes.begin(), sub.nodes.end(), std::greater<>());
    sub.nodes.erase(std::unique(sub.nodes.begin(), sub.nodes.end()), sub.nodes.end());
    sub.cover_edges = detail::covering_edges(
        sub.nodes, [](const Partition& a, const Partition& b) { return dominates(a, b, true); });
    sub.meta = "self-similar m=" + std::to_string(m);
    return sub;
}

/* ASCII Young diagram, one row of '#' per part. */
inline std::string young_ascii(const Partition& p) {
    std::string s;
    for (int i = 0; i < p.rows(); ++i) {
        if (i)
            s += '\n';
        s.append(static_cast<std::size_t>(p.parts()[static_cast<std::size_t>(i)]), '#');
    }
    return s;
}

enum class DotLabel { diagram, text };

namespace detail {

inline std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '\n')
            out += "\\n";
        else if (c == '"' || c == '\\')
            out += std::string("\\") + c;
        else
            out += c;
    }
    return out;
}

} // namespace detail

/* Deterministic DOT rendering of a hierarchy; `label` maps a node to its text. */
template <class Node, class LabelFn>
std::string emit_dot(const HierarchyDag<Node>& dag, LabelFn label) {
    std::ostringstream os;
    os << "digraph hierarchy {\n";
    if (!dag.meta.empty())
        os << "  graph [label=\"" << detail::dot_escape(dag.meta) << "\"];\n";
    os << "  rankdir=TB;\n  node [shape=box, fontname=\"monospace\"];\n";
    for (std::size_t i = 0; i < dag.nodes.size(); ++i)
        os << "  n" << i << " [label=\"" << detail::dot_escape(label(dag.nodes[i])) << "\"];\n";
    for (const auto& [from, to] : dag.cover_edges)
        os << "  n" << from << " -> n" << to << ";\n";
    os << "}\n";
    return os.str();
}

inline std::string emit_dot(const HierarchyDag<Partition>& dag,
                            DotLabel style = DotLabel::diagram) {
    return emit_dot(dag, [style](const Partition& p) {
        return style == DotLabel::diagram ? young_ascii(p) : format_partition(p);
    });
}

} // namespace eph
