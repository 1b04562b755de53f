#pragma once

#include <json.hpp>

#include <complex>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "eph/conversion.hpp"
#include "eph/lieb.hpp"
#include "eph/liouville.hpp"
#include "eph/matrix_core.hpp"
#include "eph/partitions.hpp"
#include "eph/signed_diagrams.hpp"

namespace eph {

using nlohmann::json;

/* Structurally invalid input documents (wrong shape, sizes, or field types), as
 * opposed to well-formed inputs the mathematics rejects. */
struct JsonSchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline json matrix_to_json(const ComplexMatrix& m) {
    json data = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            data.push_back({m(i, j).real(), m(i, j).imag()});
    return {{"dim", m.rows()}, {"data", std::move(data)}};
}

inline ComplexMatrix matrix_from_json(const json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("data"))
        throw JsonSchemaError("matrix document needs fields \"dim\" and \"data\"");
    if (!j["dim"].is_number_integer() || j["dim"].get<long long>() < 1)
        throw JsonSchemaError("matrix \"dim\" must be a positive integer");
    const auto n = j["dim"].get<Eigen::Index>();
    const json& data = j["data"];
    if (!data.is_array() || static_cast<Eigen::Index>(data.size()) != n * n)
        throw JsonSchemaError("matrix \"data\" must hold dim*dim [re, im] pairs in row order");
    ComplexMatrix m(n, n);
    Eigen::Index k = 0;
    for (const json& cell : data) {
        if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() || !cell[1].is_number())
            throw JsonSchemaError("matrix entries must be [re, im] number pairs");
        m(k / n, k % n) = Complex(cell[0].get<double>(), cell[1].get<double>());
        ++k;
    }
    return m;
}

inline json partition_to_json(const Partition& p) { return json(p.parts()); }

inline Partition partition_from_json(const json& j) {
    if (!j.is_array() || j.empty())
        throw JsonSchemaError("partition must be a nonempty array of positive integers");
    std::vector<int> parts;
    for (const json& v : j) {
        if (!v.is_number_integer() || v.get<long long>() < 1)
            throw JsonSchemaError("partition parts must be positive integers");
        parts.push_back(v.get<int>());
    }
    return Partition(std::move(parts));
}

inline json signed_to_json(const SignedDiagram& d) {
    return {{"parts", d.partition().parts()}, {"signs", d.signs()}};
}

inline SignedDiagram signed_from_json(const json& j) {
    if (!j.is_object() || !j.contains("parts") || !j.contains("signs"))
        throw JsonSchemaError("signed diagram needs fields \"parts\" and \"signs\"");
    const Partition parts = partition_from_json(j["parts"]);
    if (!j["signs"].is_array() || j["signs"].size() != static_cast<std::size_t>(parts.rows()))
        throw JsonSchemaError("signed diagram needs one sign of +-1 per part");
    std::vector<int> signs;
    for (const json& v : j["signs"]) {
        if (!v.is_number_integer() || (v.get<int>() != 1 && v.get<int>() != -1))
            throw JsonSchemaError("signed diagram signs must be +-1");
        signs.push_back(v.get<int>());
    }
    return SignedDiagram(parts, std::move(signs));
}

inline json dag_to_json(const HierarchyDag<Partition>& dag) {
    json nodes = json::array();
    for (const Partition& p : dag.nodes)
        nodes.push_back(partition_to_json(p));
    json edges = json::array();
    for (const auto& [a, b] : dag.cover_edges)
        edges.push_back({a, b});
    return {{"meta", dag.meta}, {"nodes", std::move(nodes)}, {"cover_edges", std::move(edges)}};
}

inline json dag_to_json(const HierarchyDag<SignedDiagram>& dag) {
    json nodes = json::array();
    for (const SignedDiagram& d : dag.nodes)
        nodes.push_back(signed_to_json(d));
    json edges = json::array();
    for (const auto& [a, b] : dag.cover_edges)
        edges.push_back({a, b});
    return {{"meta", dag.meta}, {"nodes", std::move(nodes)}, {"cover_edges", std::move(edges)}};
}

inline json diagnostics_to_json(const Diagnostics& d) {
    json margins = json::array();
    for (const RankReport& r : d.rank_reports)
        margins.push_back({{"rank", r.rank},
                           {"threshold", r.threshold},
                           {"smallest_kept", r.smallest_kept},
                           {"largest_dropped", r.largest_dropped},
                           {"ambiguous", r.ambiguous}});
    return {{"low_confidence", d.low_confidence}, {"notes", d.notes},
            {"rank_margins", std::move(margins)}};
}

inline json classification_to_json(const ClassificationResult& r) {
    json j = {{"eigenvalue", {r.eigenvalue.real(), r.eigenvalue.imag()}},
              {"multiplicity", r.multiplicity},
              {"partition", partition_to_json(r.partition)},
              {"diagnostics", diagnostics_to_json(r.diagnostics)}};
    if (r.restricted) {
        j["restricted_signature"] = {r.restricted->first, r.restricted->second};
        json cands = json::array();
        for (const SignedDiagram& d : r.signed_candidates)
            cands.push_back(signed_to_json(d));
        j["signed_candidates"] = std::move(cands);
    }
    return j;
}

inline json witness_to_json(const PerturbationWitness& w) {
    const auto side_to_json = [](const std::variant<Partition, SignedDiagram>& side) {
        if (std::holds_alternative<Partition>(side))
            return partition_to_json(std::get<Partition>(side));
        return signed_to_json(std::get<SignedDiagram>(side));
    };
    return {{"source", side_to_json(w.source)},
            {"target", side_to_json(w.target)},
            {"epsilon", w.epsilon},
            {"delta", matrix_to_json(w.delta)},
            {"verified", w.verified},
            {"margins",
             {{"delta_norm", w.delta_norm},
              {"degeneracy_residual", w.degeneracy.max_residual},
              {"degeneracy_threshold", w.degeneracy.threshold},
              {"diagnostics", diagnostics_to_json(w.diagnostics)}}},
            {"search_log", w.search_log}};
}

} // namespace eph
