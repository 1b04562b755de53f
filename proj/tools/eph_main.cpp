#include <CLI11.hpp>

#include "eph/json_io.hpp"

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

namespace {

using namespace eph;

/* Command-line misuse (unparseable argument text, unreadable files, contradictory
 * flags): exit code 2. Well-formed requests the mathematics rejects exit 1. */
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw UsageError("cannot open '" + path + "' for reading");
    return json::parse(in);
}

void write_text_file(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw UsageError("cannot open '" + path + "' for writing");
    out << text;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

int parse_int_token(std::string_view tok, const char* what) {
    int v = 0;
    const char* last = tok.data() + tok.size();
    const auto [p, ec] = std::from_chars(tok.data(), last, v);
    if (ec != std::errc() || p != last)
        throw UsageError(std::string("cannot parse ") + what + " '" + std::string(tok) + "'");
    return v;
}

double parse_double_token(std::string_view tok, const char* what) {
    double v = 0;
    const char* last = tok.data() + tok.size();
    const auto [p, ec] = std::from_chars(tok.data(), last, v);
    if (ec != std::errc() || p != last)
        throw UsageError(std::string("cannot parse ") + what + " '" + std::string(tok) + "'");
    return v;
}

Partition parse_partition_arg(const std::string& s) {
    std::vector<int> parts;
    for (std::string_view tok : split(s, ',')) {
        const int v = parse_int_token(tok, "partition part");
        if (v < 1)
            throw UsageError("partition parts must be positive: '" + s + "'");
        parts.push_back(v);
    }
    return Partition(std::move(parts));
}

SignedDiagram parse_signed_arg(const std::string& s) {
    std::vector<int> parts, signs;
    for (std::string_view tok : split(s, ',')) {
        if (tok.size() < 2 || (tok.back() != '+' && tok.back() != '-'))
            throw UsageError("signed parts look like 3+ or 1-: got '" + std::string(tok) + "'");
        const int v = parse_int_token(tok.substr(0, tok.size() - 1), "signed part");
        if (v < 1)
            throw UsageError("signed parts must be positive: '" + std::string(tok) + "'");
        parts.push_back(v);
        signs.push_back(tok.back() == '+' ? 1 : -1);
    }
    return SignedDiagram(Partition(std::move(parts)), std::move(signs));
}

std::pair<int, int> parse_signature_arg(const std::string& s) {
    const std::vector<std::string_view> toks = split(s, ',');
    if (toks.size() != 2)
        throw UsageError("metric signatures look like P,Q: got '" + s + "'");
    const int p = parse_int_token(toks[0], "signature entry");
    const int q = parse_int_token(toks[1], "signature entry");
    if (p < 0 || q < 0 || p + q < 1)
        throw UsageError("metric signature needs P, Q >= 0 with P+Q >= 1: got '" + s + "'");
    return {p, q};
}

std::vector<double> parse_range_arg(const std::string& s, const char* what) {
    const std::vector<std::string_view> toks = split(s, ':');
    if (toks.size() == 1)
        return {parse_double_token(toks[0], what)};
    if (toks.size() != 3)
        throw UsageError(std::string(what) + " must be a number or a range A:B:N: got '" + s +
                         "'");
    const double a = parse_double_token(toks[0], what);
    const double b = parse_double_token(toks[1], what);
    const int n = parse_int_token(toks[2], "range count");
    if (n < 1)
        throw UsageError("range count must be >= 1: got '" + s + "'");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        out.push_back(n == 1 ? a : a + (b - a) * k / (n - 1));
    return out;
}

std::uint64_t env_seed() {
    const char* env = std::getenv("EPH_SEED");
    if (env == nullptr || *env == '\0')
        return 0;
    std::uint64_t v = 0;
    const char* last = env + std::strlen(env);
    const auto [p, ec] = std::from_chars(env, last, v);
    if (ec != std::errc() || p != last)
        throw UsageError("EPH_SEED must be a nonnegative integer");
    return v;
}

bool has_sign_suffix(const std::string& s) {
    return s.find('+') != std::string::npos || s.find('-') != std::string::npos;
}

std::string format_real(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

std::string format_complex(const Complex& z) {
    if (z.imag() == 0)
        return format_real(z.real());
    if (z.real() == 0)
        return format_real(z.imag()) + "i";
    return format_real(z.real()) + (z.imag() < 0 ? "-" : "+") + format_real(std::abs(z.imag())) +
           "i";
}

std::string format_complex_precise(const Complex& z) {
    std::ostringstream os;
    os << std::setprecision(17) << z.real();
    if (z.imag() != 0)
        os << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
    return os.str();
}

void print_matrix(std::ostream& os, const ComplexMatrix& m) {
    const Eigen::Index rows = m.rows(), cols = m.cols();
    std::vector<std::string> cell(static_cast<std::size_t>(rows * cols));
    std::vector<std::size_t> width(static_cast<std::size_t>(cols), 0);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) {
            std::string& c = cell[static_cast<std::size_t>(i * cols + j)];
            c = format_complex(m(i, j));
            width[static_cast<std::size_t>(j)] =
                std::max(width[static_cast<std::size_t>(j)], c.size());
        }
    for (Eigen::Index i = 0; i < rows; ++i) {
        os << " ";
        for (Eigen::Index j = 0; j < cols; ++j)
            os << "  " << std::setw(static_cast<int>(width[static_cast<std::size_t>(j)]))
               << cell[static_cast<std::size_t>(i * cols + j)];
        os << '\n';
    }
}

template <class Node, class Fmt>
void print_dag(const HierarchyDag<Node>& dag, Fmt fmt) {
    std::cout << "hierarchy " << dag.meta << ": " << dag.nodes.size() << " nodes, "
              << dag.cover_edges.size() << " cover edges\n";
    for (std::size_t i = 0; i < dag.nodes.size(); ++i)
        std::cout << "  " << i << ": " << fmt(dag.nodes[i]) << '\n';
    if (dag.cover_edges.empty())
        return;
    std::cout << "cover edges (dominating -> dominated):\n";
    for (const auto& [a, b] : dag.cover_edges)
        std::cout << "  " << fmt(dag.nodes[static_cast<std::size_t>(a)]) << " -> "
                  << fmt(dag.nodes[static_cast<std::size_t>(b)]) << '\n';
}

void print_classifications(const std::vector<ClassificationResult>& results) {
    std::cout << "clusters: " << results.size() << '\n';
    for (std::size_t i = 0; i < results.size(); ++i) {
        const ClassificationResult& r = results[i];
        std::cout << "cluster " << i << ": eigenvalue " << format_complex_precise(r.eigenvalue)
                  << ", multiplicity " << r.multiplicity << '\n';
        std::cout << "  jordan type: " << format_partition(r.partition) << '\n';
        if (r.restricted) {
            std::cout << "  restricted signature: (" << r.restricted->first << ","
                      << r.restricted->second << ")\n";
            std::cout << "  signed candidates:";
            for (const SignedDiagram& d : r.signed_candidates)
                std::cout << ' ' << format_signed(d);
            std::cout << '\n';
        }
        if (r.diagnostics.low_confidence)
            std::cout << "  low confidence: at least one rank decision was fragile\n";
        for (const std::string& note : r.diagnostics.notes)
            std::cout << "  note: " << note << '\n';
    }
}

struct HierarchyArgs {
    int n = 0;
    std::string eta;
    std::string dot;
    bool as_json = false;
};

int run_hierarchy(const HierarchyArgs& a) {
    if (!a.eta.empty()) {
        const auto [p, q] = parse_signature_arg(a.eta);
        if (p + q != a.n)
            throw UsageError("metric signature " + a.eta + " sums to " + std::to_string(p + q) +
                             ", but N is " + std::to_string(a.n));
        const HierarchyDag<SignedDiagram> dag = signed_hierarchy_dag(p, q);
        if (!a.dot.empty())
            write_text_file(a.dot, emit_dot(dag));
        else if (a.as_json)
            std::cout << dag_to_json(dag).dump(2) << '\n';
        else
            print_dag(dag, format_signed);
        return 0;
    }
    const HierarchyDag<Partition> dag = hierarchy_dag(a.n);
    if (!a.dot.empty())
        write_text_file(a.dot, emit_dot(dag));
    else if (a.as_json)
        std::cout << dag_to_json(dag).dump(2) << '\n';
    else
        print_dag(dag, format_partition);
    return 0;
}

struct ClassifyArgs {
    std::string matrix_path;
    std::string eta_path;
    bool as_json = false;
    Tolerances tol;
};

int run_classify(const ClassifyArgs& a) {
    const ComplexMatrix h = matrix_from_json(read_json_file(a.matrix_path));
    std::optional<ComplexMatrix> eta;
    if (!a.eta_path.empty())
        eta = matrix_from_json(read_json_file(a.eta_path));
    const std::vector<ClassificationResult> results =
        eta ? classify_spectrum(h, *eta, a.tol) : classify_spectrum(h, a.tol);
    if (a.as_json) {
        json arr = json::array();
        for (const ClassificationResult& r : results)
            arr.push_back(classification_to_json(r));
        std::cout << arr.dump(2) << '\n';
        return 0;
    }
    std::cout << "matrix: " << h.rows() << "x" << h.cols() << '\n';
    if (eta) {
        const auto [p, q] = metric_signature(*eta, a.tol);
        std::cout << "metric signature: (" << p << "," << q << ")\n";
    }
    print_classifications(results);
    return 0;
}

struct CharpolyArgs {
    std::string matrix_path;
    bool as_json = false;
};

int run_charpoly(const CharpolyArgs& a) {
    const ComplexMatrix h = matrix_from_json(read_json_file(a.matrix_path));
    const std::vector<Complex> p = char_poly(h);
    const int n = static_cast<int>(h.rows());
    if (a.as_json) {
        json coeffs = json::array();
        for (const Complex& c : p)
            coeffs.push_back({c.real(), c.imag()});
        const json doc = {{"dim", n},
                          {"convention", "lambda^n - p1 lambda^(n-1) - ... - pn"},
                          {"coefficients", std::move(coeffs)}};
        std::cout << doc.dump(2) << '\n';
        return 0;
    }
    std::cout << "characteristic polynomial, written lambda^" << n << " - p1 lambda^" << n - 1
              << " - ... - p" << n << ":\n";
    for (int k = 1; k <= n; ++k)
        std::cout << "  p" << k << " = " << format_complex_precise(p[static_cast<std::size_t>(k - 1)])
                  << '\n';
    return 0;
}

struct ConvertArgs {
    std::string from;
    std::string to;
    std::string eta;
    double eps = 0;
    std::uint64_t seed = 0;
    Tolerances tol;
};

int run_convert(const ConvertArgs& a) {
    const bool signed_from = has_sign_suffix(a.from);
    const bool signed_to = has_sign_suffix(a.to);
    if (signed_from != signed_to)
        throw UsageError("mixed signed and unsigned types: '" + a.from + "' vs '" + a.to + "'");
    PerturbationWitness w;
    if (signed_from) {
        if (a.eta.empty())
            throw UsageError("signed types require --eta P,Q");
        const SignedDiagram source = parse_signed_arg(a.from);
        const SignedDiagram target = parse_signed_arg(a.to);
        const auto [p, q] = parse_signature_arg(a.eta);
        if (!signed_dominates(target, source, true))
            throw std::domain_error("target " + format_signed(target) +
                                    " must strictly dominate source " + format_signed(source) +
                                    " in the signed dominance order");
        w = conversion_witness(source, target, a.eps, Pseudometric(p, q), a.seed, a.tol);
    } else {
        if (!a.eta.empty())
            throw UsageError("--eta requires signed types like 3+,1-");
        const Partition source = parse_partition_arg(a.from);
        const Partition target = parse_partition_arg(a.to);
        if (!dominates(target, source, true))
            throw std::domain_error("target " + format_partition(target) +
                                    " must strictly dominate source " +
                                    format_partition(source) + " in the dominance order");
        w = conversion_witness(source, target, a.eps, a.seed, a.tol);
    }
    std::cout << witness_to_json(w).dump(2) << '\n';
    return 0;
}

struct LiouvilleCommon {
    bool as_json = false;
    std::string out_liouvillian;
    std::string out_metric;
    Tolerances tol;
};

int report_liouville(const EffectiveModel& em, const std::string& model, const json& params,
                     const LiouvilleCommon& c) {
    const int d = static_cast<int>(em.h_eff.rows());
    const ComplexMatrix parity = parity_operator(d);
    const std::vector<ClassificationResult> results =
        classify_spectrum(em.liouvillian, parity, c.tol);
    if (!c.out_liouvillian.empty())
        write_text_file(c.out_liouvillian, matrix_to_json(em.liouvillian).dump(2) + "\n");
    if (!c.out_metric.empty())
        write_text_file(c.out_metric, matrix_to_json(parity).dump(2) + "\n");
    if (c.as_json) {
        json arr = json::array();
        for (const ClassificationResult& r : results)
            arr.push_back(classification_to_json(r));
        const json doc = {{"model", model},
                          {"params", params},
                          {"at_ep", em.at_ep},
                          {"lambda_ep", em.lambda_ep},
                          {"liouvillian", matrix_to_json(em.liouvillian)},
                          {"metric", matrix_to_json(parity)},
                          {"classification", std::move(arr)}};
        std::cout << doc.dump(2) << '\n';
        return 0;
    }
    std::cout << "model: " << model << '\n';
    std::cout << "params:";
    for (const auto& [key, value] : params.items())
        std::cout << ' ' << key << '=' << value.dump();
    std::cout << '\n';
    std::cout << "tuned to exceptional point: " << (em.at_ep ? "yes" : "no");
    if (em.at_ep)
        std::cout << ", eigenvalue " << format_real(em.lambda_ep);
    std::cout << '\n';
    const auto [p, q] = metric_signature(parity, c.tol);
    std::cout << "no-jump liouvillian (" << d * d << "x" << d * d << "), parity metric signature ("
              << p << "," << q << "):\n";
    print_matrix(std::cout, em.liouvillian);
    print_classifications(results);
    return 0;
}

struct ScanArgs {
    std::string eps1;
    std::string eps2;
    std::string out;
    int grid = 256;
    bool as_json = false;
    Tolerances tol;
};

int run_lieb_scan(const ScanArgs& a) {
    const std::vector<double> e1 = parse_range_arg(a.eps1, "--eps1");
    const std::vector<double> e2 = parse_range_arg(a.eps2, "--eps2");
    const std::vector<ScanRow> rows = scan_degeneracies(e1, e2, a.tol, a.grid);
    std::string text;
    if (a.as_json) {
        json arr = json::array();
        for (const ScanRow& row : rows) {
            json j = {{"eps1", row.eps1}, {"eps2", row.eps2}, {"has_point", row.has_point}};
            if (row.has_point) {
                j["kx"] = row.kx;
                j["ky"] = row.ky;
                j["type"] = partition_to_json(row.partition);
                j["residual"] = row.residual;
            }
            arr.push_back(std::move(j));
        }
        text = arr.dump(2) + "\n";
    } else {
        std::ostringstream os;
        write_scan_csv(rows, os);
        text = os.str();
    }
    write_text_file(a.out.empty() ? "-" : a.out, text);
    return 0;
}

void add_tolerance_flags(CLI::App* cmd, Tolerances& tol) {
    cmd->add_option("--rank-rtol", tol.rank_rtol,
                    "relative singular value cutoff for rank decisions")
        ->capture_default_str();
    cmd->add_option("--rank-atol", tol.rank_atol,
                    "absolute singular value cutoff for rank decisions")
        ->capture_default_str();
    cmd->add_option("--eig-cluster-tol", tol.eig_cluster_tol,
                    "eigenvalue clustering radius relative to the matrix scale")
        ->capture_default_str();
    cmd->add_option("--degeneracy-tol", tol.degeneracy_tol,
                    "root-scaled residual bound for degeneracy checks")
        ->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"degeneracy hierarchies, Jordan classification, and exceptional point tools",
                 "eph"};
    app.require_subcommand(1);

    HierarchyArgs hier_args;
    CLI::App* hier = app.add_subcommand(
        "hierarchy", "dominance hierarchy of degeneracy types for matrix size N");
    hier->add_option("N", hier_args.n, "matrix size (total box count)")->required();
    hier->add_option("--eta", hier_args.eta, "metric signature P,Q selecting signed diagrams");
    CLI::Option* hier_dot =
        hier->add_option("--dot", hier_args.dot, "write DOT to this path ('-' for stdout)");
    CLI::Option* hier_json = hier->add_flag("--json", hier_args.as_json, "machine-readable output");
    hier_dot->excludes(hier_json);

    ClassifyArgs cls_args;
    CLI::App* cls = app.add_subcommand("classify", "Jordan classification of a matrix document");
    cls->add_option("MATRIX", cls_args.matrix_path, "matrix JSON file")->required();
    cls->add_option("--eta", cls_args.eta_path, "metric matrix JSON for signed classification");
    cls->add_flag("--json", cls_args.as_json, "machine-readable output");
    add_tolerance_flags(cls, cls_args.tol);
    double tol_alias = 0;
    CLI::Option* tol_opt = cls->add_option("--tol", tol_alias, "shorthand for --rank-rtol");

    CharpolyArgs cp_args;
    CLI::App* cp = app.add_subcommand("charpoly", "characteristic polynomial coefficients");
    cp->add_option("MATRIX", cp_args.matrix_path, "matrix JSON file")->required();
    cp->add_flag("--json", cp_args.as_json, "machine-readable output");

    ConvertArgs cv_args;
    CLI::App* cv = app.add_subcommand(
        "convert", "perturbation witness converting one degeneracy type into another");
    cv->add_option("--from", cv_args.from, "source type, e.g. 2,1 or 3+,1-")->required();
    cv->add_option("--to", cv_args.to, "target type; must strictly dominate the source")
        ->required();
    cv->add_option("--eta", cv_args.eta, "metric signature P,Q for signed conversions");
    cv->add_option("--eps", cv_args.eps, "perturbation norm bound in (0, 1)")->required();
    CLI::Option* seed_opt =
        cv->add_option("--seed", cv_args.seed, "search seed (default: EPH_SEED, then 0)");
    add_tolerance_flags(cv, cv_args.tol);

    CLI::App* lv = app.add_subcommand("liouville", "no-jump Liouvillian decay models");
    lv->require_subcommand(1);
    struct {
        double eps2 = 0, eps3 = 0, gamma2 = 5, gamma3 = 1, t = 1;
    } qb;
    LiouvilleCommon qb_common;
    CLI::App* lvq = lv->add_subcommand("qubit", "two decaying levels over a ground level");
    lvq->add_option("--eps2", qb.eps2, "detuning of level 2")->capture_default_str();
    lvq->add_option("--eps3", qb.eps3, "detuning of level 3")->capture_default_str();
    lvq->add_option("--gamma2", qb.gamma2, "decay rate of level 2")->capture_default_str();
    lvq->add_option("--gamma3", qb.gamma3, "decay rate of level 3")->capture_default_str();
    lvq->add_option("--t", qb.t, "coupling")->capture_default_str();
    lvq->add_flag("--json", qb_common.as_json, "machine-readable output");
    lvq->add_option("--out-liouvillian", qb_common.out_liouvillian,
                    "write the Liouvillian as matrix JSON to this path");
    lvq->add_option("--out-metric", qb_common.out_metric,
                    "write the parity metric as matrix JSON to this path");
    add_tolerance_flags(lvq, qb_common.tol);

    struct {
        double eps = 0, gamma2 = 1 + 4 * std::numbers::sqrt2, gamma3 = 1 + 2 * std::numbers::sqrt2,
               gamma4 = 1, t = 1;
        int branch = 1;
    } qt;
    LiouvilleCommon qt_common;
    CLI::App* lvt = lv->add_subcommand("qutrit", "three decaying levels in a chain");
    lvt->add_option("--eps", qt.eps, "common detuning")->capture_default_str();
    lvt->add_option("--gamma2", qt.gamma2, "decay rate of level 2")->capture_default_str();
    lvt->add_option("--gamma3", qt.gamma3, "decay rate of level 3")->capture_default_str();
    lvt->add_option("--gamma4", qt.gamma4, "decay rate of level 4")->capture_default_str();
    lvt->add_option("--t", qt.t, "coupling")->capture_default_str();
    lvt->add_option("--branch", qt.branch, "rate ordering branch, +1 or -1 (use --branch=-1)")
        ->capture_default_str();
    lvt->add_flag("--json", qt_common.as_json, "machine-readable output");
    lvt->add_option("--out-liouvillian", qt_common.out_liouvillian,
                    "write the Liouvillian as matrix JSON to this path");
    lvt->add_option("--out-metric", qt_common.out_metric,
                    "write the parity metric as matrix JSON to this path");
    add_tolerance_flags(lvt, qt_common.tol);

    CLI::App* lieb = app.add_subcommand("lieb", "non-Hermitian Lieb lattice band degeneracies");
    lieb->require_subcommand(1);
    ScanArgs sc_args;
    CLI::App* scan = lieb->add_subcommand("scan", "locate and classify degeneracies per cell");
    scan->add_option("--eps1", sc_args.eps1, "gauge field 1 value or range A:B:N (use = for negatives)")
        ->required();
    scan->add_option("--eps2", sc_args.eps2, "gauge field 2 value or range A:B:N (use = for negatives)")
        ->required();
    scan->add_option("--out", sc_args.out, "output path ('-' for stdout, the default)");
    scan->add_option("--grid", sc_args.grid, "seed grid resolution per momentum axis")
        ->capture_default_str();
    scan->add_flag("--json", sc_args.as_json, "machine-readable output instead of CSV");
    add_tolerance_flags(scan, sc_args.tol);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (tol_opt->count() > 0)
            cls_args.tol.rank_rtol = tol_alias;
        if (seed_opt->count() == 0)
            cv_args.seed = env_seed();
        if (hier->parsed())
            return run_hierarchy(hier_args);
        if (cls->parsed())
            return run_classify(cls_args);
        if (cp->parsed())
            return run_charpoly(cp_args);
        if (cv->parsed())
            return run_convert(cv_args);
        if (lv->parsed()) {
            if (lvq->parsed()) {
                const EffectiveModel em =
                    effective_qubit(qb.eps2, qb.eps3, qb.gamma2, qb.gamma3, qb.t);
                const json params = {{"eps2", qb.eps2},
                                     {"eps3", qb.eps3},
                                     {"gamma2", qb.gamma2},
                                     {"gamma3", qb.gamma3},
                                     {"t", qb.t}};
                return report_liouville(em, "qubit", params, qb_common);
            }
            const EffectiveModel em =
                effective_qutrit(qt.eps, qt.gamma2, qt.gamma3, qt.gamma4, qt.t, qt.branch);
            const json params = {{"eps", qt.eps},     {"gamma2", qt.gamma2},
                                 {"gamma3", qt.gamma3}, {"gamma4", qt.gamma4},
                                 {"t", qt.t},         {"branch", qt.branch}};
            return report_liouville(em, "qutrit", params, qt_common);
        }
        if (scan->parsed())
            return run_lieb_scan(sc_args);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const JsonSchemaError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
