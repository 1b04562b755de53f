#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <ostream>
#include <iomanip>
#include <stdexcept>
#include <string>
#include <vector>

#include "eph/matrix_core.hpp"
#include "eph/partitions.hpp"

namespace eph {

/* Bloch Hamiltonian of the three-band lattice with imaginary gauge fields eps1,
 * eps2 on the two hopping directions. Momenta live on the torus (-pi, pi]. */
struct LiebParams {
    double eps1 = 0;
    double eps2 = 0;
    double kx = 0;
    double ky = 0;
};

inline ComplexMatrix lieb_hamiltonian(const LiebParams& prm) {
    const Complex i(0, 1);
    ComplexMatrix h = ComplexMatrix::Zero(3, 3);
    h(0, 1) = 1.0 + std::exp(i * prm.ky) + i * prm.eps1;
    h(1, 0) = 1.0 + std::exp(-i * prm.ky) + i * prm.eps2;
    h(1, 2) = 1.0 + std::exp(-i * prm.kx) - i * prm.eps2;
    h(2, 1) = 1.0 + std::exp(i * prm.kx) - i * prm.eps1;
    return h;
}

/* The characteristic polynomial of the Bloch Hamiltonian is
 * lambda^3 - eps0_squared * lambda, so the band triple degenerates exactly where
 * this function vanishes. Closed form of the product sum of the hoppings. */
inline Complex eps0_squared(const LiebParams& prm) {
    const double re = 2 * (2 - prm.eps1 * prm.eps2) + 2 * std::cos(prm.kx) +
                      2 * std::cos(prm.ky) +
                      (prm.eps1 - prm.eps2) * (std::sin(prm.ky) - std::sin(prm.kx));
    const double im = (prm.eps1 + prm.eps2) * (std::cos(prm.ky) - std::cos(prm.kx));
    return {re, im};
}

namespace detail {

inline Complex eps0_dkx(const LiebParams& prm) {
    return {-2 * std::sin(prm.kx) - (prm.eps1 - prm.eps2) * std::cos(prm.kx),
            (prm.eps1 + prm.eps2) * std::sin(prm.kx)};
}

inline Complex eps0_dky(const LiebParams& prm) {
    return {-2 * std::sin(prm.ky) + (prm.eps1 - prm.eps2) * std::cos(prm.ky),
            -(prm.eps1 + prm.eps2) * std::sin(prm.ky)};
}

inline double wrap_angle(double k) {
    k = std::remainder(k, 2 * std::numbers::pi);
    if (k <= -std::numbers::pi)
        k += 2 * std::numbers::pi;
    return k;
}

inline double torus_distance(double ax, double ay, double bx, double by) {
    return std::hypot(std::remainder(ax - bx, 2 * std::numbers::pi),
                      std::remainder(ay - by, 2 * std::numbers::pi));
}

} // namespace detail

struct DegeneracyPoint {
    double kx = 0;
    double ky = 0;
    Partition partition;
    double residual = 0;
};

/* Jordan type at a momentum where all three bands meet (the triple eigenvalue is
 * 0 because the Hamiltonian is traceless with zero determinant): the type is read
 * off the numerical rank, 2 -> (3), 1 -> (2,1), 0 -> (1,1,1). */
inline Partition classify_point(double kx, double ky, double eps1, double eps2,
                                const Tolerances& tol = {}) {
    const LiebParams prm{eps1, eps2, kx, ky};
    const ComplexMatrix h = lieb_hamiltonian(prm);
    if (!degeneracy_check(h, tol).degenerate)
        throw std::invalid_argument("classify_point: bands are not degenerate here");
    const double sigma_max = operator_norm(h);
    const int rank = numerical_rank(h, tol.rank_rtol * sigma_max + tol.rank_atol);
    switch (rank) {
    case 2:
        return Partition({3});
    case 1:
        return Partition({2, 1});
    case 0:
        return Partition({1, 1, 1});
    default:
        throw std::domain_error("classify_point: degenerate point with full rank");
    }
}

/* All isolated band-degeneracy momenta for one gauge pair: damped Newton on
 * eps0_squared from every point of a grid over the torus, deduplicated, then
 * classified. Two analytic families anchor the result and are cross-checked:
 * the diagonal pair at k0 = arccos(-1 + eps1 eps2 / 2) whenever 0 <= eps1 eps2
 * <= 4, and the antidiagonal roots of 4 cos k - 2 (eps1 - eps2) sin k =
 * 2 eps1 eps2 - 4 when they exist. Throws when a guaranteed point is missing.
 * If the zero set degenerates to a curve (eps1 + eps2 = 0 with zeros) the
 * returned points are grid-limited samples of it. */
inline std::vector<DegeneracyPoint> find_degeneracies(double eps1, double eps2,
                                                      const Tolerances& tol = {}, int grid = 256,
                                                      std::vector<std::string>* log = nullptr) {
    if (grid < 8)
        throw std::invalid_argument("find_degeneracies: grid too coarse");
    tol.validate();
    const double pi = std::numbers::pi;
    const auto note = [log](const std::string& s) {
        if (log)
            log->push_back(s);
    };
    /* Tight enough that a quadratic zero (|f| ~ d^2 near the root) localizes
     * the momentum to ~3e-7, well inside the merge radius below. */
    const double f_tol = 1e-13 * std::max(1.0, std::abs(eps1 * eps2));
    const auto newton = [&](double kx, double ky,
                            double target) -> std::optional<std::pair<double, double>> {
        LiebParams prm{eps1, eps2, kx, ky};
        Complex f = eps0_squared(prm);
        for (int iter = 0; iter < 60; ++iter) {
            if (std::abs(f) <= target)
                return std::make_pair(detail::wrap_angle(prm.kx), detail::wrap_angle(prm.ky));
            Eigen::Matrix2d jac;
            const Complex dx = detail::eps0_dkx(prm), dy = detail::eps0_dky(prm);
            jac << dx.real(), dy.real(), dx.imag(), dy.imag();
            Eigen::Vector2d r(f.real(), f.imag());
            const Eigen::Vector2d step =
                jac.jacobiSvd(Eigen::ComputeFullU | Eigen::ComputeFullV).solve(-r);
            double t = 1.0;
            bool improved = false;
            for (int halvings = 0; halvings < 24; ++halvings, t /= 2) {
                LiebParams trial{eps1, eps2, prm.kx + t * step(0), prm.ky + t * step(1)};
                const Complex ft = eps0_squared(trial);
                if (std::abs(ft) < std::abs(f)) {
                    prm = trial;
                    f = ft;
                    improved = true;
                    break;
                }
            }
            if (!improved)
                break;
        }
        return std::abs(f) <= f_tol
                   ? std::optional(std::make_pair(detail::wrap_angle(prm.kx),
                                                  detail::wrap_angle(prm.ky)))
                   : std::nullopt;
    };

    /* Coalescing roots flatten eps0_squared to cubic order along a valley, so
     * the f_tol acceptance basin extends to ~(f_tol)^(1/3) ~ 4e-5 in momentum
     * and the merge radius must cover it; genuine pairs separate much faster
     * when parameters leave a coalescence boundary. */
    const double merge_radius = 1e-4;
    std::vector<std::pair<double, double>> found;
    int dropped = 0;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            const double kx = -pi + 2 * pi * (i + 1) / grid;
            const double ky = -pi + 2 * pi * (j + 1) / grid;
            const auto root = newton(kx, ky, f_tol);
            if (!root) {
                ++dropped;
                continue;
            }
            bool fresh = true;
            for (const auto& [px, py] : found)
                if (detail::torus_distance(root->first, root->second, px, py) < merge_radius) {
                    fresh = false;
                    break;
                }
            if (fresh)
                found.push_back(*root);
        }
    note("seeds without convergence: " + std::to_string(dropped));

    const auto expect = [&](double kx, double ky, const char* family) {
        kx = detail::wrap_angle(kx);
        ky = detail::wrap_angle(ky);
        for (const auto& [px, py] : found)
            if (detail::torus_distance(kx, ky, px, py) < 1e-4)
                return;
        throw std::runtime_error(std::string("find_degeneracies: expected ") + family +
                                 " point near (" + std::to_string(kx) + ", " +
                                 std::to_string(ky) + ") was not found");
    };
    const double prod = eps1 * eps2;
    if (prod >= 0 && prod <= 4) {
        const double k0 = std::acos(-1 + prod / 2);
        expect(k0, k0, "diagonal");
        expect(-k0, -k0, "diagonal");
        note("diagonal family cross-checked at k0=" + std::to_string(k0));
    }
    if (std::abs(eps1 + eps2) > 1e-9) {
        const double r = std::hypot(4.0, 2 * (eps1 - eps2));
        const double c = (2 * prod - 4) / r;
        if (std::abs(c) <= 1) {
            const double phi = std::atan2(-2 * (eps1 - eps2), 4.0);
            for (double s : {1.0, -1.0}) {
                const double k = phi + s * std::acos(c);
                expect(k, -k, "antidiagonal");
            }
            note("antidiagonal family cross-checked");
        }
    }

    /* At f_tol a quadratic zero still sits ~3e-7 off the root, and the
     * root-scaled residual of the classification gate is exactly of that
     * order, so grind each representative down to the roundoff floor of
     * eps0_squared before classifying. Representatives that started on opposite
     * sides of a flat valley collapse onto the same root, so deduplicate again. */
    for (auto& rep : found)
        if (const auto refined = newton(rep.first, rep.second, 0.0))
            rep = *refined;
    std::vector<std::pair<double, double>> polished;
    for (const auto& [kx, ky] : found) {
        bool fresh = true;
        for (const auto& [px, py] : polished)
            if (detail::torus_distance(kx, ky, px, py) < merge_radius) {
                fresh = false;
                break;
            }
        if (fresh)
            polished.emplace_back(kx, ky);
    }
    found.swap(polished);
    std::sort(found.begin(), found.end());

    /* A located root is only trusted to within the merge radius, and a momentum
     * offset d feeds singular values of order |dH/dk| d ~ 2d and a comparable
     * band residual into the gates, so classification at located points carries
     * that allowance on top of the caller's tolerances. */
    Tolerances located = tol;
    located.rank_atol = std::max(located.rank_atol, 4 * merge_radius);
    located.degeneracy_tol = std::max(located.degeneracy_tol, merge_radius);
    std::vector<DegeneracyPoint> out;
    for (const auto& [kx, ky] : found) {
        DegeneracyPoint pt;
        pt.kx = kx;
        pt.ky = ky;
        pt.partition = classify_point(kx, ky, eps1, eps2, located);
        pt.residual =
            degeneracy_check(lieb_hamiltonian({eps1, eps2, kx, ky}), located).max_residual;
        out.push_back(std::move(pt));
    }
    return out;
}

struct ScanRow {
    double eps1 = 0;
    double eps2 = 0;
    bool has_point = false;
    double kx = 0;
    double ky = 0;
    Partition partition; // empty when the cell has no degeneracy
    double residual = 0;
};

/* One row per degeneracy point per gauge cell; cells without any point still
 * contribute one empty row so the grid shape survives in the output. */
inline std::vector<ScanRow> scan_degeneracies(const std::vector<double>& eps1_values,
                                              const std::vector<double>& eps2_values,
                                              const Tolerances& tol = {}, int grid = 256) {
    if (eps1_values.empty() || eps2_values.empty())
        throw std::invalid_argument("scan_degeneracies: empty parameter range");
    std::vector<ScanRow> rows;
    for (double e1 : eps1_values)
        for (double e2 : eps2_values) {
            const std::vector<DegeneracyPoint> pts = find_degeneracies(e1, e2, tol, grid);
            if (pts.empty()) {
                ScanRow row;
                row.eps1 = e1;
                row.eps2 = e2;
                rows.push_back(std::move(row));
                continue;
            }
            for (const DegeneracyPoint& pt : pts) {
                ScanRow row;
                row.eps1 = e1;
                row.eps2 = e2;
                row.has_point = true;
                row.kx = pt.kx;
                row.ky = pt.ky;
                row.partition = pt.partition;
                row.residual = pt.residual;
                rows.push_back(std::move(row));
            }
        }
    return rows;
}

inline void write_scan_csv(const std::vector<ScanRow>& rows, std::ostream& os) {
    os << "eps1,eps2,kx,ky,type,residual\n";
    os << std::setprecision(17);
    for (const ScanRow& row : rows) {
        os << row.eps1 << ',' << row.eps2 << ',';
        if (row.has_point)
            os << row.kx << ',' << row.ky << ",\"" << format_partition(row.partition) << "\","
               << row.residual;
        else
            os << ",,,";
        os << '\n';
    }
}

} // namespace eph
