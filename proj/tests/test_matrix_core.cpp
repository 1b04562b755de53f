#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <random>
#include <vector>

#include "eph/conversion.hpp"
#include "eph/matrix_core.hpp"

using namespace eph;

namespace {

ComplexMatrix random_matrix(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            m(i, j) = Complex(re, im);
        }
    return m;
}

// p_k from the spectrum: p_k = (-1)^(k+1) e_k(lambda_1..lambda_n), with the
// elementary symmetric polynomials built by the standard recurrence.
std::vector<Complex> char_poly_from_eigenvalues(const ComplexMatrix& h) {
    const Eigen::ComplexEigenSolver<ComplexMatrix> es(h, false);
    const auto& ev = es.eigenvalues();
    const int n = static_cast<int>(ev.size());
    std::vector<Complex> e(static_cast<std::size_t>(n) + 1, 0.0);
    e[0] = 1.0;
    for (int i = 0; i < n; ++i)
        for (int k = std::min(i + 1, n); k >= 1; --k)
            e[static_cast<std::size_t>(k)] += ev(i) * e[static_cast<std::size_t>(k - 1)];
    std::vector<Complex> p(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k)
        p[static_cast<std::size_t>(k - 1)] =
            (k % 2 == 1 ? 1.0 : -1.0) * e[static_cast<std::size_t>(k)];
    return p;
}

} // namespace

TEST_CASE("characteristic coefficients of simple matrices", "[matrix_core]") {
    // (lambda - 1)^3 = lambda^3 - 3 lambda^2 + 3 lambda - 1 = lambda^3 - p1 l^2 - p2 l - p3
    const std::vector<Complex> p = char_poly(ComplexMatrix::Identity(3, 3));
    CHECK(std::abs(p[0] - Complex(3)) < 1e-14);
    CHECK(std::abs(p[1] - Complex(-3)) < 1e-14);
    CHECK(std::abs(p[2] - Complex(1)) < 1e-14);

    ComplexMatrix j = jordan_matrix(Partition({2}), 0.0);
    const std::vector<Complex> pj = char_poly(j);
    CHECK(std::abs(pj[0]) < 1e-14);
    CHECK(std::abs(pj[1]) < 1e-14);

    CHECK_THROWS_AS(char_poly(ComplexMatrix::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("characteristic coefficients match the spectrum", "[matrix_core]") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const ComplexMatrix h = random_matrix(6, seed);
        const std::vector<Complex> got = char_poly(h);
        const std::vector<Complex> want = char_poly_from_eigenvalues(h);
        for (std::size_t k = 0; k < got.size(); ++k)
            CHECK(std::abs(got[k] - want[k]) <= 1e-8 * std::max(1.0, std::abs(want[k])));
    }
}

TEST_CASE("traceless 3x3 coefficients match the closed forms", "[matrix_core]") {
    for (std::uint64_t seed = 100; seed < 125; ++seed) {
        ComplexMatrix d = random_matrix(3, seed);
        d -= (d.trace() / 3.0) * ComplexMatrix::Identity(3, 3);
        const Complex d11 = d(0, 0), d12 = d(0, 1), d13 = d(0, 2);
        const Complex d21 = d(1, 0), d23 = d(1, 2);
        const Complex d31 = d(2, 0), d32 = d(2, 1), d33 = d(2, 2);
        const Complex p = d11 * d11 + d33 * d11 + d33 * d33 + d12 * d21 + d13 * d31 + d23 * d32;
        const Complex q = d13 * d31 * d33 - d33 * d33 * d11 + d13 * d31 * d11 + d12 * d23 * d31 +
                          d13 * d21 * d32 - d33 * d11 * d11 - d12 * d21 * d33 - d23 * d32 * d11;
        const std::vector<Complex> got = char_poly(d);
        CHECK(std::abs(got[0]) <= 1e-10);
        CHECK(std::abs(got[1] - p) <= 1e-10 * std::max(1.0, std::abs(p)));
        CHECK(std::abs(got[2] - q) <= 1e-10 * std::max(1.0, std::abs(q)));
    }
}

TEST_CASE("thresholded rank reports", "[matrix_core]") {
    Eigen::Vector3cd diag(1.0, 1e-3, 1e-15);
    const ComplexMatrix m = diag.asDiagonal();
    const RankReport rep = numerical_rank_report(m, 1e-8);
    CHECK(rep.rank == 2);
    CHECK(rep.smallest_kept == Catch::Approx(1e-3));
    CHECK(rep.largest_dropped == Catch::Approx(1e-15));
    CHECK(!rep.ambiguous);
    CHECK(numerical_rank(m, 1e-8) == 2);

    // a singular value within a factor of ten of the cut is flagged
    CHECK(numerical_rank_report(m, 5e-4).ambiguous);
    CHECK(numerical_rank_report(m, 5e-3).ambiguous);
    CHECK_THROWS_AS(numerical_rank_report(m, -1.0), std::invalid_argument);
}

TEST_CASE("eigenvalue clustering by single linkage", "[matrix_core]") {
    Eigen::VectorXcd diag(5);
    diag << Complex(0), Complex(1e-9), Complex(1), Complex(1 + 1e-9), Complex(5);
    const std::vector<EigCluster> clusters = cluster_eigenvalues(ComplexMatrix(diag.asDiagonal()));
    REQUIRE(clusters.size() == 3);
    CHECK(clusters[0].multiplicity == 2);
    CHECK(std::abs(clusters[0].centroid - Complex(5e-10)) < 1e-12);
    CHECK(clusters[1].multiplicity == 2);
    CHECK(std::abs(clusters[1].centroid - Complex(1.0)) < 1e-9);
    CHECK(clusters[2].multiplicity == 1);
    CHECK(std::abs(clusters[2].centroid - Complex(5.0)) < 1e-12);

    Tolerances bad;
    bad.eig_cluster_tol = 0;
    CHECK_THROWS_AS(cluster_eigenvalues(ComplexMatrix(diag.asDiagonal()), bad),
                    std::invalid_argument);
}

TEST_CASE("jordan type of canonical forms", "[matrix_core]") {
    const Partition p({3, 2, 1});
    const ComplexMatrix j = jordan_matrix(p, Complex(2.0, 0.0));
    CHECK(jordan_type(j, 2.0) == p);
    CHECK_THROWS_AS(jordan_type(j, 3.0), std::invalid_argument);

    Diagnostics diag;
    CHECK(jordan_type(j, 2.0, {}, &diag) == p);
    CHECK(diag.rank_reports.size() >= 3);

    // zero matrix: all singleton blocks
    CHECK(jordan_type(ComplexMatrix::Zero(3, 3), 0.0) == Partition({1, 1, 1}));
}

TEST_CASE("jordan type survives similarity", "[matrix_core]") {
    for (int n = 2; n <= 6; ++n)
        for (const Partition& p : partitions_of(n))
            for (std::uint64_t seed = 0; seed < 3; ++seed) {
                const Complex lambda(0.3, -0.7);
                const ComplexMatrix h = random_conjugate(jordan_matrix(p, lambda), 100.0,
                                                         seed * 977 + static_cast<std::uint64_t>(n));
                CHECK(jordan_type(h, lambda) == p);
            }
}

TEST_CASE("jordan type agrees with the superdiagonal pattern oracle", "[matrix_core]") {
    for (int mask = 0; mask < 32; ++mask) {
        std::vector<int> bits;
        for (int i = 0; i < 5; ++i)
            bits.push_back((mask >> i) & 1);
        const auto [m, expected] = pattern_degeneracy(bits);
        CHECK(jordan_type(m, 0.0) == expected);
    }
}

TEST_CASE("total degeneracy detection", "[matrix_core]") {
    CHECK(degeneracy_check(jordan_matrix(Partition({2, 1}), 0.0)).degenerate);
    CHECK(degeneracy_check(ComplexMatrix::Identity(4, 4)).degenerate);

    Eigen::Vector3cd diag(Complex(0), Complex(0), Complex(1e-3));
    const DegeneracyReport rep = degeneracy_check(ComplexMatrix(diag.asDiagonal()));
    CHECK(!rep.degenerate);
    CHECK(rep.residuals.size() == 2);
    CHECK(rep.max_residual > 1e-4);

    const ComplexMatrix h = random_conjugate(jordan_matrix(Partition({3, 1}), Complex(1, 2)),
                                             50.0, 7);
    CHECK(degeneracy_check(h).degenerate);
}

TEST_CASE("metric signatures", "[matrix_core]") {
    Eigen::Vector3cd diag(Complex(1), Complex(1), Complex(-1));
    CHECK(metric_signature(ComplexMatrix(diag.asDiagonal())) == std::pair<int, int>(2, 1));
    CHECK(metric_signature(Pseudometric(2, 1).matrix()) == std::pair<int, int>(2, 1));

    ComplexMatrix sip = ComplexMatrix::Zero(2, 2);
    sip(0, 1) = 1.0;
    sip(1, 0) = 1.0;
    CHECK(metric_signature(sip) == std::pair<int, int>(1, 1));

    Eigen::Vector2cd sing(Complex(1), Complex(0));
    CHECK_THROWS_AS(metric_signature(ComplexMatrix(sing.asDiagonal())), std::domain_error);
    ComplexMatrix nonherm = ComplexMatrix::Identity(2, 2);
    nonherm(0, 1) = 0.5;
    CHECK_THROWS_AS(metric_signature(nonherm), std::invalid_argument);
}

TEST_CASE("pseudo-Hermiticity of canonical pairs", "[matrix_core]") {
    for (int p = 0; p <= 5; ++p)
        for (int q = 0; q <= 5 - p; ++q) {
            if (p + q < 1)
                continue;
            for (const SignedDiagram& d : enumerate_signed(p, q)) {
                const auto [j, eta] = canonical_pair(d);
                CHECK(pseudo_hermitian_check(j, eta));
            }
        }

    const auto [j, eta] = canonical_pair(SignedDiagram(Partition({2}), {1}));
    ComplexMatrix bad = j;
    bad(0, 0) = 1e-3; // breaks the symmetry against the flip metric
    CHECK(!pseudo_hermitian_check(bad, eta));
    CHECK_THROWS_AS(pseudo_hermitian_check(j, ComplexMatrix::Identity(3, 3)),
                    std::invalid_argument);
}

TEST_CASE("restricted signature of a generalized eigenspace", "[matrix_core]") {
    for (const SignedDiagram& d : enumerate_signed(2, 2)) {
        const auto [j, eta] = canonical_pair(d);
        const DiagramSignature sig = diagram_signature(d);
        CHECK(restricted_signature(j, eta, 0.0) == std::pair<int, int>(sig.p, sig.q));
    }

    // two separated eigenvalues: each keeps its own share of the metric
    ComplexMatrix h = ComplexMatrix::Zero(3, 3);
    h(0, 1) = 1.0;
    h(2, 2) = 3.0;
    ComplexMatrix eta = ComplexMatrix::Zero(3, 3);
    eta(0, 1) = 1.0;
    eta(1, 0) = 1.0;
    eta(2, 2) = 1.0;
    CHECK(restricted_signature(h, eta, 0.0) == std::pair<int, int>(1, 1));
    CHECK(restricted_signature(h, eta, 3.0) == std::pair<int, int>(1, 0));
    CHECK_THROWS_AS(restricted_signature(h, eta, Complex(0, 1)), std::invalid_argument);
}

TEST_CASE("sign characteristic recovers canonical diagrams", "[matrix_core]") {
    for (int p = 0; p <= 6; ++p)
        for (int q = 0; q <= 6 - p; ++q) {
            if (p + q < 1)
                continue;
            for (const SignedDiagram& d : enumerate_signed(p, q)) {
                const auto [j, eta] = canonical_pair(d);
                CHECK(sign_characteristic(j, eta, 0.0) == d);
            }
        }
}

TEST_CASE("sign characteristic is unitary-invariant", "[matrix_core]") {
    const std::vector<SignedDiagram> picks = {
        SignedDiagram(Partition({3, 1}), {1, 1}), SignedDiagram(Partition({2, 2}), {1, -1}),
        SignedDiagram(Partition({5, 3, 1}), {1, 1, 1}),
        SignedDiagram(Partition({2, 1, 1}), {-1, 1, -1})};
    for (const SignedDiagram& d : picks)
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            const auto [j, eta] = canonical_pair(d);
            const SimilarityTransform st = random_similarity(d.n(), 1.0, seed);
            const ComplexMatrix h = st.s * j * st.s_inv;
            const ComplexMatrix teta = st.s_inv.adjoint() * eta * st.s_inv;
            CHECK(pseudo_hermitian_check(h, teta));
            CHECK(sign_characteristic(h, teta, 0.0) == d);
        }
}

TEST_CASE("signed candidate filtering", "[matrix_core]") {
    CHECK(signed_candidates(Partition({2}), 2, 0).empty());
    CHECK(signed_candidates(Partition({1, 1}), 2, 0) ==
          std::vector<SignedDiagram>{SignedDiagram(Partition({1, 1}), {1, 1})});
    const std::vector<SignedDiagram> mixed = signed_candidates(Partition({3, 1}), 2, 2);
    CHECK(mixed == std::vector<SignedDiagram>{SignedDiagram(Partition({3, 1}), {1, -1}),
                                              SignedDiagram(Partition({3, 1}), {-1, 1})});
    CHECK_THROWS_AS(signed_candidates(Partition({2}), 2, 2), std::invalid_argument);
}

TEST_CASE("signed classification of canonical pairs", "[matrix_core]") {
    const SignedDiagram d(Partition({3, 1}), {1, 1});
    const auto [j, eta] = canonical_pair(d);
    const ClassificationResult res = classify_signed_type(j, eta, 0.0);
    CHECK(res.multiplicity == 4);
    CHECK(res.partition == Partition({3, 1}));
    REQUIRE(res.restricted.has_value());
    CHECK(*res.restricted == std::pair<int, int>(3, 1));
    CHECK(res.signed_candidates == std::vector<SignedDiagram>{d});

    // partition (5,3,1) at signature (6,3) admits a single sign assignment
    const SignedDiagram big(Partition({5, 3, 1}), {1, 1, 1});
    const auto [jb, etab] = canonical_pair(big);
    const ClassificationResult resb = classify_signed_type(jb, etab, 0.0);
    CHECK(resb.signed_candidates == std::vector<SignedDiagram>{big});

    CHECK_THROWS_AS(classify_signed_type(random_matrix(4, 3), eta, 0.0), std::invalid_argument);
}

TEST_CASE("spectrum-wide classification", "[matrix_core]") {
    ComplexMatrix h = ComplexMatrix::Zero(5, 5);
    h.topLeftCorner(2, 2) = jordan_matrix(Partition({2}), Complex(1.0, 0.0));
    h.bottomRightCorner(3, 3) = jordan_matrix(Partition({3}), Complex(-1.0, 0.0));
    const std::vector<ClassificationResult> res = classify_spectrum(h);
    REQUIRE(res.size() == 2);
    CHECK(std::abs(res[0].eigenvalue - Complex(-1.0)) < 1e-9);
    CHECK(res[0].partition == Partition({3}));
    CHECK(std::abs(res[1].eigenvalue - Complex(1.0)) < 1e-9);
    CHECK(res[1].partition == Partition({2}));
}

TEST_CASE("spectrum-wide signed classification", "[matrix_core]") {
    // real degenerate eigenvalue plus a conjugate pair swapped by the metric
    ComplexMatrix h = ComplexMatrix::Zero(4, 4);
    const SignedDiagram d(Partition({2}), {1});
    const auto [j, eta2] = canonical_pair(d);
    h.topLeftCorner(2, 2) = j + 2.0 * ComplexMatrix::Identity(2, 2);
    h(2, 2) = Complex(0, 1);
    h(3, 3) = Complex(0, -1);
    ComplexMatrix eta = ComplexMatrix::Zero(4, 4);
    eta.topLeftCorner(2, 2) = eta2;
    eta(2, 3) = 1.0;
    eta(3, 2) = 1.0;
    REQUIRE(pseudo_hermitian_check(h, eta));

    const std::vector<ClassificationResult> res = classify_spectrum(h, eta);
    REQUIRE(res.size() == 3);
    CHECK(!res[0].restricted.has_value()); // centroid -i
    CHECK(!res[1].restricted.has_value()); // centroid +i
    REQUIRE(res[2].restricted.has_value());
    CHECK(*res[2].restricted == std::pair<int, int>(1, 1));
    CHECK(res[2].partition == Partition({2}));
    CHECK(res[2].signed_candidates.size() == 2); // a lone even row hides its sign

    CHECK_THROWS_AS(classify_spectrum(random_matrix(4, 9), eta), std::invalid_argument);
}

TEST_CASE("tolerance validation", "[matrix_core]") {
    Tolerances t;
    t.rank_rtol = -1;
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    CHECK_THROWS_AS(jordan_type(ComplexMatrix::Zero(2, 2), 0.0, t), std::invalid_argument);
}
