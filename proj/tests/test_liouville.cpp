#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "eph/conversion.hpp"
#include "eph/liouville.hpp"

using namespace eph;

namespace {

ComplexMatrix random_hermitian(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a(i, j) = Complex(gauss(rng), gauss(rng));
    return ComplexMatrix(0.5 * (a + a.adjoint()));
}

ComplexMatrix random_complex_symmetric(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a(i, j) = Complex(gauss(rng), gauss(rng));
    return ComplexMatrix(0.5 * (a + a.transpose()));
}

Eigen::VectorXcd vec_rowmajor(const ComplexMatrix& rho) {
    const int n = static_cast<int>(rho.rows());
    Eigen::VectorXcd v(n * n);
    for (int m = 0; m < n; ++m)
        for (int l = 0; l < n; ++l)
            v(m * n + l) = rho(m, l);
    return v;
}

} // namespace

TEST_CASE("effective Hamiltonian subtracts half the decay weights", "[liouville]") {
    LindbladModel model;
    model.h = random_hermitian(3, 11);
    ComplexMatrix l1(3, 3), l2(3, 3);
    l1.setZero();
    l2.setZero();
    l1(0, 1) = 1.0;
    l2(0, 2) = Complex(0.5, 0.25);
    model.jumps.push_back({2.0, l1});
    model.jumps.push_back({0.5, l2});

    const ComplexMatrix hnh = effective_nh_hamiltonian(model);
    const ComplexMatrix want =
        model.h - Complex(0, 0.5) * (2.0 * (l1.adjoint() * l1) + 0.5 * (l2.adjoint() * l2));
    CHECK((hnh - want).norm() == 0.0);

    LindbladModel bad = model;
    bad.h(0, 1) += Complex(0, 0.3);
    CHECK_THROWS_AS(effective_nh_hamiltonian(bad), std::invalid_argument);
    bad = model;
    bad.jumps[0].gamma = -1.0;
    CHECK_THROWS_AS(effective_nh_hamiltonian(bad), std::invalid_argument);
    bad = model;
    bad.jumps[0].op = ComplexMatrix::Zero(2, 2);
    CHECK_THROWS_AS(effective_nh_hamiltonian(bad), std::invalid_argument);
}

TEST_CASE("vectorized Liouvillian reproduces the master equation", "[liouville]") {
    LindbladModel model;
    model.h = random_hermitian(3, 21);
    ComplexMatrix l1(3, 3), l2(3, 3);
    l1.setZero();
    l2.setZero();
    l1(0, 2) = 1.0;
    l1(1, 0) = Complex(0, -0.5);
    l2(2, 1) = Complex(0.75, 0.5);
    model.jumps.push_back({1.25, l1});
    model.jumps.push_back({0.75, l2});

    const ComplexMatrix liou = vectorize_liouvillian(model);
    std::mt19937_64 rng(31);
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix rho(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            rho(i, j) = Complex(gauss(rng), gauss(rng));

    ComplexMatrix rhs = Complex(0, -1) * (model.h * rho - rho * model.h);
    for (const JumpTerm& jt : model.jumps) {
        const ComplexMatrix ldl = jt.op.adjoint() * jt.op;
        rhs += jt.gamma * (jt.op * rho * jt.op.adjoint() - 0.5 * (ldl * rho + rho * ldl));
    }
    CHECK((liou * vec_rowmajor(rho) - vec_rowmajor(rhs)).norm() <= 1e-13);

    // columns of the Liouvillian preserve the trace functional
    const Eigen::VectorXcd tr = vec_rowmajor(ComplexMatrix::Identity(3, 3));
    CHECK((tr.adjoint() * liou).norm() <= 1e-13);

    // without jumps the Liouvillian reduces to the no-jump generator
    LindbladModel closed;
    closed.h = model.h;
    CHECK((vectorize_liouvillian(closed) - no_jump_liouvillian(closed.h)).norm() == 0.0);
}

TEST_CASE("no-jump spectrum is the difference grid of the Hamiltonian spectrum",
          "[liouville]") {
    ComplexMatrix h(2, 2);
    h << Complex(1.0, -0.5), Complex(0.2, 0.0), Complex(0.0, 0.0), Complex(-1.0, -1.5);
    const ComplexMatrix liou = no_jump_liouvillian(h);
    const Eigen::ComplexEigenSolver<ComplexMatrix> hs(h), ls(liou);
    std::vector<Complex> want;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            want.push_back(Complex(0, -1) *
                           (hs.eigenvalues()(i) - std::conj(hs.eigenvalues()(j))));
    for (Complex w : want) {
        double best = 1e9;
        for (int k = 0; k < 4; ++k)
            best = std::min(best, std::abs(ls.eigenvalues()(k) - w));
        CHECK(best <= 1e-12);
    }
}

TEST_CASE("parity operator swaps the two tensor factors", "[liouville]") {
    for (int dim : {2, 3, 4}) {
        const ComplexMatrix p = parity_operator(dim);
        CHECK((p * p - ComplexMatrix::Identity(dim * dim, dim * dim)).norm() == 0.0);
        CHECK((p - p.adjoint()).norm() == 0.0);
        CHECK(std::abs(p.trace() - Complex(dim)) == 0.0);
        const auto [pos, neg] = metric_signature(p);
        CHECK(pos == dim * (dim + 1) / 2);
        CHECK(neg == dim * (dim - 1) / 2);

        ComplexMatrix a = random_hermitian(dim, 100 + static_cast<std::uint64_t>(dim));
        a(0, dim - 1) += Complex(0.1, 0.7); // break hermiticity, keep it generic
        CHECK((p * vec_rowmajor(a) - vec_rowmajor(a.transpose().eval())).norm() == 0.0);
    }
    CHECK_THROWS_AS(parity_operator(0), std::invalid_argument);

    // the no-jump generator is parity pseudo-Hermitian iff the Hamiltonian is
    // complex symmetric
    const ComplexMatrix sym = random_complex_symmetric(3, 7);
    CHECK(pseudo_hermitian_check(no_jump_liouvillian(sym), parity_operator(3)));
    ComplexMatrix asym = sym;
    asym(0, 1) += 0.4;
    CHECK(!pseudo_hermitian_check(no_jump_liouvillian(asym), parity_operator(3)));
}

TEST_CASE("predicted block sizes step down through the odd numbers", "[liouville]") {
    CHECK(predicted_partition(1) == Partition({1}));
    CHECK(predicted_partition(2) == Partition({3, 1}));
    CHECK(predicted_partition(3) == Partition({5, 3, 1}));
    CHECK(predicted_partition(4) == Partition({7, 5, 3, 1}));
    CHECK_THROWS_AS(predicted_partition(0), std::invalid_argument);
}

TEST_CASE("no-jump Liouvillian of a maximal EP carries the odd-staircase type",
          "[liouville]") {
    for (int n : {2, 3}) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const Complex ep(0.3 * static_cast<double>(seed) - 0.5, -0.8);
            const ComplexMatrix h =
                random_conjugate(jordan_matrix(Partition({n}), ep), 30.0, seed + 7);
            const ComplexMatrix liou = no_jump_liouvillian(h);
            const auto clusters = cluster_eigenvalues(liou);
            REQUIRE(clusters.size() == 1);
            const Complex lam = clusters.front().centroid;
            CHECK(std::abs(lam - Complex(2 * ep.imag(), 0)) <= 1e-6 * scale_of(liou));
            CHECK(jordan_type(liou, lam) == predicted_partition(n));
        }
    }
}

TEST_CASE("dissipative qubit assembles the three-level decay model", "[liouville]") {
    const EffectiveModel em = effective_qubit(0.7, -0.3, 2.0, 1.0, 0.5);
    REQUIRE(em.model.h.rows() == 3);
    CHECK(em.model.h(0, 0) == Complex(0));
    CHECK(em.model.h(1, 1) == Complex(0.7));
    CHECK(em.model.h(2, 2) == Complex(-0.3));
    CHECK(em.model.h(1, 2) == Complex(0.5));
    REQUIRE(em.model.jumps.size() == 2);
    CHECK(em.model.jumps[0].gamma == 2.0);
    CHECK(em.model.jumps[0].op(0, 1) == Complex(1));
    CHECK(em.model.jumps[1].gamma == 1.0);
    CHECK(em.model.jumps[1].op(0, 2) == Complex(1));

    ComplexMatrix want(2, 2);
    want << Complex(0.7, -1.0), Complex(0.5), Complex(0.5), Complex(-0.3, -0.5);
    CHECK((em.h_eff - want).norm() == 0.0);
    CHECK((em.liouvillian - no_jump_liouvillian(em.h_eff)).norm() == 0.0);
    CHECK(em.block == std::vector<int>({4, 5, 7, 8}));
    CHECK(!em.at_ep);

    // the excited-block compression of the full Liouvillian is exactly the
    // no-jump generator of the effective Hamiltonian
    const ComplexMatrix full = vectorize_liouvillian(em.model);
    ComplexMatrix compressed(4, 4);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            compressed(a, b) = full(em.block[static_cast<std::size_t>(a)],
                                    em.block[static_cast<std::size_t>(b)]);
    CHECK((compressed - em.liouvillian).norm() == 0.0);

    CHECK_THROWS_AS(effective_qubit(0, 0, -1.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("qubit tuned to the second-order EP matches the closed form", "[liouville]") {
    const EffectiveModel em = effective_qubit(0.0, 0.0, 5.0, 1.0, 1.0);
    CHECK(em.at_ep);
    CHECK(em.lambda_ep == -3.0);

    // -((g2+g3)/2) I + [[-2t, it, -it, 0], [it, 0, 0, -it], [-it, 0, 0, it], [0, -it, it, 2t]]
    // for g2 - g3 = +4t
    ComplexMatrix want(4, 4);
    const Complex it(0, 1);
    want << Complex(-5), it, -it, Complex(0), it, Complex(-3), Complex(0), -it, -it, Complex(0),
        Complex(-3), it, Complex(0), -it, it, Complex(-1);
    CHECK((em.liouvillian - want).norm() == 0.0);

    const ComplexMatrix parity = parity_operator(2);
    CHECK(pseudo_hermitian_check(em.liouvillian, parity));
    const ClassificationResult res =
        classify_signed_type(em.liouvillian, parity, Complex(em.lambda_ep, 0));
    CHECK(res.partition == Partition({3, 1}));
    REQUIRE(res.signed_candidates.size() == 1);
    CHECK(res.signed_candidates.front() == SignedDiagram(Partition({3, 1}), {1, 1}));
    CHECK(res.restricted == std::make_pair(3, 1));

    // the signed hierarchy over a (3,1) metric has no single-row diagram, so the
    // two blocks can never merge under parity-preserving perturbations
    for (const SignedDiagram& d : enumerate_signed(3, 1))
        CHECK(d.rows() >= 2);

    // mirrored branch g2 - g3 = -4t
    CHECK(effective_qubit(0.0, 0.0, 1.0, 5.0, 1.0).at_ep);
    CHECK(!effective_qubit(0.0, 0.0, 5.0, 1.2, 1.0).at_ep);
    CHECK(!effective_qubit(0.1, 0.0, 5.0, 1.0, 1.0).at_ep);
}

TEST_CASE("qutrit tuned to the third-order EP matches the closed form", "[liouville]") {
    const double rt2 = std::numbers::sqrt2;
    const double g2 = 1.0 + 4.0 * rt2, g3 = 1.0 + 2.0 * rt2, g4 = 1.0;
    const EffectiveModel em = effective_qutrit(0.0, g2, g3, g4, 1.0, 1);
    CHECK(em.at_ep);
    CHECK(em.lambda_ep == -g3);

    // -g3 I + t * displayed pattern for g2 - g4 = +4 sqrt(2) t
    const Complex i(0, 1);
    ComplexMatrix want(9, 9);
    want.setZero();
    const double d[9] = {-g3 - 2 * rt2, -g3 - rt2, -g3, -g3 - rt2, -g3,
                         -g3 + rt2,     -g3,       -g3 + rt2, -g3 + 2 * rt2};
    for (int k = 0; k < 9; ++k)
        want(k, k) = d[k];
    want(0, 1) = i;
    want(1, 0) = i;
    want(1, 2) = i;
    want(2, 1) = i;
    want(3, 4) = i;
    want(4, 3) = i;
    want(4, 5) = i;
    want(5, 4) = i;
    want(6, 7) = i;
    want(7, 6) = i;
    want(7, 8) = i;
    want(8, 7) = i;
    want(0, 3) = -i;
    want(3, 0) = -i;
    want(1, 4) = -i;
    want(4, 1) = -i;
    want(2, 5) = -i;
    want(5, 2) = -i;
    want(3, 6) = -i;
    want(6, 3) = -i;
    want(4, 7) = -i;
    want(7, 4) = -i;
    want(5, 8) = -i;
    want(8, 5) = -i;

    for (int a = 0; a < 9; ++a)
        for (int b = 0; b < 9; ++b) {
            const double lim = 1e-15 * std::max(1.0, std::abs(want(a, b)));
            CHECK(std::abs(em.liouvillian(a, b) - want(a, b)) <= lim);
        }

    const ComplexMatrix parity = parity_operator(3);
    CHECK(pseudo_hermitian_check(em.liouvillian, parity));
    const ClassificationResult res =
        classify_signed_type(em.liouvillian, parity, Complex(em.lambda_ep, 0));
    CHECK(res.partition == Partition({5, 3, 1}));
    REQUIRE(res.signed_candidates.size() == 1);
    CHECK(res.signed_candidates.front() ==
          SignedDiagram(Partition({5, 3, 1}), {1, 1, 1}));

    // opposite branch swaps the extreme rates
    const EffectiveModel mirror = effective_qutrit(0.0, g4, g3, g2, 1.0, -1);
    CHECK(mirror.at_ep);
    CHECK(!effective_qutrit(0.0, g2, g3, g4, 1.0, -1).at_ep);
    CHECK(!effective_qutrit(0.0, g2, 1.1 * g3, g4, 1.0, 1).at_ep);
    CHECK_THROWS_AS(effective_qutrit(0.0, g2, g3, g4, 1.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(effective_qutrit(0.0, -g2, g3, g4, 1.0, 1), std::invalid_argument);
}
