#include <doctest.h>

#include <cmath>

#include "csl/complex_matrix.hpp"
#include "csl/ensembles.hpp"
#include "csl/spectra.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace csl;
using csl::testing::hermitian3_eigen_closed_form;
using csl::testing::random_ginibre;
using csl::testing::random_hermitian;

namespace {
const Complex kI(0.0, 1.0);
}

TEST_CASE("adjoint on fixed matrices") {
    const ComplexMatrix id = ComplexMatrix::identity(3);
    CHECK(frobenius_norm(adjoint(id) - id) == 0.0);

    const ComplexMatrix nil = ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}});
    const ComplexMatrix nil_t = ComplexMatrix::from_rows({{0.0, 0.0}, {1.0, 0.0}});
    CHECK(frobenius_norm(adjoint(nil) - nil_t) == 0.0);

    const ComplexMatrix upper_i = ComplexMatrix::from_rows({{0.0, kI}, {0.0, 0.0}});
    const ComplexMatrix expect = ComplexMatrix::from_rows({{0.0, 0.0}, {-kI, 0.0}});
    CHECK(frobenius_norm(adjoint(upper_i) - expect) == 0.0);
}

TEST_CASE("adjoint is an involution and antihomomorphism") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const ComplexMatrix a = random_ginibre(4, seed);
        const ComplexMatrix b = random_ginibre(4, seed + 1000);
        CHECK(frobenius_norm(adjoint(adjoint(a)) - a) == 0.0);
        const double scale = frobenius_norm(a) * frobenius_norm(b);
        CHECK(frobenius_norm(adjoint(a * b) - adjoint(b) * adjoint(a)) <= 1e-12 * scale);
    }
}

TEST_CASE("ring operations") {
    CHECK(frobenius_norm(ComplexMatrix::identity(2)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

    const ComplexMatrix e12 = ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}});
    const ComplexMatrix e21 = ComplexMatrix::from_rows({{0.0, 0.0}, {1.0, 0.0}});
    const ComplexMatrix d10 = ComplexMatrix::diagonal({1.0, 0.0});
    const ComplexMatrix d01 = ComplexMatrix::diagonal({0.0, 1.0});
    CHECK(frobenius_norm(e12 * e21 - d10) == 0.0);  // noncommutativity witness
    CHECK(frobenius_norm(e21 * e12 - d01) == 0.0);

    const ComplexMatrix a = random_ginibre(5, 7);
    CHECK(frobenius_norm(a * ComplexMatrix::identity(5) - a) == 0.0);

    CHECK_THROWS_AS(ComplexMatrix(2) * ComplexMatrix(3), DimensionMismatch);
    CHECK_THROWS_AS(ComplexMatrix(2) + ComplexMatrix(3), DimensionMismatch);
}

TEST_CASE("finite-entry gate") {
    CHECK_THROWS_AS(ComplexMatrix(1, {Complex(std::nan(""), 0.0)}), Error);
    CHECK_THROWS_AS(ComplexMatrix(2, {1.0, 2.0, 3.0}), DimensionMismatch);
}

TEST_CASE("hermitian_eigenvalues on fixed matrices") {
    const auto diag = hermitian_eigenvalues(ComplexMatrix::diagonal({3.0, -1.0, 2.0}));
    REQUIRE(diag.eigenvalues.size() == 3);
    CHECK(diag.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(diag.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(diag.eigenvalues[2] == doctest::Approx(3.0).epsilon(1e-14));

    const ComplexMatrix pauli_x = ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
    const auto px = hermitian_eigenvalues(pauli_x);
    CHECK(px.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(px.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(px.residual <= 1e-13);
}

TEST_CASE("hermitian_eigenvalues vs closed-form cubic oracle") {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const ComplexMatrix m = random_hermitian(3, seed);
        const auto spec = hermitian_eigenvalues(m);
        const auto oracle = hermitian3_eigen_closed_form(m);
        for (int k = 0; k < 3; ++k)
            CHECK(std::abs(spec.eigenvalues[k] - oracle[k]) <= 1e-10 * std::max(1.0, frobenius_norm(m)));
    }
}

TEST_CASE("trace and Frobenius identities up to n = 16") {
    for (std::size_t n : {1, 2, 5, 9, 16}) {
        const ComplexMatrix m = random_hermitian(n, 77 + n);
        const auto spec = hermitian_eigenvalues(m);
        double sum = 0.0, sum_sq = 0.0;
        for (double lam : spec.eigenvalues) {
            sum += lam;
            sum_sq += lam * lam;
        }
        const double scale = std::max(1.0, frobenius_norm(m));
        CHECK(std::abs(sum - trace(m).real()) <= 1e-10 * scale);
        CHECK(std::abs(sum_sq - frobenius_norm(m) * frobenius_norm(m)) <= 1e-10 * scale * scale);
    }
}

TEST_CASE("hermitian_eigenvalues rejects non-Hermitian input") {
    const ComplexMatrix g = random_ginibre(4, 3);
    CHECK_THROWS_AS(hermitian_eigenvalues(g, 1e-12), NotHermitian);
}

TEST_CASE("loewner order on fixed pairs") {
    const ComplexMatrix id = ComplexMatrix::identity(3);
    const auto v1 = loewner_leq(id, 2.0 * id);
    CHECK(v1.holds);
    CHECK(v1.min_eig == doctest::Approx(1.0).epsilon(1e-12));

    const auto v2 = loewner_leq(ComplexMatrix::diagonal({1.0, 0.0}), ComplexMatrix::diagonal({0.0, 1.0}));
    CHECK_FALSE(v2.holds);
    CHECK(v2.min_eig == doctest::Approx(-1.0).epsilon(1e-12));

    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const ComplexMatrix c = random_ginibre(4, seed);
        CHECK(loewner_leq(ComplexMatrix(4), c * adjoint(c)).holds);
        CHECK(loewner_leq(ComplexMatrix(4), adjoint(c) * c).holds);
    }

    CHECK_THROWS_AS(loewner_leq(ComplexMatrix(2), ComplexMatrix(3)), DimensionMismatch);
    CHECK_THROWS_AS(loewner_leq(random_ginibre(3, 5), ComplexMatrix::identity(3)), NotHermitian);
}

TEST_CASE("loewner self-comparison") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const ComplexMatrix a = random_hermitian(5, seed);
        const auto v = loewner_leq(a, a);
        CHECK(v.holds);
        CHECK(v.min_eig >= -1e-12);
    }
}

TEST_CASE("ensemble determinism is bitwise") {
    for (Ensemble kind : {Ensemble::kGinibre, Ensemble::kGue, Ensemble::kUnitary, Ensemble::kDiagonalComplex}) {
        RngStream r1(42), r2(42);
        const ComplexMatrix a = sample_matrix(kind, 6, r1);
        const ComplexMatrix b = sample_matrix(kind, 6, r2);
        REQUIRE(a.data().size() == b.data().size());
        for (std::size_t k = 0; k < a.data().size(); ++k) CHECK(a.data()[k] == b.data()[k]);
    }
}

TEST_CASE("gue draws are Hermitian by construction") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        RngStream rng(seed);
        const ComplexMatrix h = sample_matrix(Ensemble::kGue, 8, rng);
        CHECK(hermiticity_residual(h) <= 1e-14);
    }
}

TEST_CASE("unitary draws are orthonormal") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        RngStream rng(seed);
        const ComplexMatrix u = sample_matrix(Ensemble::kUnitary, 8, rng);
        CHECK(frobenius_norm(adjoint(u) * u - ComplexMatrix::identity(8)) <= 1e-10);
    }
}

TEST_CASE("diagonal_complex draws stay in the unit disk") {
    RngStream rng(11);
    const ComplexMatrix m = sample_matrix(Ensemble::kDiagonalComplex, 12, rng);
    for (std::size_t i = 0; i < 12; ++i) {
        CHECK(std::abs(m(i, i)) <= 1.0);
        for (std::size_t j = 0; j < 12; ++j)
            if (i != j) CHECK(m(i, j) == Complex(0.0, 0.0));
    }
}

TEST_CASE("commuting normal tuples") {
    RngStream rng(5);
    const CommutingTuple tuple = sample_commuting_normal_tuple(4, 6, rng);
    REQUIRE(tuple.matrices.size() == 4);

    double scale = 1.0;
    for (const auto& m : tuple.matrices) scale = std::max(scale, frobenius_norm(m));
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(frobenius_norm(commutator(tuple.matrices[i], adjoint(tuple.matrices[i]))) <= 1e-10 * scale);
        for (std::size_t j = i + 1; j < 4; ++j)
            CHECK(frobenius_norm(commutator(tuple.matrices[i], tuple.matrices[j])) <= 1e-10 * scale);
    }

    // Round trip: conjugating back with the stored frame recovers the diagonals.
    const ComplexMatrix u_adj = adjoint(tuple.frame);
    for (std::size_t j = 0; j < 4; ++j) {
        const ComplexMatrix diag = u_adj * tuple.matrices[j] * tuple.frame;
        for (std::size_t s = 0; s < 6; ++s)
            CHECK(std::abs(diag(s, s) - tuple.diagonals[j][s]) <= 1e-10);
    }

    RngStream rng1(9);
    const CommutingTuple scalars = sample_commuting_normal_tuple(3, 1, rng1);
    CHECK(scalars.matrices.size() == 3);
    CHECK(scalars.matrices.front().dim() == 1);
}

TEST_CASE("rng streams split independently") {
    RngStream root(123);
    RngStream a = root.split(0);
    RngStream b = root.split(1);
    CHECK(a.next_u64() != b.next_u64());

    RngStream a2 = RngStream(123).split(0);
    a2.next_u64();
    CHECK(a.next_u64() == a2.next_u64());
}
