#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "csl/rng.hpp"
#include "csl/scalar_poly.hpp"

using namespace csl;

namespace {

const Complex kI(0.0, 1.0);

RootList cube_roots_of_unity() {
    const double s = std::sqrt(3.0) / 2.0;
    return {Complex(1.0, 0.0), Complex(-0.5, s), Complex(-0.5, -s)};
}

RootList random_disk_roots(std::size_t d, RngStream& rng) {
    RootList a(d);
    for (auto& r : a) {
        const double rad = std::sqrt(rng.uniform01());
        const double t = 2.0 * M_PI * rng.uniform01();
        r = Complex(rad * std::cos(t), rad * std::sin(t));
    }
    return a;
}

void center(RootList& a) {
    Complex mean = 0.0;
    for (Complex x : a) mean += x;
    mean /= double(a.size());
    for (Complex& x : a) x -= mean;
}

// Multiset comparison after sorting both by (re, im).
double multiset_distance(RootList x, RootList y) {
    const auto lex = [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    };
    std::sort(x.begin(), x.end(), lex);
    std::sort(y.begin(), y.end(), lex);
    double worst = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) worst = std::max(worst, std::abs(x[k] - y[k]));
    return worst;
}

}  // namespace

TEST_CASE("coeffs_from_roots on fixed root sets") {
    const MonicPolynomial p1 = coeffs_from_roots({1.0, -1.0});
    REQUIRE(p1.coeffs.size() == 2);
    CHECK(std::abs(p1.coeffs[0] - Complex(-1.0)) == 0.0);
    CHECK(std::abs(p1.coeffs[1]) == 0.0);

    const MonicPolynomial p2 = coeffs_from_roots({0.0, 0.0, 0.0});
    for (const auto& c : p2.coeffs) CHECK(std::abs(c) == 0.0);

    const MonicPolynomial p3 = coeffs_from_roots(cube_roots_of_unity());
    CHECK(std::abs(p3.coeffs[0] - Complex(-1.0)) <= 1e-15);
    CHECK(std::abs(p3.coeffs[1]) <= 1e-15);
    CHECK(std::abs(p3.coeffs[2]) <= 1e-15);
}

TEST_CASE("expansion vanishes at its own roots") {
    RngStream rng(21);
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t d = 2 + rng.next_u64() % 7;
        const RootList a = random_disk_roots(d, rng);
        const MonicPolynomial p = coeffs_from_roots(a);
        double amax = 1.0;
        for (Complex r : a) amax = std::max(amax, std::abs(r));
        const double scale = std::pow(amax, double(d));
        for (Complex r : a) CHECK(std::abs(p.eval(r)) <= 1e-10 * scale);
    }
}

TEST_CASE("differentiate") {
    const Polynomial d1 = differentiate(coeffs_from_roots(cube_roots_of_unity()));
    REQUIRE(d1.coeffs.size() == 3);  // 3z^2
    CHECK(std::abs(d1.coeffs[2] - Complex(3.0)) <= 1e-15);
    CHECK(std::abs(d1.coeffs[1]) <= 1e-15);
    CHECK(std::abs(d1.coeffs[0]) <= 1e-15);

    MonicPolynomial quad{{Complex(5.0, 1.0), Complex(-2.0, 0.5)}};
    const Polynomial d2 = differentiate(quad);
    REQUIRE(d2.coeffs.size() == 2);  // 2z + c1
    CHECK(d2.coeffs[1] == Complex(2.0));
    CHECK(d2.coeffs[0] == Complex(-2.0, 0.5));

    RngStream rng(4);
    for (std::size_t d = 1; d <= 9; ++d) {
        const Polynomial dp = differentiate(coeffs_from_roots(random_disk_roots(d, rng)));
        CHECK(dp.degree() == d - 1);
    }
}

TEST_CASE("find_roots on fixed polynomials") {
    Polynomial triple_zero{{0.0, 0.0, 3.0}};  // 3z^2
    const RootList r1 = find_roots(triple_zero);
    REQUIRE(r1.size() == 2);
    CHECK(std::abs(r1[0]) <= 1e-6);
    CHECK(std::abs(r1[1]) <= 1e-6);

    Polynomial z2m1{{-1.0, 0.0, 1.0}};
    const RootList r2 = find_roots(z2m1);
    CHECK(std::abs(r2[0] - Complex(-1.0)) <= 1e-12);
    CHECK(std::abs(r2[1] - Complex(1.0)) <= 1e-12);

    // Critical points of (z-1)(z-2)(z-3): the quadratic-formula oracle gives
    // 2 +- 1/sqrt(3) for 3z^2 - 12z + 11.
    const Polynomial dp = differentiate(coeffs_from_roots({1.0, 2.0, 3.0}));
    const RootList r3 = find_roots(dp);
    const double inv_sqrt3 = 0.5773502691896258;
    CHECK(std::abs(r3[0] - Complex(2.0 - inv_sqrt3)) <= 1e-12);
    CHECK(std::abs(r3[1] - Complex(2.0 + inv_sqrt3)) <= 1e-12);
}

TEST_CASE("find_roots error paths") {
    Polynomial z2m1{{-1.0, 0.0, 1.0}};
    CHECK_THROWS_AS(find_roots(z2m1, 1e-12, 0), NoConvergence);
    Polynomial constant{{1.0}};
    CHECK_THROWS_AS(find_roots(constant), ArityMismatch);
}

TEST_CASE("root/coefficient round trip for well-separated roots") {
    RngStream rng(31);
    int tested = 0;
    while (tested < 40) {
        const std::size_t d = 2 + rng.next_u64() % 7;
        RootList a = random_disk_roots(d, rng);
        for (Complex& r : a) r *= 10.0;  // |a_j| <= 10
        bool separated = true;
        for (std::size_t i = 0; i < d && separated; ++i)
            for (std::size_t j = i + 1; j < d; ++j)
                if (std::abs(a[i] - a[j]) < 1e-3) separated = false;
        if (!separated) continue;
        ++tested;
        const RootList found = find_roots(to_polynomial(coeffs_from_roots(a)));
        CHECK(multiset_distance(a, found) <= 1e-7);
    }
}

TEST_CASE("schoenberg_report fixed examples") {
    const auto r1 = schoenberg_report({1.0, -1.0});
    CHECK(r1.lhs <= 1e-14);
    CHECK(std::abs(r1.rhs) <= 1e-14);
    CHECK(std::abs(r1.slack) <= 1e-14);
    CHECK(r1.holds);
    REQUIRE(r1.critical_points.size() == 1);
    CHECK(std::abs(r1.critical_points[0]) <= 1e-12);

    const auto r2 = schoenberg_report({0.0, 0.0, 0.0});
    CHECK(r2.lhs <= 1e-12);
    CHECK(r2.rhs <= 1e-12);

    const auto r3 = schoenberg_report(cube_roots_of_unity());
    CHECK(r3.lhs <= 1e-12);
    CHECK(r3.rhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r3.slack == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(schoenberg_report({1.0}), ArityMismatch);
}

TEST_CASE("debruin_sharma_report fixed examples") {
    const auto r1 = debruin_sharma_report(cube_roots_of_unity());
    CHECK(r1.lhs <= 1e-12);
    CHECK(r1.rhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r1.slack == doctest::Approx(1.0).epsilon(1e-9));

    const auto r2 = debruin_sharma_report({1.0, -1.0});
    CHECK(std::abs(r2.lhs) <= 1e-14);
    CHECK(std::abs(r2.rhs) <= 1e-14);
    CHECK(std::abs(r2.slack) <= 1e-14);

    CHECK_THROWS_AS(debruin_sharma_report({1.0, 0.0, 0.0}), CentroidNotZero);
}

TEST_CASE("kushel_tyaglov_report fixed examples") {
    const auto r1 = kushel_tyaglov_report(cube_roots_of_unity());
    CHECK(r1.lhs <= 1e-12);
    // Term-by-term: -3 + 1 + 0 + 2 - 0 = 0, an equality case.
    CHECK(r1.terms[0] == doctest::Approx(-3.0).epsilon(1e-12));
    CHECK(r1.terms[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(r1.terms[2]) <= 1e-12);
    CHECK(r1.terms[3] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(r1.terms[4]) <= 1e-12);
    CHECK(std::abs(r1.slack) <= 1e-10);
    CHECK(r1.holds);

    const auto r2 = kushel_tyaglov_report({0.0, 0.0, 0.0, 0.0});
    CHECK(r2.lhs <= 1e-12);
    CHECK(std::abs(r2.rhs) <= 1e-12);
}

TEST_CASE("kushel_tyaglov tightens debruin_sharma on centered lists") {
    RngStream rng(55);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t d = 3 + rng.next_u64() % 6;
        RootList a = random_disk_roots(d, rng);
        center(a);
        const auto dbs = debruin_sharma_report(a);
        const auto kt = kushel_tyaglov_report(a);
        CHECK(kt.slack <= dbs.slack + 1e-9);
        CHECK(kt.slack >= -1e-8);
        CHECK(dbs.slack >= -1e-8);
    }
}

TEST_CASE("schoenberg slack nonnegative on random disk roots") {
    RngStream rng(91);
    for (int rep = 0; rep < 500; ++rep) {
        const std::size_t d = 2 + rng.next_u64() % 9;
        const auto rep_s = schoenberg_report(random_disk_roots(d, rng));
        CHECK(rep_s.slack >= -1e-8);
    }
}

TEST_CASE("degree-2 schoenberg slack is exactly zero") {
    RngStream rng(17);
    for (int rep = 0; rep < 100; ++rep) {
        RootList a = random_disk_roots(2, rng);
        a[0] *= 5.0;
        a[1] *= 3.0;
        CHECK(std::abs(schoenberg_report(a).slack) <= 1e-12);
    }
}

TEST_CASE("critical points translate with the roots") {
    RngStream rng(13);
    for (int rep = 0; rep < 25; ++rep) {
        const std::size_t d = 2 + rng.next_u64() % 7;
        const RootList a = random_disk_roots(d, rng);
        const Complex t(1.5 * rng.uniform01() - 0.5, rng.uniform01());
        RootList shifted = a;
        for (Complex& x : shifted) x += t;
        RootList expect = critical_points(a);
        for (Complex& x : expect) x += t;
        CHECK(multiset_distance(critical_points(shifted), expect) <= 1e-8);
    }
}

TEST_CASE("slacks are rotation invariant") {
    RngStream rng(23);
    for (int rep = 0; rep < 25; ++rep) {
        const std::size_t d = 2 + rng.next_u64() % 7;
        RootList a = random_disk_roots(d, rng);
        center(a);
        const double theta = 2.0 * M_PI * rng.uniform01();
        const Complex u(std::cos(theta), std::sin(theta));
        RootList rotated = a;
        for (Complex& x : rotated) x *= u;

        CHECK(std::abs(schoenberg_report(a).slack - schoenberg_report(rotated).slack) <= 1e-9);
        CHECK(std::abs(debruin_sharma_report(a).slack - debruin_sharma_report(rotated).slack) <= 1e-9);
        CHECK(std::abs(kushel_tyaglov_report(a).slack - kushel_tyaglov_report(rotated).slack) <= 1e-9);
    }
}
