#pragma once

// Independent oracles used by the unit and acceptance suites. Everything in
// here is deliberately implemented without touching the library's solvers:
// the cubic eigenvalue formula is closed form, and the free-algebra
// expansion is exact rational arithmetic on words.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "csl/complex_matrix.hpp"

namespace csl::testing {

/// Eigenvalues of a 3x3 Hermitian matrix from the characteristic cubic
/// (trigonometric closed form), sorted ascending.
inline std::array<double, 3> hermitian3_eigen_closed_form(const ComplexMatrix& m) {
    const double q = trace(m).real() / 3.0;
    const double p1 = std::norm(m(0, 1)) + std::norm(m(0, 2)) + std::norm(m(1, 2));
    const double d0 = m(0, 0).real() - q, d1 = m(1, 1).real() - q, d2 = m(2, 2).real() - q;
    const double p2 = d0 * d0 + d1 * d1 + d2 * d2 + 2.0 * p1;
    if (p2 == 0.0) return {q, q, q};
    const double p = std::sqrt(p2 / 6.0);

    const ComplexMatrix b = (1.0 / p) * (m - q * ComplexMatrix::identity(3));
    const Complex det = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1)) -
                        b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0)) +
                        b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
    const double r = std::clamp(det.real() / 2.0, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;

    std::array<double, 3> eig;
    eig[2] = q + 2.0 * p * std::cos(phi);
    eig[0] = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
    eig[1] = 3.0 * q - eig[0] - eig[2];
    std::sort(eig.begin(), eig.end());
    return eig;
}

/// Exact rational number, small enough for word coefficients.
struct Frac {
    long long num = 0;
    long long den = 1;

    Frac() = default;
    Frac(long long n, long long d = 1) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        if (num == 0) den = 1;
    }

    friend Frac operator+(Frac a, Frac b) { return Frac(a.num * b.den + b.num * a.den, a.den * b.den); }
    friend Frac operator*(Frac a, Frac b) { return Frac(a.num * b.num, a.den * b.den); }
    friend bool operator==(Frac a, Frac b) { return a.num == b.num && a.den == b.den; }
    bool is_zero() const { return num == 0; }
};

/// Noncommutative polynomial over letters: 0 is z, 1..d are the a_j.
/// Words are letter sequences; multiplication concatenates.
using Word = std::vector<int>;
using FreePoly = std::map<Word, Frac>;

inline FreePoly free_mul(const FreePoly& lhs, const FreePoly& rhs) {
    FreePoly out;
    for (const auto& [wl, cl] : lhs) {
        for (const auto& [wr, cr] : rhs) {
            Word w = wl;
            w.insert(w.end(), wr.begin(), wr.end());
            Frac& c = out[w];
            c = c + cl * cr;
            if (c.is_zero()) out.erase(w);
        }
    }
    return out;
}

inline FreePoly free_add(FreePoly lhs, const FreePoly& rhs) {
    for (const auto& [w, c] : rhs) {
        Frac& acc = lhs[w];
        acc = acc + c;
        if (acc.is_zero()) lhs.erase(w);
    }
    return lhs;
}

inline FreePoly free_scale(FreePoly p, Frac s) {
    FreePoly out;
    for (auto& [w, c] : p) {
        const Frac sc = c * s;
        if (!sc.is_zero()) out[w] = sc;
    }
    return out;
}

inline FreePoly free_one() { return FreePoly{{Word{}, Frac(1)}}; }

/// z - a_j as a free polynomial (letter j >= 1).
inline FreePoly free_linear_factor(int letter) {
    return FreePoly{{Word{0}, Frac(1)}, {Word{letter}, Frac(-1)}};
}

/// The hat derivative sum_j prod_{k != j} (z - a_k), expanded exactly.
inline FreePoly free_hat_derivative(int d) {
    FreePoly sum;
    for (int omit = 1; omit <= d; ++omit) {
        FreePoly prod = free_one();
        for (int k = 1; k <= d; ++k)
            if (k != omit) prod = free_mul(prod, free_linear_factor(k));
        sum = free_add(std::move(sum), prod);
    }
    return sum;
}

/// d * prod_j (z - b_j) with b_j = ((d-j) a_j + j a_{j+1}) / d.
inline FreePoly free_candidate_target(int d) {
    FreePoly prod = free_one();
    for (int j = 1; j <= d - 1; ++j) {
        FreePoly factor{{Word{0}, Frac(1)},
                        {Word{j}, Frac(-(d - j), d)},
                        {Word{j + 1}, Frac(-j, d)}};
        prod = free_mul(prod, factor);
    }
    return free_scale(std::move(prod), Frac(d));
}

inline int letter_count(const Word& w) {
    int c = 0;
    for (int x : w)
        if (x != 0) ++c;
    return c;
}

/// Coefficients of the words containing exactly one non-z letter.
inline FreePoly single_letter_part(const FreePoly& p) {
    FreePoly out;
    for (const auto& [w, c] : p)
        if (letter_count(w) == 1) out[w] = c;
    return out;
}

}  // namespace csl::testing
