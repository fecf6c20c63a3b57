#pragma once

#include <complex>
#include <vector>

#include "csl/error.hpp"

namespace csl {

using Complex = std::complex<double>;
using RootList = std::vector<Complex>;

/// z^d + c_{d-1} z^{d-1} + ... + c_0, monic by construction.
struct MonicPolynomial {
    std::vector<std::complex<double>> coeffs;  // c_0 .. c_{d-1}

    std::size_t degree() const noexcept { return coeffs.size(); }
    std::complex<double> eval(std::complex<double> z) const;
};

/// General polynomial, coefficients low to high, arbitrary leading term.
struct Polynomial {
    std::vector<std::complex<double>> coeffs;

    std::size_t degree() const noexcept { return coeffs.empty() ? 0 : coeffs.size() - 1; }
    std::complex<double> eval(std::complex<double> z) const;
    std::complex<double> eval_derivative(std::complex<double> z) const;
};

/// Vieta expansion of prod_j (z - r_j).
MonicPolynomial coeffs_from_roots(const RootList& roots);

/// Formal derivative; the result of a monic degree-d input has leading
/// coefficient d.
Polynomial differentiate(const MonicPolynomial& p);

Polynomial to_polynomial(const MonicPolynomial& p);

/// All complex roots by simultaneous Aberth-Ehrlich iteration.
///
/// Iterates start on a circle of radius 1 + max|coeff| with golden-angle
/// spacing and seeded jitter, run until max_k |p(z_k)| <= tol * scale with
/// scale = max(1, max_k |z_k|)^deg, then get a short Newton polish.
/// Clustered approximations stand in for multiple roots. Roots are returned
/// sorted by (re, im).
///
/// Throws NoConvergence after max_iter sweeps; retry with another init_seed.
RootList find_roots(const Polynomial& p, double tol = 1e-12, int max_iter = 200,
                    std::uint64_t init_seed = 0);

/// One sided inequality between critical-point and root power sums.
struct ScalarInequalityReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;  // rhs - lhs
    bool holds = false;
    RootList critical_points;
    double root_residual = 0.0;
    double tol = 0.0;
};

inline constexpr double kDefaultScalarTol = 1e-8;

/// Critical points of prod (z - a_j): the roots of the derivative. Retries
/// the root solve with a few initialization seeds before giving up.
RootList critical_points(const RootList& a, double root_tol = 1e-12, int max_iter = 200);

/// Sum |b_k|^2 <= (1/d^2)|sum a_j|^2 + ((d-2)/d) sum |a_j|^2.
ScalarInequalityReport schoenberg_report(const RootList& a, double tol = kDefaultScalarTol);

/// Fourth-power analogue under the centroid-zero hypothesis:
/// sum |b_k|^4 <= (2/d^2)(sum |a_j|^2)^2 + ((d-4)/d) sum |a_j|^4.
/// Throws CentroidNotZero when |sum a_j| > 1e-10 * (1 + max|a_j|).
ScalarInequalityReport debruin_sharma_report(const RootList& a, double tol = kDefaultScalarTol);

/// Strengthened fourth-power bound with no centroid hypothesis; the five
/// right-hand-side terms are exposed for diagnostics.
struct KushelTyaglovScalarReport : ScalarInequalityReport {
    double terms[5] = {0, 0, 0, 0, 0};
};

KushelTyaglovScalarReport kushel_tyaglov_report(const RootList& a, double tol = kDefaultScalarTol);

}  // namespace csl
