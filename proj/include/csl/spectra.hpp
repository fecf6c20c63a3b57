#pragma once

#include <vector>

#include "csl/complex_matrix.hpp"

namespace csl {

/// Spectrum of a Hermitian matrix.
struct HermitianSpectrum {
    std::vector<double> eigenvalues;  // sorted ascending
    double residual = 0.0;            // max_i ||A v_i - lambda_i v_i||_2 achieved
    ComplexMatrix eigenvectors;       // columns, same order as eigenvalues
};

/// Outcome of a Loewner-order comparison A <= B.
struct LoewnerVerdict {
    bool holds = false;
    double min_eig = 0.0;  // smallest eigenvalue of the Hermitian part of B - A
    double tol = 0.0;
};

/// Default Hermiticity gate used by the spectral routines.
inline constexpr double kDefaultHermitianTol = 1e-8;

/// Relative Loewner tolerance: tol = 1e-9 * max(1, ||A||_F + ||B||_F).
double default_loewner_tol(const ComplexMatrix& a, const ComplexMatrix& b);

/// Eigenvalues of the Hermitian symmetrization (M + M*)/2, sorted ascending.
///
/// Cyclic complex Jacobi: each sweep rotates every (p, q) pair to zero the
/// off-diagonal entry, sweeping until the off-diagonal Frobenius mass drops
/// below 1e-13 * ||M||_F, at most 60 sweeps. Accurate and plenty fast for
/// the small dimensions this library targets.
///
/// Throws NotHermitian when ||M - M*||_F > tol * max(1, ||M||_F).
HermitianSpectrum hermitian_eigenvalues(const ComplexMatrix& m, double tol = kDefaultHermitianTol);

/// Decide A <= B in the Loewner order: holds iff the smallest eigenvalue of
/// the Hermitian part of B - A is >= -tol. tol <= 0 selects the default
/// relative tolerance.
LoewnerVerdict loewner_leq(const ComplexMatrix& a, const ComplexMatrix& b, double tol = 0.0);

}  // namespace csl
