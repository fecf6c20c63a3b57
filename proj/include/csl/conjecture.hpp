#pragma once

#include <optional>
#include <string>
#include <vector>

#include "csl/complex_matrix.hpp"
#include "csl/scalar_poly.hpp"

namespace csl {

enum class Conjecture { kSchoenberg, kDebruinSharma, kKushelTyaglov };
enum class Side { kRight, kLeft };  // right: products like b b*; left: b* b

std::string conjecture_name(Conjecture c);
Conjecture conjecture_from_name(const std::string& name);
std::string side_name(Side s);

/// Spectral slack report for one sided operator inequality LHS <= RHS.
///
/// The gap RHS - LHS is Hermitian up to floating error; it is symmetrized
/// before the eigensolve and the asymmetry is recorded. An asymmetry beyond
/// 1e-8 * scale distinguishes an implementation bug from rounding noise and
/// is rejected. holds <=> min_eig >= -tol, tol defaulting to
/// 1e-9 * max(1, ||LHS||_F + ||RHS||_F).
struct InequalityReport {
    Conjecture conjecture = Conjecture::kSchoenberg;
    Side side = Side::kRight;
    ComplexMatrix lhs;
    ComplexMatrix rhs;
    double min_eig = 0.0;
    bool holds = false;
    double asym_residual = 0.0;
    double tol = 0.0;
    std::vector<ComplexMatrix> terms;  // the five RHS terms, Kushel-Tyaglov only
};

/// Both sides of one inequality, before the eigensolve.
struct GapSides {
    ComplexMatrix lhs;
    ComplexMatrix rhs;
    std::vector<ComplexMatrix> terms;
};

/// sum b_k b_k*  vs  (1/d^2)(sum a_j)(sum a_j)* + ((d-2)/d) sum a_j a_j*
/// (left: every product star-reversed).
GapSides schoenberg_sides(const std::vector<ComplexMatrix>& a, const std::vector<ComplexMatrix>& b,
                          Side side);

/// sum (b_k b_k*)^2  vs  (2/d^2)(sum a_j a_j*)^2 + ((d-4)/d) sum (a_j a_j*)^2,
/// under sum a_j = 0 (gate 1e-10 * (1 + max ||a_j||_F), throws CentroidNotZero).
GapSides debruin_sharma_sides(const std::vector<ComplexMatrix>& a,
                              const std::vector<ComplexMatrix>& b, Side side);

/// sum (b_k b_k*)^2 vs the five-term bound
///   ((d-6)/d) sum (a_j a_j*)^2 + (1/d^2)(sum a_j a_j*)^2 + (1/d^2) S S*
///   + (2/d) sum a_j [a_j + m][a_j + m]* a_j* - (4/d^3) sum a_j (d m)(d m)* a_j*
/// with S = sum a_j^2 - (1/d^2)(sum a_k)^2 and m = (1/d) sum a_k. Every sum
/// runs to d. The left version mirrors the stars as displayed (S* S, and
/// a_j* [..]* [..] a_j).
GapSides kushel_tyaglov_sides(const std::vector<ComplexMatrix>& a,
                              const std::vector<ComplexMatrix>& b, Side side);

/// Symmetrize the gap, eigensolve, and fill in the verdict. tol <= 0 selects
/// the default relative tolerance.
InequalityReport report_from_sides(Conjecture c, Side side, GapSides sides, double tol = 0.0);

InequalityReport schoenberg_right(const std::vector<ComplexMatrix>& a,
                                  const std::vector<ComplexMatrix>& b, double tol = 0.0);
InequalityReport schoenberg_left(const std::vector<ComplexMatrix>& a,
                                 const std::vector<ComplexMatrix>& b, double tol = 0.0);
InequalityReport debruin_sharma_right(const std::vector<ComplexMatrix>& a,
                                      const std::vector<ComplexMatrix>& b, double tol = 0.0);
InequalityReport debruin_sharma_left(const std::vector<ComplexMatrix>& a,
                                     const std::vector<ComplexMatrix>& b, double tol = 0.0);
InequalityReport kushel_tyaglov_right(const std::vector<ComplexMatrix>& a,
                                      const std::vector<ComplexMatrix>& b, double tol = 0.0);
InequalityReport kushel_tyaglov_left(const std::vector<ComplexMatrix>& a,
                                     const std::vector<ComplexMatrix>& b, double tol = 0.0);

InequalityReport evaluate(Conjecture c, Side side, const std::vector<ComplexMatrix>& a,
                          const std::vector<ComplexMatrix>& b, double tol = 0.0);

/// Consistency of the matrix path at n = 1 against the scalar verifiers.
struct CrosscheckRecord {
    double schoenberg = 0.0;  // max |matrix min_eig - scalar slack| over both sides
    double debruin_sharma = 0.0;  // computed on the centered list
    double kushel_tyaglov = 0.0;
    double max_discrepancy = 0.0;
};

CrosscheckRecord scalar_crosscheck(const RootList& a);

}  // namespace csl
