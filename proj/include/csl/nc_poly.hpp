#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "csl/complex_matrix.hpp"
#include "csl/rng.hpp"

namespace csl {

/// lead * (z - a_1)(z - a_2) ... (z - a_d), products taken left to right in
/// the written factor order. No reordering is ever applied.
struct FactoredPoly {
    std::vector<ComplexMatrix> factors;
    Complex lead = 1.0;

    std::size_t degree() const noexcept { return factors.size(); }
    std::size_t dim() const { return factors.empty() ? 0 : factors.front().dim(); }
};

/// The derivative of a factored polynomial: the sum of the d ordered
/// products that each omit one factor,
///
///   P'(z) = sum_j (z - a_1) ... [factor j omitted] ... (z - a_d).
///
/// Term j stores the d-1 surviving factors in order; lead carries the
/// leading scalar of P.
struct DerivativeForm {
    std::vector<std::vector<ComplexMatrix>> terms;
    Complex lead = 1.0;

    std::size_t degree_of_p() const noexcept { return terms.size(); }
};

/// Test points for functional equality on M_n. Equality of two degree-k
/// expressions is decided by evaluating both at the probes, never by free
/// coefficient matching (M_n satisfies polynomial identities, so the free
/// comparison is sufficient but not necessary). The seed records how the
/// probes were drawn.
struct ProbeSet {
    std::vector<ComplexMatrix> probes;
    std::uint64_t seed = 0;

    std::size_t dim() const { return probes.empty() ? 0 : probes.front().dim(); }
    std::size_t count() const noexcept { return probes.size(); }
};

/// Ginibre probes; count defaults to max(2d, 8) at the call sites.
ProbeSet make_probe_set(std::size_t n, std::size_t count, std::uint64_t seed);

/// Probe count used for a degree-d factorization.
inline std::size_t default_probe_count(std::size_t d) { return d < 4 ? 8 : 2 * d; }

enum class FactorMethod {
    kClosedFormD2,       // b = (a_1 + a_2)/2, exact for d = 2
    kCandidate,          // index-matching candidate accepted as-is
    kCandidateRefined,   // candidate polished by damped Gauss-Newton
    kScalarRoots,        // n = 1, critical points of the scalar polynomial
    kPerDiagonalScalar,  // commuting normal tuple, slot-wise scalar roots
};

std::string factor_method_name(FactorMethod m);

/// Outcome of a factorization attempt P'(z) = d (z - b_1) ... (z - b_{d-1}).
struct FactorizationResult {
    std::vector<ComplexMatrix> b;
    double residual = 0.0;  // normalized max over probes
    FactorMethod method = FactorMethod::kCandidate;
    bool accepted = false;
    int iterations = 0;
    /// For the commuting path the certified probes live in the commuting
    /// subalgebra U diag(.) U* rather than in all of M_n; see factorize().
    bool subalgebra_probes = false;
};

struct RefineOptions {
    int max_iter = 500;
    double tol = 1e-8;
    int restarts = 4;
    std::uint64_t jitter_seed = 0;
};

struct FactorizeOptions {
    double tol = 1e-8;            // acceptance residual
    double commutator_tol = 1e-10;  // relative commutativity/normality gate
    RefineOptions refine;
};

ComplexMatrix eval_factored(const FactoredPoly& p, const ComplexMatrix& z);

DerivativeForm derivative_form(const FactoredPoly& p);

ComplexMatrix eval_derivative(const DerivativeForm& d, const ComplexMatrix& z);

/// The candidate b_j = ((d-j) a_j + j a_{j+1})/d, j = 1..d-1, forced by
/// matching the words z^{j-1} (letter) z^{d-1-j} on both sides of the target
/// identity. Matching the remaining words is not automatic, so the candidate
/// must be residual-checked; validate_candidate_formula in the test suite
/// confirms the extraction symbolically for d = 2, 3, 4.
std::vector<ComplexMatrix> candidate_critical_factors(const std::vector<ComplexMatrix>& a);

/// max over probes of ||P'(z_t) - d (z_t-b_1)...(z_t-b_{d-1})||_F
/// normalized by max(1, ||z_t||_F)^{d-1}.
double functional_residual(const DerivativeForm& d, const std::vector<ComplexMatrix>& b,
                           const ProbeSet& probes);

/// Damped Gauss-Newton over the 2(d-1)n^2 real parameters of b, minimizing
/// the summed squared probe residuals with a numerically differenced
/// Jacobian. Best result over all restarts (jittered inits, restart 0
/// unjittered); ties break to the lowest restart index. Never throws on
/// failure: the best-found result is returned with accepted=false.
FactorizationResult refine_factors(const std::vector<ComplexMatrix>& a,
                                   const std::vector<ComplexMatrix>& b_init, const ProbeSet& probes,
                                   const RefineOptions& opts = {});

/// Factorization search, automatic strategy:
///   n = 1            -> scalar critical points            (scalar_roots)
///   d = 2            -> (a_1 + a_2)/2                     (closed_form_d2)
///   commuting normal -> slot-wise scalar critical points  (per_diagonal_scalar)
///   otherwise        -> candidate, Gauss-Newton refinement if it misses.
///
/// The commuting path certifies its factorization on probes drawn from the
/// commuting subalgebra U diag(.) U* (regenerated from probes.seed): a
/// commuting tuple with d >= 3 generically admits no factorization valid on
/// all of M_n, while slot-wise critical points satisfy the identity on the
/// subalgebra exactly. For d - 1 < 2n a factorization valid on all of M_n
/// is unique when it exists (standard-identity degree bound), so the
/// candidate route reports the only possibility.
/// warm_start, when given, seeds the Gauss-Newton stage in place of the
/// candidate (the candidate is still tried first as-is).
FactorizationResult factorize(const std::vector<ComplexMatrix>& a, const ProbeSet& probes,
                              const FactorizeOptions& opts = {},
                              const std::vector<ComplexMatrix>* warm_start = nullptr);

}  // namespace csl
