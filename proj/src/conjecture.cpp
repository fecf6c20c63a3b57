#include "csl/conjecture.hpp"

#include <algorithm>
#include <cmath>

#include "csl/nc_poly.hpp"
#include "csl/spectra.hpp"

namespace csl {

std::string conjecture_name(Conjecture c) {
    switch (c) {
        case Conjecture::kSchoenberg: return "schoenberg";
        case Conjecture::kDebruinSharma: return "debruin_sharma";
        case Conjecture::kKushelTyaglov: return "kushel_tyaglov";
    }
    throw Error("unknown conjecture");
}

Conjecture conjecture_from_name(const std::string& name) {
    if (name == "schoenberg") return Conjecture::kSchoenberg;
    if (name == "debruin_sharma" || name == "dbs") return Conjecture::kDebruinSharma;
    if (name == "kushel_tyaglov" || name == "kt") return Conjecture::kKushelTyaglov;
    throw Error("unknown conjecture: " + name);
}

std::string side_name(Side s) { return s == Side::kRight ? "right" : "left"; }

namespace {

void check_arity(const std::vector<ComplexMatrix>& a, const std::vector<ComplexMatrix>& b,
                 const char* where) {
    if (a.size() < 2) throw ArityMismatch(std::string(where) + ": need d >= 2 factors");
    if (b.size() + 1 != a.size())
        throw ArityMismatch(std::string(where) + ": need exactly d-1 critical factors");
    for (const auto& m : a) require_same_dim(m, a.front(), where);
    for (const auto& m : b) require_same_dim(m, a.front(), where);
}

// x x* for the right side, x* x for the left.
ComplexMatrix gram(const ComplexMatrix& x, Side side) {
    const ComplexMatrix xs = adjoint(x);
    return side == Side::kRight ? x * xs : xs * x;
}

double tuple_scale(const std::vector<ComplexMatrix>& a) {
    double s = 0.0;
    for (const auto& m : a) s = std::max(s, frobenius_norm(m));
    return s;
}

}  // namespace

GapSides schoenberg_sides(const std::vector<ComplexMatrix>& a, const std::vector<ComplexMatrix>& b,
                          Side side) {
    check_arity(a, b, "schoenberg");
    const std::size_t n = a.front().dim();
    const double d = double(a.size());

    GapSides sides{ComplexMatrix(n), ComplexMatrix(n), {}};
    for (const auto& bk : b) sides.lhs += gram(bk, side);

    ComplexMatrix asum(n);
    for (const auto& aj : a) asum += aj;
    sides.rhs = (1.0 / (d * d)) * gram(asum, side);
    ComplexMatrix grams(n);
    for (const auto& aj : a) grams += gram(aj, side);
    sides.rhs += ((d - 2.0) / d) * grams;
    return sides;
}

GapSides debruin_sharma_sides(const std::vector<ComplexMatrix>& a,
                              const std::vector<ComplexMatrix>& b, Side side) {
    check_arity(a, b, "debruin_sharma");
    const std::size_t n = a.front().dim();
    const double d = double(a.size());

    ComplexMatrix asum(n);
    for (const auto& aj : a) asum += aj;
    const double gate = 1e-10 * (1.0 + tuple_scale(a));
    if (frobenius_norm(asum) > gate)
        throw CentroidNotZero("debruin_sharma: sum of the a_j is not zero", frobenius_norm(asum));

    GapSides sides{ComplexMatrix(n), ComplexMatrix(n), {}};
    for (const auto& bk : b) {
        const ComplexMatrix g = gram(bk, side);
        sides.lhs += g * g;
    }
    ComplexMatrix grams(n), grams_sq(n);
    for (const auto& aj : a) {
        const ComplexMatrix g = gram(aj, side);
        grams += g;
        grams_sq += g * g;
    }
    sides.rhs = (2.0 / (d * d)) * (grams * grams) + ((d - 4.0) / d) * grams_sq;
    return sides;
}

GapSides kushel_tyaglov_sides(const std::vector<ComplexMatrix>& a,
                              const std::vector<ComplexMatrix>& b, Side side) {
    check_arity(a, b, "kushel_tyaglov");
    const std::size_t n = a.front().dim();
    const double d = double(a.size());

    GapSides sides{ComplexMatrix(n), ComplexMatrix(n), {}};
    for (const auto& bk : b) {
        const ComplexMatrix g = gram(bk, side);
        sides.lhs += g * g;
    }

    ComplexMatrix asum(n), asq(n), grams(n), grams_sq(n);
    for (const auto& aj : a) {
        asum += aj;
        asq += aj * aj;
        const ComplexMatrix g = gram(aj, side);
        grams += g;
        grams_sq += g * g;
    }
    const ComplexMatrix mean = (1.0 / d) * asum;
    const ComplexMatrix s_mat = asq - (1.0 / (d * d)) * (asum * asum);

    sides.terms.reserve(5);
    sides.terms.push_back(((d - 6.0) / d) * grams_sq);
    sides.terms.push_back((1.0 / (d * d)) * (grams * grams));
    sides.terms.push_back((1.0 / (d * d)) * gram(s_mat, side));

    ComplexMatrix mixed(n);
    ComplexMatrix sum_conj(n);
    for (const auto& aj : a) {
        const ComplexMatrix shifted = aj + mean;
        if (side == Side::kRight) {
            mixed += aj * shifted * adjoint(shifted) * adjoint(aj);
            sum_conj += aj * asum * adjoint(asum) * adjoint(aj);
        } else {
            mixed += adjoint(aj) * adjoint(shifted) * shifted * aj;
            sum_conj += adjoint(aj) * adjoint(asum) * asum * aj;
        }
    }
    sides.terms.push_back((2.0 / d) * mixed);
    sides.terms.push_back((-4.0 / (d * d * d)) * sum_conj);

    for (const auto& t : sides.terms) sides.rhs += t;
    return sides;
}

InequalityReport report_from_sides(Conjecture c, Side side, GapSides sides, double tol) {
    const double scale = std::max(1.0, frobenius_norm(sides.lhs) + frobenius_norm(sides.rhs));
    const ComplexMatrix gap = sides.rhs - sides.lhs;
    const double asym = 0.5 * hermiticity_residual(gap);
    if (asym > 1e-8 * scale)
        throw NotHermitian("inequality gap is not Hermitian: implementation bug, not rounding", asym);

    const HermitianSpectrum spec = hermitian_eigenvalues(hermitian_part(gap), 1.0);

    InequalityReport rep;
    rep.conjecture = c;
    rep.side = side;
    rep.lhs = std::move(sides.lhs);
    rep.rhs = std::move(sides.rhs);
    rep.terms = std::move(sides.terms);
    rep.min_eig = spec.eigenvalues.front();
    rep.asym_residual = asym;
    rep.tol = tol > 0.0 ? tol : 1e-9 * scale;
    rep.holds = rep.min_eig >= -rep.tol;
    return rep;
}

InequalityReport schoenberg_right(const std::vector<ComplexMatrix>& a,
                                  const std::vector<ComplexMatrix>& b, double tol) {
    return report_from_sides(Conjecture::kSchoenberg, Side::kRight,
                             schoenberg_sides(a, b, Side::kRight), tol);
}

InequalityReport schoenberg_left(const std::vector<ComplexMatrix>& a,
                                 const std::vector<ComplexMatrix>& b, double tol) {
    return report_from_sides(Conjecture::kSchoenberg, Side::kLeft,
                             schoenberg_sides(a, b, Side::kLeft), tol);
}

InequalityReport debruin_sharma_right(const std::vector<ComplexMatrix>& a,
                                      const std::vector<ComplexMatrix>& b, double tol) {
    return report_from_sides(Conjecture::kDebruinSharma, Side::kRight,
                             debruin_sharma_sides(a, b, Side::kRight), tol);
}

InequalityReport debruin_sharma_left(const std::vector<ComplexMatrix>& a,
                                     const std::vector<ComplexMatrix>& b, double tol) {
    return report_from_sides(Conjecture::kDebruinSharma, Side::kLeft,
                             debruin_sharma_sides(a, b, Side::kLeft), tol);
}

InequalityReport kushel_tyaglov_right(const std::vector<ComplexMatrix>& a,
                                      const std::vector<ComplexMatrix>& b, double tol) {
    return report_from_sides(Conjecture::kKushelTyaglov, Side::kRight,
                             kushel_tyaglov_sides(a, b, Side::kRight), tol);
}

InequalityReport kushel_tyaglov_left(const std::vector<ComplexMatrix>& a,
                                     const std::vector<ComplexMatrix>& b, double tol) {
    return report_from_sides(Conjecture::kKushelTyaglov, Side::kLeft,
                             kushel_tyaglov_sides(a, b, Side::kLeft), tol);
}

InequalityReport evaluate(Conjecture c, Side side, const std::vector<ComplexMatrix>& a,
                          const std::vector<ComplexMatrix>& b, double tol) {
    switch (c) {
        case Conjecture::kSchoenberg:
            return report_from_sides(c, side, schoenberg_sides(a, b, side), tol);
        case Conjecture::kDebruinSharma:
            return report_from_sides(c, side, debruin_sharma_sides(a, b, side), tol);
        case Conjecture::kKushelTyaglov:
            return report_from_sides(c, side, kushel_tyaglov_sides(a, b, side), tol);
    }
    throw Error("unknown conjecture");
}

namespace {

std::vector<ComplexMatrix> as_tuple(const RootList& roots) {
    std::vector<ComplexMatrix> t;
    t.reserve(roots.size());
    for (Complex r : roots) t.push_back(ComplexMatrix(1, {r}));
    return t;
}

// Matrix-path slacks for a 1x1 instance, both sides.
std::pair<double, double> matrix_slacks(Conjecture c, const std::vector<ComplexMatrix>& a,
                                        const std::vector<ComplexMatrix>& b) {
    const InequalityReport right = evaluate(c, Side::kRight, a, b);
    const InequalityReport left = evaluate(c, Side::kLeft, a, b);
    return {right.min_eig, left.min_eig};
}

double against(double scalar_slack, std::pair<double, double> matrix) {
    return std::max(std::abs(matrix.first - scalar_slack), std::abs(matrix.second - scalar_slack));
}

}  // namespace

CrosscheckRecord scalar_crosscheck(const RootList& a) {
    if (a.size() < 2) throw ArityMismatch("scalar_crosscheck: need d >= 2");
    const std::size_t d = a.size();

    const auto factor = [&](const RootList& roots) {
        const ProbeSet probes = make_probe_set(1, default_probe_count(d), 0xC405C);
        const FactorizationResult fr = factorize(as_tuple(roots), probes);
        if (!fr.accepted)
            throw NoConvergence("scalar_crosscheck: 1x1 factorization not accepted", 0);
        return fr.b;
    };

    CrosscheckRecord rec;
    {
        const auto tuple = as_tuple(a);
        const auto b = factor(a);
        rec.schoenberg = against(schoenberg_report(a).slack,
                                 matrix_slacks(Conjecture::kSchoenberg, tuple, b));
        rec.kushel_tyaglov = against(kushel_tyaglov_report(a).slack,
                                     matrix_slacks(Conjecture::kKushelTyaglov, tuple, b));
    }
    {
        // The fourth-power bound needs a centered list; center on both paths.
        Complex mean = 0.0;
        for (Complex x : a) mean += x;
        mean /= double(d);
        RootList centered = a;
        for (Complex& x : centered) x -= mean;
        const auto tuple = as_tuple(centered);
        const auto b = factor(centered);
        rec.debruin_sharma = against(debruin_sharma_report(centered).slack,
                                     matrix_slacks(Conjecture::kDebruinSharma, tuple, b));
    }
    rec.max_discrepancy = std::max({rec.schoenberg, rec.debruin_sharma, rec.kushel_tyaglov});
    return rec;
}

}  // namespace csl
