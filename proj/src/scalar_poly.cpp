#include "csl/scalar_poly.hpp"

#include <algorithm>
#include <cmath>

#include "csl/rng.hpp"

namespace csl {

using Cplx = std::complex<double>;

Cplx MonicPolynomial::eval(Cplx z) const {
    Cplx acc = 1.0;
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * z + coeffs[k];
    return acc;
}

Cplx Polynomial::eval(Cplx z) const {
    Cplx acc = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * z + coeffs[k];
    return acc;
}

Cplx Polynomial::eval_derivative(Cplx z) const {
    Cplx acc = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 1;) acc = acc * z + double(k) * coeffs[k];
    return acc;
}

MonicPolynomial coeffs_from_roots(const RootList& roots) {
    if (roots.empty()) throw ArityMismatch("coeffs_from_roots: need at least one root");
    for (Cplx r : roots)
        if (!std::isfinite(r.real()) || !std::isfinite(r.imag()))
            throw Error("coeffs_from_roots: non-finite root");
    // Multiply (z - r) factors into c_0..c_{d-1}, monic leading term implicit.
    std::vector<Cplx> c{1.0};
    for (Cplx r : roots) {
        c.push_back(1.0);
        for (std::size_t k = c.size() - 1; k-- > 1;) c[k] = c[k - 1] - r * c[k];
        c[0] *= -r;
    }
    c.pop_back();
    return MonicPolynomial{std::move(c)};
}

Polynomial to_polynomial(const MonicPolynomial& p) {
    Polynomial q;
    q.coeffs = p.coeffs;
    q.coeffs.push_back(1.0);
    return q;
}

Polynomial differentiate(const MonicPolynomial& p) {
    const std::size_t d = p.degree();
    if (d < 1) throw ArityMismatch("differentiate: degree must be >= 1");
    Polynomial q;
    q.coeffs.resize(d);
    for (std::size_t k = 1; k < d; ++k) q.coeffs[k - 1] = double(k) * p.coeffs[k];
    q.coeffs[d - 1] = double(d);
    return q;
}

RootList find_roots(const Polynomial& p, double tol, int max_iter, std::uint64_t init_seed) {
    std::vector<Cplx> c = p.coeffs;
    while (c.size() > 1 && std::abs(c.back()) == 0.0) c.pop_back();
    if (c.size() < 2) throw ArityMismatch("find_roots: degree must be >= 1");
    const std::size_t m = c.size() - 1;

    // Monic normalization.
    const Cplx lead = c.back();
    for (Cplx& x : c) x /= lead;

    Polynomial mp;
    mp.coeffs = c;

    if (m == 1) return {-c[0]};

    double maxc = 0.0;
    for (std::size_t k = 0; k < m; ++k) maxc = std::max(maxc, std::abs(c[k]));
    const double radius = 1.0 + maxc;

    // Golden-angle spacing with seeded jitter keeps the iterates from
    // symmetric deadlocks.
    constexpr double kGoldenAngle = 2.3999632297286533;
    RngStream jitter(0x5ca1ab1e ^ init_seed);
    std::vector<Cplx> z(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double theta = 0.3 + double(k) * kGoldenAngle + 0.05 * jitter.uniform01();
        z[k] = radius * Cplx(std::cos(theta), std::sin(theta));
    }

    const auto scale = [&]() {
        double zmax = 1.0;
        for (Cplx zk : z) zmax = std::max(zmax, std::abs(zk));
        return std::pow(zmax, double(m));
    };

    bool converged = false;
    for (int iter = 0; iter < max_iter && !converged; ++iter) {
        double worst = 0.0;
        std::vector<Cplx> step(m);
        for (std::size_t k = 0; k < m; ++k) {
            const Cplx pv = mp.eval(z[k]);
            worst = std::max(worst, std::abs(pv));
            Cplx dv = mp.eval_derivative(z[k]);
            if (dv == Cplx(0.0)) dv = Cplx(1e-300, 0.0);
            const Cplx w = pv / dv;
            Cplx sum = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                if (j == k) continue;
                Cplx diff = z[k] - z[j];
                if (diff == Cplx(0.0)) diff = Cplx(1e-300, 0.0);
                sum += 1.0 / diff;
            }
            const Cplx denom = 1.0 - w * sum;
            step[k] = std::abs(denom) < 1e-290 ? w : w / denom;
        }
        if (worst <= tol * scale()) {
            converged = true;
            break;
        }
        for (std::size_t k = 0; k < m; ++k) z[k] -= step[k];
    }

    if (!converged) {
        double worst = 0.0;
        for (Cplx zk : z) worst = std::max(worst, std::abs(mp.eval(zk)));
        if (worst > tol * scale()) throw NoConvergence("find_roots: Aberth iteration did not converge", max_iter);
    }

    // Newton polish; skipped per root when it stops improving.
    for (std::size_t k = 0; k < m; ++k) {
        for (int it = 0; it < 3; ++it) {
            const Cplx pv = mp.eval(z[k]);
            const Cplx dv = mp.eval_derivative(z[k]);
            if (std::abs(dv) < 1e-290) break;
            const Cplx zn = z[k] - pv / dv;
            if (std::abs(mp.eval(zn)) >= std::abs(pv)) break;
            z[k] = zn;
        }
    }

    std::sort(z.begin(), z.end(), [](Cplx a, Cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return z;
}

RootList critical_points(const RootList& a, double root_tol, int max_iter) {
    const Polynomial dp = differentiate(coeffs_from_roots(a));
    for (std::uint64_t seed = 0;; ++seed) {
        try {
            return find_roots(dp, root_tol, max_iter, seed);
        } catch (const NoConvergence&) {
            if (seed >= 2) throw;
        }
    }
}

namespace {

double centroid_gate(const RootList& a) {
    double amax = 0.0;
    for (Cplx x : a) amax = std::max(amax, std::abs(x));
    return 1e-10 * (1.0 + amax);
}

double residual_scale(const RootList& a) {
    double amax = 1.0;
    for (Cplx x : a) amax = std::max(amax, std::abs(x));
    return std::pow(amax, double(a.size()));
}

struct CriticalData {
    RootList b;
    double residual;
};

CriticalData solve_critical(const RootList& a) {
    const Polynomial dp = differentiate(coeffs_from_roots(a));
    const RootList b = critical_points(a);
    double res = 0.0;
    for (Cplx bk : b) res = std::max(res, std::abs(dp.eval(bk)));
    return {b, res / residual_scale(a)};
}

void finish(ScalarInequalityReport& rep, double tol) {
    rep.slack = rep.rhs - rep.lhs;
    rep.tol = tol;
    rep.holds = rep.slack >= -tol;
}

}  // namespace

ScalarInequalityReport schoenberg_report(const RootList& a, double tol) {
    const std::size_t d = a.size();
    if (d < 2) throw ArityMismatch("schoenberg_report: need d >= 2");
    CriticalData cd = solve_critical(a);

    double lhs = 0.0;
    for (Cplx bk : cd.b) lhs += std::norm(bk);
    Cplx asum = 0.0;
    double a2 = 0.0;
    for (Cplx aj : a) {
        asum += aj;
        a2 += std::norm(aj);
    }
    const double dd = double(d);
    ScalarInequalityReport rep;
    rep.lhs = lhs;
    rep.rhs = std::norm(asum) / (dd * dd) + (dd - 2.0) / dd * a2;
    rep.critical_points = std::move(cd.b);
    rep.root_residual = cd.residual;
    finish(rep, tol);
    return rep;
}

ScalarInequalityReport debruin_sharma_report(const RootList& a, double tol) {
    const std::size_t d = a.size();
    if (d < 2) throw ArityMismatch("debruin_sharma_report: need d >= 2");
    Cplx asum = 0.0;
    for (Cplx aj : a) asum += aj;
    if (std::abs(asum) > centroid_gate(a))
        throw CentroidNotZero("debruin_sharma_report: sum of roots is not zero", std::abs(asum));

    CriticalData cd = solve_critical(a);
    double lhs = 0.0;
    for (Cplx bk : cd.b) lhs += std::norm(bk) * std::norm(bk);
    double a2 = 0.0, a4 = 0.0;
    for (Cplx aj : a) {
        const double m2 = std::norm(aj);
        a2 += m2;
        a4 += m2 * m2;
    }
    const double dd = double(d);
    ScalarInequalityReport rep;
    rep.lhs = lhs;
    rep.rhs = 2.0 / (dd * dd) * a2 * a2 + (dd - 4.0) / dd * a4;
    rep.critical_points = std::move(cd.b);
    rep.root_residual = cd.residual;
    finish(rep, tol);
    return rep;
}

KushelTyaglovScalarReport kushel_tyaglov_report(const RootList& a, double tol) {
    const std::size_t d = a.size();
    if (d < 2) throw ArityMismatch("kushel_tyaglov_report: need d >= 2");
    CriticalData cd = solve_critical(a);

    double lhs = 0.0;
    for (Cplx bk : cd.b) lhs += std::norm(bk) * std::norm(bk);

    Cplx asum = 0.0, asq = 0.0;
    double a2 = 0.0, a4 = 0.0;
    for (Cplx aj : a) {
        asum += aj;
        asq += aj * aj;
        const double m2 = std::norm(aj);
        a2 += m2;
        a4 += m2 * m2;
    }
    const double dd = double(d);

    KushelTyaglovScalarReport rep;
    rep.terms[0] = (dd - 6.0) / dd * a4;
    rep.terms[1] = a2 * a2 / (dd * dd);
    rep.terms[2] = std::norm(asq - asum * asum / (dd * dd)) / (dd * dd);
    double mixed = 0.0;
    for (Cplx aj : a) mixed += std::norm(aj) * std::norm(aj + asum / dd);
    rep.terms[3] = 2.0 / dd * mixed;
    rep.terms[4] = -4.0 / (dd * dd * dd) * a2 * std::norm(asum);

    rep.lhs = lhs;
    rep.rhs = rep.terms[0] + rep.terms[1] + rep.terms[2] + rep.terms[3] + rep.terms[4];
    rep.critical_points = std::move(cd.b);
    rep.root_residual = cd.residual;
    finish(rep, tol);
    return rep;
}

}  // namespace csl
