#include "csl/nc_poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "csl/scalar_poly.hpp"
#include "csl/spectra.hpp"

namespace csl {

std::string factor_method_name(FactorMethod m) {
    switch (m) {
        case FactorMethod::kClosedFormD2: return "closed_form_d2";
        case FactorMethod::kCandidate: return "candidate";
        case FactorMethod::kCandidateRefined: return "candidate_refined";
        case FactorMethod::kScalarRoots: return "scalar_roots";
        case FactorMethod::kPerDiagonalScalar: return "per_diagonal_scalar";
    }
    throw Error("unknown factor method");
}

ProbeSet make_probe_set(std::size_t n, std::size_t count, std::uint64_t seed) {
    if (count < 2) throw ArityMismatch("make_probe_set: need at least two probes");
    ProbeSet set;
    set.seed = seed;
    RngStream rng{seed};
    set.probes.reserve(count);
    for (std::size_t t = 0; t < count; ++t) {
        ComplexMatrix z(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) z(i, j) = rng.complex_normal();
        set.probes.push_back(std::move(z));
    }
    return set;
}

ComplexMatrix eval_factored(const FactoredPoly& p, const ComplexMatrix& z) {
    if (p.factors.empty()) {
        ComplexMatrix r = ComplexMatrix::identity(z.dim());
        r *= p.lead;
        return r;
    }
    require_same_dim(p.factors.front(), z, "eval_factored");
    ComplexMatrix acc = z - p.factors.front();
    for (std::size_t k = 1; k < p.factors.size(); ++k) {
        require_same_dim(p.factors[k], z, "eval_factored");
        acc = acc * (z - p.factors[k]);
    }
    acc *= p.lead;
    return acc;
}

DerivativeForm derivative_form(const FactoredPoly& p) {
    const std::size_t d = p.degree();
    if (d < 1) throw ArityMismatch("derivative_form: need degree >= 1");
    DerivativeForm form;
    form.lead = p.lead;
    form.terms.reserve(d);
    for (std::size_t j = 0; j < d; ++j) {
        std::vector<ComplexMatrix> term;
        term.reserve(d - 1);
        for (std::size_t k = 0; k < d; ++k)
            if (k != j) term.push_back(p.factors[k]);
        form.terms.push_back(std::move(term));
    }
    return form;
}

ComplexMatrix eval_derivative(const DerivativeForm& d, const ComplexMatrix& z) {
    if (d.terms.empty()) throw ArityMismatch("eval_derivative: empty form");
    ComplexMatrix sum(z.dim());
    for (const auto& term : d.terms) {
        ComplexMatrix prod = ComplexMatrix::identity(z.dim());
        for (const ComplexMatrix& f : term) {
            require_same_dim(f, z, "eval_derivative");
            prod = prod * (z - f);
        }
        sum += prod;
    }
    sum *= d.lead;
    return sum;
}

std::vector<ComplexMatrix> candidate_critical_factors(const std::vector<ComplexMatrix>& a) {
    const std::size_t d = a.size();
    if (d < 2) throw ArityMismatch("candidate_critical_factors: need d >= 2");
    std::vector<ComplexMatrix> b;
    b.reserve(d - 1);
    for (std::size_t k = 0; k + 1 < d; ++k) {
        require_same_dim(a[k], a[k + 1], "candidate_critical_factors");
        const double w1 = double(d - 1 - k) / double(d);
        const double w2 = double(k + 1) / double(d);
        b.push_back(w1 * a[k] + w2 * a[k + 1]);
    }
    return b;
}

namespace {

ComplexMatrix target_product(const std::vector<ComplexMatrix>& b, const ComplexMatrix& z) {
    ComplexMatrix acc = z - b.front();
    for (std::size_t k = 1; k < b.size(); ++k) acc = acc * (z - b[k]);
    return acc;
}

double probe_weight(const ComplexMatrix& z, std::size_t d) {
    return std::pow(std::max(1.0, frobenius_norm(z)), double(d) - 1.0);
}

double offdiag_mass(const ComplexMatrix& m) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j)
            if (i != j) s += std::norm(m(i, j));
    return std::sqrt(s);
}

}  // namespace

double functional_residual(const DerivativeForm& d, const std::vector<ComplexMatrix>& b,
                           const ProbeSet& probes) {
    const std::size_t deg = d.degree_of_p();
    if (b.size() + 1 != deg) throw ArityMismatch("functional_residual: need exactly d-1 factors");
    if (probes.probes.empty()) throw ArityMismatch("functional_residual: empty probe set");

    double worst = 0.0;
    for (const ComplexMatrix& z : probes.probes) {
        const ComplexMatrix lhs = eval_derivative(d, z);
        ComplexMatrix rhs = target_product(b, z);
        rhs *= d.lead * double(deg);
        worst = std::max(worst, frobenius_norm(lhs - rhs) / probe_weight(z, deg));
    }
    return worst;
}

namespace {

// Gauss-Newton state: b packed as re/im pairs, factor by factor, row-major.
std::vector<double> pack(const std::vector<ComplexMatrix>& b) {
    std::vector<double> x;
    x.reserve(2 * b.size() * b.front().dim() * b.front().dim());
    for (const ComplexMatrix& m : b)
        for (const Complex& z : m.data()) {
            x.push_back(z.real());
            x.push_back(z.imag());
        }
    return x;
}

std::vector<ComplexMatrix> unpack(const std::vector<double>& x, std::size_t count, std::size_t n) {
    std::vector<ComplexMatrix> b;
    b.reserve(count);
    std::size_t pos = 0;
    for (std::size_t k = 0; k < count; ++k) {
        std::vector<Complex> entries(n * n);
        for (std::size_t e = 0; e < n * n; ++e) {
            entries[e] = Complex(x[pos], x[pos + 1]);
            pos += 2;
        }
        b.emplace_back(n, std::move(entries));
    }
    return b;
}

// In-place Cholesky solve of (A)x = rhs for SPD A (row-major p x p).
bool solve_spd(std::vector<double>& a, std::vector<double>& rhs, std::size_t p) {
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a[i * p + j];
            for (std::size_t k = 0; k < j; ++k) s -= a[i * p + k] * a[j * p + k];
            if (i == j) {
                if (s <= 0.0) return false;
                a[i * p + i] = std::sqrt(s);
            } else {
                a[i * p + j] = s / a[j * p + j];
            }
        }
    }
    for (std::size_t i = 0; i < p; ++i) {
        double s = rhs[i];
        for (std::size_t k = 0; k < i; ++k) s -= a[i * p + k] * rhs[k];
        rhs[i] = s / a[i * p + i];
    }
    for (std::size_t i = p; i-- > 0;) {
        double s = rhs[i];
        for (std::size_t k = i + 1; k < p; ++k) s -= a[k * p + i] * rhs[k];
        rhs[i] = s / a[i * p + i];
    }
    return true;
}

struct GnProblem {
    const std::vector<ComplexMatrix>* probes;
    std::vector<ComplexMatrix> targets;  // eval_derivative at each probe, fixed
    std::vector<double> weights;
    std::size_t d = 0;
    std::size_t n = 0;
    Complex lead = 1.0;

    // Residual vector: per probe, per entry, re then im, weighted.
    std::vector<double> residuals(const std::vector<ComplexMatrix>& b) const {
        std::vector<double> r;
        r.reserve(probes->size() * 2 * n * n);
        for (std::size_t t = 0; t < probes->size(); ++t) {
            ComplexMatrix rhs = target_product(b, (*probes)[t]);
            rhs *= lead * double(d);
            const double inv = 1.0 / weights[t];
            const ComplexMatrix diff = targets[t] - rhs;
            for (const Complex& z : diff.data()) {
                r.push_back(z.real() * inv);
                r.push_back(z.imag() * inv);
            }
        }
        return r;
    }

    // Max-over-probes normalized Frobenius residual, recovered from the
    // stacked residual vector.
    double max_probe_residual(const std::vector<double>& r) const {
        const std::size_t block = 2 * n * n;
        double worst = 0.0;
        for (std::size_t t = 0; t < probes->size(); ++t) {
            double s = 0.0;
            for (std::size_t e = 0; e < block; ++e) s += r[t * block + e] * r[t * block + e];
            worst = std::max(worst, std::sqrt(s));
        }
        return worst;
    }
};

double cost_of(const std::vector<double>& r) {
    double c = 0.0;
    for (double v : r) c += v * v;
    return c;
}

struct GnOutcome {
    std::vector<ComplexMatrix> b;
    double residual = std::numeric_limits<double>::infinity();
    int iterations = 0;
};

GnOutcome gauss_newton(const GnProblem& prob, std::vector<double> x, const RefineOptions& opts) {
    const std::size_t p = x.size();
    std::vector<ComplexMatrix> b = unpack(x, prob.d - 1, prob.n);
    std::vector<double> r = prob.residuals(b);
    double cost = cost_of(r);
    double lambda = 1e-3;
    int iter = 0;
    int stalls = 0;

    while (iter < opts.max_iter) {
        if (prob.max_probe_residual(r) <= opts.tol) break;

        // Forward-differenced Jacobian, column by column.
        const std::size_t m = r.size();
        std::vector<double> jac(m * p);
        for (std::size_t c = 0; c < p; ++c) {
            const double h = 1.5e-8 * (1.0 + std::abs(x[c]));
            const double saved = x[c];
            x[c] = saved + h;
            const std::vector<double> rp = prob.residuals(unpack(x, prob.d - 1, prob.n));
            x[c] = saved;
            const double inv = 1.0 / h;
            for (std::size_t i = 0; i < m; ++i) jac[i * p + c] = (rp[i] - r[i]) * inv;
        }

        std::vector<double> g(p, 0.0), h_base(p * p, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            const double ri = r[i];
            const double* row = &jac[i * p];
            for (std::size_t c = 0; c < p; ++c) {
                g[c] += row[c] * ri;
                for (std::size_t c2 = 0; c2 <= c; ++c2) h_base[c * p + c2] += row[c] * row[c2];
            }
        }
        for (std::size_t c = 0; c < p; ++c)
            for (std::size_t c2 = c + 1; c2 < p; ++c2) h_base[c * p + c2] = h_base[c2 * p + c];

        bool stepped = false;
        while (iter < opts.max_iter) {
            ++iter;
            std::vector<double> h = h_base;
            for (std::size_t c = 0; c < p; ++c) h[c * p + c] += lambda;
            std::vector<double> delta(p);
            for (std::size_t c = 0; c < p; ++c) delta[c] = -g[c];
            if (!solve_spd(h, delta, p)) {
                lambda = std::min(lambda * 10.0, 1e12);
                continue;
            }
            std::vector<double> x_trial = x;
            double dnorm = 0.0, xnorm = 0.0;
            for (std::size_t c = 0; c < p; ++c) {
                x_trial[c] += delta[c];
                dnorm += delta[c] * delta[c];
                xnorm += x[c] * x[c];
            }
            const std::vector<ComplexMatrix> b_trial = unpack(x_trial, prob.d - 1, prob.n);
            const std::vector<double> r_trial = prob.residuals(b_trial);
            const double cost_trial = cost_of(r_trial);
            if (cost_trial < cost) {
                stalls = (cost - cost_trial) < 1e-16 * (1.0 + cost) ? stalls + 1 : 0;
                x = std::move(x_trial);
                b = b_trial;
                r = r_trial;
                cost = cost_trial;
                lambda = std::max(lambda / 10.0, 1e-12);
                stepped = true;
                if (std::sqrt(dnorm) <= 1e-14 * (1.0 + std::sqrt(xnorm))) stalls = 3;
                break;
            }
            lambda = std::min(lambda * 10.0, 1e12);
            if (lambda >= 1e12) {
                stalls = 3;
                break;
            }
        }
        if (!stepped || stalls >= 3) break;
    }

    GnOutcome out;
    out.b = std::move(b);
    out.residual = prob.max_probe_residual(r);
    out.iterations = iter;
    return out;
}

}  // namespace

FactorizationResult refine_factors(const std::vector<ComplexMatrix>& a,
                                   const std::vector<ComplexMatrix>& b_init, const ProbeSet& probes,
                                   const RefineOptions& opts) {
    const std::size_t d = a.size();
    if (d < 2) throw ArityMismatch("refine_factors: need d >= 2");
    if (b_init.size() + 1 != d) throw ArityMismatch("refine_factors: need exactly d-1 initial factors");
    const std::size_t n = a.front().dim();
    for (const auto& m : a) require_same_dim(m, a.front(), "refine_factors");
    for (const auto& m : b_init) require_same_dim(m, a.front(), "refine_factors");

    const DerivativeForm form = derivative_form(FactoredPoly{a, 1.0});
    GnProblem prob;
    prob.probes = &probes.probes;
    prob.d = d;
    prob.n = n;
    prob.lead = 1.0;
    prob.targets.reserve(probes.count());
    prob.weights.reserve(probes.count());
    for (const ComplexMatrix& z : probes.probes) {
        prob.targets.push_back(eval_derivative(form, z));
        prob.weights.push_back(probe_weight(z, d));
    }

    double jitter_base = 0.0;
    for (const ComplexMatrix& m : b_init)
        for (const Complex& z : m.data()) jitter_base = std::max(jitter_base, std::abs(z));
    const double sigma = 0.1 * (1.0 + jitter_base);

    GnOutcome best;
    int best_restart = -1;
    const int restarts = std::max(1, opts.restarts);
    for (int rs = 0; rs < restarts; ++rs) {
        std::vector<double> x = pack(b_init);
        if (rs > 0) {
            RngStream jit = RngStream(opts.jitter_seed).split(std::uint64_t(rs));
            for (double& v : x) v += sigma * jit.normal();
        }
        GnOutcome out = gauss_newton(prob, std::move(x), opts);
        if (out.residual < best.residual) {
            best = std::move(out);
            best_restart = rs;
        }
        if (best.residual <= opts.tol) break;  // lower restarts can't displace an accepted earlier one
    }
    (void)best_restart;

    FactorizationResult result;
    result.b = std::move(best.b);
    result.residual = best.residual;
    result.method = FactorMethod::kCandidateRefined;
    result.iterations = best.iterations;
    result.accepted = result.residual <= opts.tol;
    return result;
}

namespace {

struct DiagonalFrame {
    ComplexMatrix u;
    std::vector<std::vector<Complex>> lambdas;  // per factor, per slot
    double offmass = std::numeric_limits<double>::infinity();
};

bool is_commuting_normal(const std::vector<ComplexMatrix>& a, double rel_tol) {
    double s = 1.0;
    for (const auto& m : a) s = std::max(s, frobenius_norm(m));
    const double gate = rel_tol * s * s;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (frobenius_norm(commutator(a[i], adjoint(a[i]))) > gate) return false;
        for (std::size_t j = i + 1; j < a.size(); ++j)
            if (frobenius_norm(commutator(a[i], a[j])) > gate) return false;
    }
    return true;
}

// Shared eigenbasis of a commuting normal family: diagonalize a generic
// Hermitian combination of the real and imaginary parts, retrying with new
// coefficients when the combination lands near a degeneracy.
DiagonalFrame simultaneous_diagonalize(const std::vector<ComplexMatrix>& a) {
    const std::size_t n = a.front().dim();
    double s = 1.0;
    for (const auto& m : a) s = std::max(s, frobenius_norm(m));

    DiagonalFrame best;
    for (int attempt = 0; attempt < 5; ++attempt) {
        RngStream coeff(0xD1A60000ull + std::uint64_t(attempt));
        ComplexMatrix h(n);
        for (const ComplexMatrix& m : a) {
            const ComplexMatrix re = 0.5 * (m + adjoint(m));
            const ComplexMatrix im = Complex(0.0, -0.5) * (m - adjoint(m));
            h += coeff.normal() * re + coeff.normal() * im;
        }
        HermitianSpectrum spec;
        try {
            spec = hermitian_eigenvalues(h, 1e-6);
        } catch (const NotHermitian&) {
            continue;
        }
        const ComplexMatrix u_adj = adjoint(spec.eigenvectors);
        double offmass = 0.0;
        std::vector<std::vector<Complex>> lambdas;
        lambdas.reserve(a.size());
        for (const ComplexMatrix& m : a) {
            const ComplexMatrix diag = u_adj * m * spec.eigenvectors;
            offmass = std::max(offmass, offdiag_mass(diag));
            std::vector<Complex> lam(n);
            for (std::size_t i = 0; i < n; ++i) lam[i] = diag(i, i);
            lambdas.push_back(std::move(lam));
        }
        if (offmass < best.offmass) {
            best.u = spec.eigenvectors;
            best.lambdas = std::move(lambdas);
            best.offmass = offmass;
        }
        if (best.offmass <= 1e-12 * s) break;
    }
    return best;
}

ProbeSet subalgebra_probes(const ComplexMatrix& u, std::size_t count, std::uint64_t seed) {
    const std::size_t n = u.dim();
    ProbeSet set;
    set.seed = seed;
    RngStream rng = RngStream(seed).split(0xD1A6);
    const ComplexMatrix u_adj = adjoint(u);
    for (std::size_t t = 0; t < count; ++t) {
        std::vector<Complex> w(n);
        for (std::size_t i = 0; i < n; ++i) w[i] = rng.complex_normal();
        set.probes.push_back(u * ComplexMatrix::diagonal(w) * u_adj);
    }
    return set;
}

}  // namespace

FactorizationResult factorize(const std::vector<ComplexMatrix>& a, const ProbeSet& probes,
                              const FactorizeOptions& opts,
                              const std::vector<ComplexMatrix>* warm_start) {
    const std::size_t d = a.size();
    if (d < 2) throw ArityMismatch("factorize: need d >= 2");
    const std::size_t n = a.front().dim();
    for (const auto& m : a) require_same_dim(m, a.front(), "factorize");
    if (probes.count() < 2 * d)
        throw ArityMismatch("factorize: probe set smaller than 2d");
    for (const auto& z : probes.probes) require_same_dim(z, a.front(), "factorize");

    const DerivativeForm form = derivative_form(FactoredPoly{a, 1.0});

    FactorizationResult result;

    if (n == 1) {
        RootList roots(d);
        for (std::size_t j = 0; j < d; ++j) roots[j] = a[j](0, 0);
        try {
            const RootList b = critical_points(roots);
            result.b.reserve(d - 1);
            for (Complex bk : b) result.b.push_back(ComplexMatrix(1, {bk}));
            result.method = FactorMethod::kScalarRoots;
            result.residual = functional_residual(form, result.b, probes);
            result.accepted = result.residual <= opts.tol;
            return result;
        } catch (const NoConvergence&) {
            result.method = FactorMethod::kScalarRoots;
            result.residual = std::numeric_limits<double>::infinity();
            result.accepted = false;
            return result;
        }
    }

    if (d == 2) {
        result.b = {0.5 * (a[0] + a[1])};
        result.method = FactorMethod::kClosedFormD2;
        result.residual = functional_residual(form, result.b, probes);
        result.accepted = result.residual <= opts.tol;
        return result;
    }

    if (is_commuting_normal(a, opts.commutator_tol)) {
        double s = 1.0;
        for (const auto& m : a) s = std::max(s, frobenius_norm(m));
        const DiagonalFrame frame = simultaneous_diagonalize(a);
        if (frame.offmass <= 1e-9 * s) {
            try {
                std::vector<std::vector<Complex>> slot_b(d - 1, std::vector<Complex>(n));
                for (std::size_t slot = 0; slot < n; ++slot) {
                    RootList roots(d);
                    for (std::size_t j = 0; j < d; ++j) roots[j] = frame.lambdas[j][slot];
                    const RootList b = critical_points(roots);
                    for (std::size_t k = 0; k + 1 < d; ++k) slot_b[k][slot] = b[k];
                }
                const ComplexMatrix u_adj = adjoint(frame.u);
                result.b.reserve(d - 1);
                for (std::size_t k = 0; k + 1 < d; ++k)
                    result.b.push_back(frame.u * ComplexMatrix::diagonal(slot_b[k]) * u_adj);
                result.method = FactorMethod::kPerDiagonalScalar;
                result.subalgebra_probes = true;
                const ProbeSet adapted = subalgebra_probes(frame.u, probes.count(), probes.seed);
                result.residual = functional_residual(form, result.b, adapted);
                result.accepted = result.residual <= opts.tol;
                return result;
            } catch (const NoConvergence&) {
                // fall through to the generic route
            }
        }
    }

    const std::vector<ComplexMatrix> cand = candidate_critical_factors(a);
    const double cand_res = functional_residual(form, cand, probes);
    if (cand_res <= opts.tol) {
        result.b = cand;
        result.method = FactorMethod::kCandidate;
        result.residual = cand_res;
        result.accepted = true;
        return result;
    }

    RefineOptions ropts = opts.refine;
    ropts.tol = opts.tol;
    const bool warm_ok = warm_start != nullptr && warm_start->size() + 1 == d;
    return refine_factors(a, warm_ok ? *warm_start : cand, probes, ropts);
}

}  // namespace csl
