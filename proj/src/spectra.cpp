#include "csl/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace csl {

namespace {

double offdiag_frobenius(const ComplexMatrix& a) {
    const std::size_t n = a.dim();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

}  // namespace

double default_loewner_tol(const ComplexMatrix& a, const ComplexMatrix& b) {
    return 1e-9 * std::max(1.0, frobenius_norm(a) + frobenius_norm(b));
}

HermitianSpectrum hermitian_eigenvalues(const ComplexMatrix& m, double tol) {
    const std::size_t n = m.dim();
    const double norm = frobenius_norm(m);
    const double herm_res = hermiticity_residual(m);
    if (herm_res > tol * std::max(1.0, norm)) {
        throw NotHermitian("hermitian_eigenvalues: input is not Hermitian within tolerance", herm_res);
    }

    const ComplexMatrix a0 = hermitian_part(m);
    ComplexMatrix a = a0;
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double target = 1e-13 * norm;
    constexpr int kMaxSweeps = 60;

    for (int sweep = 0; sweep < kMaxSweeps && n > 1; ++sweep) {
        if (offdiag_frobenius(a) <= target) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex beta = a(p, q);
                const double babs = std::abs(beta);
                if (babs == 0.0) continue;
                // Factor the phase out, then a real 2x2 Jacobi rotation.
                const Complex phase = beta / babs;
                const double alpha = a(p, p).real();
                const double gamma = a(q, q).real();
                const double tau = (gamma - alpha) / (2.0 * babs);
                const double sign = tau >= 0.0 ? 1.0 : -1.0;
                const double t = sign / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // G restricted to the (p, q) plane; A <- G* A G, V <- V G.
                const Complex gpp(c, 0.0);
                const Complex gpq(s, 0.0);
                const Complex gqp = -s * std::conj(phase);
                const Complex gqq = c * std::conj(phase);

                for (std::size_t i = 0; i < n; ++i) {
                    const Complex aip = a(i, p), aiq = a(i, q);
                    a(i, p) = aip * gpp + aiq * gqp;
                    a(i, q) = aip * gpq + aiq * gqq;
                    const Complex vip = v(i, p), viq = v(i, q);
                    v(i, p) = vip * gpp + viq * gqp;
                    v(i, q) = vip * gpq + viq * gqq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const Complex apj = a(p, j), aqj = a(q, j);
                    a(p, j) = std::conj(gpp) * apj + std::conj(gqp) * aqj;
                    a(q, j) = std::conj(gpq) * apj + std::conj(gqq) * aqj;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = Complex(a(p, p).real(), 0.0);
                a(q, q) = Complex(a(q, q).real(), 0.0);
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    HermitianSpectrum spec;
    spec.eigenvalues.resize(n);
    spec.eigenvectors = ComplexMatrix(n);
    for (std::size_t k = 0; k < n; ++k) {
        spec.eigenvalues[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) spec.eigenvectors(i, k) = v(i, order[k]);
    }

    // Residual against the symmetrized input: max_k ||A0 v_k - lambda_k v_k||_2.
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double s2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            Complex r = 0.0;
            for (std::size_t j = 0; j < n; ++j) r += a0(i, j) * spec.eigenvectors(j, k);
            r -= spec.eigenvalues[k] * spec.eigenvectors(i, k);
            s2 += std::norm(r);
        }
        worst = std::max(worst, std::sqrt(s2));
    }
    spec.residual = worst;
    return spec;
}

LoewnerVerdict loewner_leq(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
    require_same_dim(a, b, "loewner_leq");
    if (tol <= 0.0) tol = default_loewner_tol(a, b);
    const double scale_a = std::max(1.0, frobenius_norm(a));
    const double scale_b = std::max(1.0, frobenius_norm(b));
    if (hermiticity_residual(a) > kDefaultHermitianTol * scale_a)
        throw NotHermitian("loewner_leq: A not Hermitian", hermiticity_residual(a));
    if (hermiticity_residual(b) > kDefaultHermitianTol * scale_b)
        throw NotHermitian("loewner_leq: B not Hermitian", hermiticity_residual(b));

    const HermitianSpectrum spec = hermitian_eigenvalues(b - a, kDefaultHermitianTol * 2.0);
    LoewnerVerdict verdict;
    verdict.min_eig = spec.eigenvalues.front();
    verdict.tol = tol;
    verdict.holds = verdict.min_eig >= -tol;
    return verdict;
}

}  // namespace csl
