#include "csl/ensembles.hpp"

#include <cmath>

namespace csl {

Ensemble ensemble_from_name(const std::string& name) {
    if (name == "ginibre") return Ensemble::kGinibre;
    if (name == "gue") return Ensemble::kGue;
    if (name == "unitary") return Ensemble::kUnitary;
    if (name == "diagonal_complex") return Ensemble::kDiagonalComplex;
    if (name == "commuting") return Ensemble::kCommuting;
    throw Error("unknown ensemble: " + name);
}

std::string ensemble_name(Ensemble kind) {
    switch (kind) {
        case Ensemble::kGinibre: return "ginibre";
        case Ensemble::kGue: return "gue";
        case Ensemble::kUnitary: return "unitary";
        case Ensemble::kDiagonalComplex: return "diagonal_complex";
        case Ensemble::kCommuting: return "commuting";
    }
    throw Error("unknown ensemble enum value");
}

namespace {

ComplexMatrix ginibre(std::size_t n, RngStream& rng) {
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.complex_normal();
    return m;
}

ComplexMatrix gue(std::size_t n, RngStream& rng) {
    // Diagonal real N(0,1); off-diagonal CN(0,1), mirrored by conjugation.
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            if (i == j) {
                m(i, i) = Complex(rng.normal(), 0.0);
            } else {
                const Complex z = rng.complex_normal();
                m(i, j) = z;
                m(j, i) = std::conj(z);
            }
        }
    }
    return m;
}

// Modified Gram-Schmidt with a second pass.
ComplexMatrix orthonormalize(ComplexMatrix g) {
    const std::size_t n = g.dim();
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < j; ++k) {
                Complex proj = 0.0;
                for (std::size_t i = 0; i < n; ++i) proj += std::conj(g(i, k)) * g(i, j);
                for (std::size_t i = 0; i < n; ++i) g(i, j) -= proj * g(i, k);
            }
            double norm2 = 0.0;
            for (std::size_t i = 0; i < n; ++i) norm2 += std::norm(g(i, j));
            const double inv = 1.0 / std::sqrt(norm2);
            for (std::size_t i = 0; i < n; ++i) g(i, j) *= inv;
        }
    }
    return g;
}

std::vector<Complex> unit_disk_diagonal(std::size_t n, RngStream& rng) {
    std::vector<Complex> d(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = std::sqrt(rng.uniform01());
        const double t = 2.0 * M_PI * rng.uniform01();
        d[i] = Complex(r * std::cos(t), r * std::sin(t));
    }
    return d;
}

}  // namespace

ComplexMatrix sample_matrix(Ensemble kind, std::size_t n, RngStream& rng) {
    switch (kind) {
        case Ensemble::kGinibre: return ginibre(n, rng);
        case Ensemble::kGue: return gue(n, rng);
        case Ensemble::kUnitary: return orthonormalize(ginibre(n, rng));
        case Ensemble::kDiagonalComplex: return ComplexMatrix::diagonal(unit_disk_diagonal(n, rng));
        case Ensemble::kCommuting:
            throw Error("sample_matrix: commuting is a tuple ensemble, use sample_commuting_normal_tuple");
    }
    throw Error("sample_matrix: unknown ensemble");
}

CommutingTuple sample_commuting_normal_tuple(std::size_t d, std::size_t n, RngStream& rng) {
    if (d < 2) throw ArityMismatch("sample_commuting_normal_tuple: need d >= 2");
    if (n < 1) throw DimensionMismatch("sample_commuting_normal_tuple: need n >= 1");

    CommutingTuple tuple;
    tuple.frame = n == 1 ? ComplexMatrix::identity(1) : orthonormalize(ginibre(n, rng));
    const ComplexMatrix frame_adj = adjoint(tuple.frame);
    tuple.diagonals.reserve(d);
    tuple.matrices.reserve(d);
    for (std::size_t j = 0; j < d; ++j) {
        tuple.diagonals.push_back(unit_disk_diagonal(n, rng));
        tuple.matrices.push_back(tuple.frame * ComplexMatrix::diagonal(tuple.diagonals.back()) * frame_adj);
    }
    return tuple;
}

}  // namespace csl
