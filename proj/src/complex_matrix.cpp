#include "csl/complex_matrix.hpp"

#include <cmath>
#include <string>

namespace csl {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t n, std::vector<Complex> entries) : n_(n), a_(std::move(entries)) {
    if (a_.size() != n_ * n_) {
        throw DimensionMismatch("ComplexMatrix: entry count " + std::to_string(a_.size()) +
                                " does not match dimension " + std::to_string(n_));
    }
    if (!all_finite()) throw Error("ComplexMatrix: non-finite entry");
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
    const std::size_t n = rows.size();
    std::vector<Complex> entries;
    entries.reserve(n * n);
    for (const auto& row : rows) {
        if (row.size() != n) throw DimensionMismatch("ComplexMatrix::from_rows: ragged rows");
        entries.insert(entries.end(), row.begin(), row.end());
    }
    return ComplexMatrix(n, std::move(entries));
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<Complex>& d) {
    ComplexMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

bool ComplexMatrix::all_finite() const noexcept {
    for (const Complex& z : a_)
        if (!finite(z)) return false;
    return true;
}

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* where) {
    if (a.dim() != b.dim()) {
        throw DimensionMismatch(std::string(where) + ": dimensions " + std::to_string(a.dim()) +
                                " and " + std::to_string(b.dim()) + " differ");
    }
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
    require_same_dim(*this, rhs, "operator+=");
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += rhs.a_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
    require_same_dim(*this, rhs, "operator-=");
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= rhs.a_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
    for (Complex& z : a_) z *= s;
    return *this;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix r = a;
    r += b;
    return r;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix r = a;
    r -= b;
    return r;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b, "operator*");
    const std::size_t n = a.dim();
    ComplexMatrix r(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
        }
    }
    return r;
}

ComplexMatrix operator*(Complex s, const ComplexMatrix& m) {
    ComplexMatrix r = m;
    r *= s;
    return r;
}

ComplexMatrix operator*(double s, const ComplexMatrix& m) { return Complex(s, 0.0) * m; }

ComplexMatrix operator-(const ComplexMatrix& m) { return Complex(-1.0, 0.0) * m; }

ComplexMatrix adjoint(const ComplexMatrix& m) {
    const std::size_t n = m.dim();
    ComplexMatrix r(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r(i, j) = std::conj(m(j, i));
    return r;
}

double frobenius_norm(const ComplexMatrix& m) {
    double s = 0.0;
    for (const Complex& z : m.data()) s += std::norm(z);
    return std::sqrt(s);
}

Complex trace(const ComplexMatrix& m) {
    Complex t = 0.0;
    for (std::size_t i = 0; i < m.dim(); ++i) t += m(i, i);
    return t;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

double hermiticity_residual(const ComplexMatrix& m) { return frobenius_norm(m - adjoint(m)); }

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
    const std::size_t n = m.dim();
    ComplexMatrix h(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
        }
        h(i, i) = Complex(h(i, i).real(), 0.0);
    }
    return h;
}

}  // namespace csl
