#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "csl/error.hpp"

namespace csl {

using Complex = std::complex<double>;

/// Dense square complex matrix, the carrier for elements of M_n(C).
///
/// Entries are stored row-major. Public constructors reject non-finite
/// entries; every value is immutable in spirit (operations return new
/// matrices) so instances are safe to share across threads.
class ComplexMatrix {
  public:
    ComplexMatrix() : n_(0) {}

    // Zero matrix of dimension n.
    explicit ComplexMatrix(std::size_t n) : n_(n), a_(n * n, Complex(0.0, 0.0)) {}

    ComplexMatrix(std::size_t n, std::vector<Complex> entries);

    // Row-major literal, e.g. ComplexMatrix::from_rows({{1,0},{0,1}}).
    static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(const std::vector<Complex>& d);

    std::size_t dim() const noexcept { return n_; }

    Complex& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    const std::vector<Complex>& data() const noexcept { return a_; }

    ComplexMatrix& operator+=(const ComplexMatrix& rhs);
    ComplexMatrix& operator-=(const ComplexMatrix& rhs);
    ComplexMatrix& operator*=(Complex s);

    bool all_finite() const noexcept;

  private:
    std::size_t n_;
    std::vector<Complex> a_;
};

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, const ComplexMatrix& m);
ComplexMatrix operator*(double s, const ComplexMatrix& m);
ComplexMatrix operator-(const ComplexMatrix& m);

/// Conjugate transpose.
ComplexMatrix adjoint(const ComplexMatrix& m);

double frobenius_norm(const ComplexMatrix& m);

Complex trace(const ComplexMatrix& m);

/// a*b - b*a
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Frobenius distance of m from its own adjoint, ||m - m*||_F.
double hermiticity_residual(const ComplexMatrix& m);

/// (m + m*)/2, enforcing a real diagonal.
ComplexMatrix hermitian_part(const ComplexMatrix& m);

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* where);

}  // namespace csl
