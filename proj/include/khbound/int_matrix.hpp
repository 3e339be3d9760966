#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "khbound/errors.hpp"

namespace khbound {

// Arbitrary-precision integer. Every number in the pipeline is exact;
// there is no floating point anywhere in this library.
using Int = mpz_class;

// Dense row-major matrix of arbitrary-precision integers.
class IntMatrix {
public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static IntMatrix from_rows(std::initializer_list<std::initializer_list<long>> rows) {
    std::size_t r = rows.size();
    std::size_t c = r ? rows.begin()->size() : 0;
    IntMatrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != c)
        throw DimensionMismatch("from_rows: ragged row lengths");
      std::size_t j = 0;
      for (long x : row) m(i, j++) = x;
      ++i;
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Int& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Int& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  bool operator==(const IntMatrix&) const = default;

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Int> data_;
};

inline IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows())
    throw DimensionMismatch("matrix product: inner dimensions differ");
  IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Int& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("matrix sum: shapes differ");
  IntMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
  return c;
}

inline IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("matrix difference: shapes differ");
  IntMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

inline IntMatrix operator-(const IntMatrix& a) {
  IntMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = -a(i, j);
  return c;
}

inline std::ostream& operator<<(std::ostream& os, const IntMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? "\n[" : "[");
    for (std::size_t j = 0; j < m.cols(); ++j)
      os << (j ? " " : "") << m(i, j).get_str();
    os << "]";
  }
  return os;
}

inline std::string to_string(const IntMatrix& m) {
  std::ostringstream os;
  os << m;
  return os.str();
}

// Exact determinant, fraction-free Bareiss elimination with row pivoting.
inline Int determinant(IntMatrix a) {
  if (!a.is_square())
    throw DimensionMismatch("determinant: matrix not square");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t piv = k + 1;
      while (piv < n && a(piv, k) == 0) ++piv;
      if (piv == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Int num = a(k, k) * a(i, j) - a(i, k) * a(k, j);
        mpz_divexact(a(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return sign > 0 ? a(n - 1, n - 1) : Int(-a(n - 1, n - 1));
}

inline bool is_lower_unitriangular(const IntMatrix& m) {
  if (!m.is_square()) return false;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (m(i, i) != 1) return false;
    for (std::size_t j = i + 1; j < m.cols(); ++j)
      if (m(i, j) != 0) return false;
  }
  return true;
}

// Integral inverse of a matrix with determinant +-1.
//
// Lower-unitriangular input (the Cartan matrices produced by this pipeline)
// is inverted by integer forward substitution; anything else goes through a
// Bareiss determinant check followed by exact rational Gauss-Jordan.
inline IntMatrix unimodular_inverse(const IntMatrix& c) {
  if (!c.is_square())
    throw DimensionMismatch("unimodular_inverse: matrix not square");
  const std::size_t n = c.rows();
  if (is_lower_unitriangular(c)) {
    // row_i(X) = e_i - sum_{k<i} c(i,k) row_k(X)
    IntMatrix x = IntMatrix::identity(n);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t k = 0; k < i; ++k) {
        const Int& f = c(i, k);
        if (f == 0) continue;
        for (std::size_t j = 0; j <= k; ++j) x(i, j) -= f * x(k, j);
      }
    return x;
  }
  Int det = determinant(c);
  if (det != 1 && det != -1)
    throw NotUnimodular("unimodular_inverse: |det| = " + Int(abs(det)).get_str());
  // exact rational Gauss-Jordan on [c | I]
  std::vector<std::vector<mpq_class>> w(n, std::vector<mpq_class>(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) w[i][j] = mpq_class(c(i, j));
    w[i][n + i] = 1;
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (w[piv][col] == 0) ++piv;  // nonsingular, so a pivot exists
    std::swap(w[col], w[piv]);
    mpq_class p = w[col][col];
    for (auto& x : w[col]) x /= p;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || w[i][col] == 0) continue;
      mpq_class f = w[i][col];
      for (std::size_t j = col; j < 2 * n; ++j) w[i][j] -= f * w[col][j];
    }
  }
  IntMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      mpq_class& x = w[i][n + j];
      x.canonicalize();
      if (x.get_den() != 1)
        throw NotUnimodular("unimodular_inverse: non-integral inverse entry");
      inv(i, j) = x.get_num();
    }
  return inv;
}

namespace detail {
// C (C^{-1})^T, the Euler-form product both coxeter_phi and m_matrix need.
inline IntMatrix euler_product(const IntMatrix& c) {
  return c * unimodular_inverse(c).transpose();
}
}  // namespace detail

// Inverse Coxeter transformation -C (C^{-1})^T.
inline IntMatrix coxeter_phi(const IntMatrix& c) { return -detail::euler_product(c); }

// M = (-1)^{d-1} C (C^{-1})^T - I for a quiver with d branches.
inline IntMatrix m_matrix(const IntMatrix& c, int branch_count) {
  if (branch_count < 2)
    throw TooSmall("m_matrix: branch count must be at least 2");
  IntMatrix prod = detail::euler_product(c);
  const bool negate = (branch_count - 1) % 2 != 0;
  IntMatrix m = negate ? -prod : std::move(prod);
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) -= 1;
  return m;
}

}  // namespace khbound
