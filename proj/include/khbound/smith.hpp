#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "khbound/int_matrix.hpp"

namespace khbound {

// Smith normal form u * m * v = d with |det u| = |det v| = 1 and d diagonal,
// nonnegative, each entry dividing the next.
struct SnfResult {
  IntMatrix u, d, v;
};

namespace detail {

inline void row_sub(IntMatrix& a, std::size_t dst, std::size_t src, const Int& q) {
  if (q == 0) return;
  for (std::size_t j = 0; j < a.cols(); ++j) a(dst, j) -= q * a(src, j);
}

inline void col_sub(IntMatrix& a, std::size_t dst, std::size_t src, const Int& q) {
  if (q == 0) return;
  for (std::size_t i = 0; i < a.rows(); ++i) a(i, dst) -= q * a(i, src);
}

inline void row_add(IntMatrix& a, std::size_t dst, std::size_t src) {
  for (std::size_t j = 0; j < a.cols(); ++j) a(dst, j) += a(src, j);
}

inline void swap_rows(IntMatrix& a, std::size_t i, std::size_t k) {
  if (i == k) return;
  for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(i, j), a(k, j));
}

inline void swap_cols(IntMatrix& a, std::size_t j, std::size_t k) {
  if (j == k) return;
  for (std::size_t i = 0; i < a.rows(); ++i) std::swap(a(i, j), a(i, k));
}

inline void negate_row(IntMatrix& a, std::size_t i) {
  for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = -a(i, j);
}

// Smallest |entry| in the trailing submatrix, ties broken by lowest row
// then lowest column; nullopt when the submatrix is zero.
inline std::optional<std::pair<std::size_t, std::size_t>> pick_pivot(
    const IntMatrix& a, std::size_t t) {
  std::optional<std::pair<std::size_t, std::size_t>> best;
  Int best_abs;
  for (std::size_t i = t; i < a.rows(); ++i)
    for (std::size_t j = t; j < a.cols(); ++j) {
      if (a(i, j) == 0) continue;
      Int v = abs(a(i, j));
      if (!best || v < best_abs) {
        best = {i, j};
        best_abs = v;
        if (best_abs == 1) return best;
      }
    }
  return best;
}

}  // namespace detail

inline SnfResult smith_normal_form(const IntMatrix& input) {
  const std::size_t rows = input.rows(), cols = input.cols();
  const std::size_t n = std::min(rows, cols);
  IntMatrix a = input;
  IntMatrix u = IntMatrix::identity(rows);
  IntMatrix v = IntMatrix::identity(cols);

  for (std::size_t t = 0; t < n; ++t) {
    auto pivot = detail::pick_pivot(a, t);
    if (!pivot) break;  // trailing submatrix zero: diagonal stays 0
    detail::swap_rows(a, t, pivot->first);
    detail::swap_rows(u, t, pivot->first);
    detail::swap_cols(a, t, pivot->second);
    detail::swap_cols(v, t, pivot->second);

    for (;;) {
      // Clear column t with row operations; truncated quotients leave
      // remainders strictly smaller than the pivot.
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a(i, t) == 0) continue;
        Int q = a(i, t) / a(t, t);
        detail::row_sub(a, i, t, q);
        detail::row_sub(u, i, t, q);
      }
      std::optional<std::size_t> rem_row;
      for (std::size_t i = t + 1; i < rows; ++i)
        if (a(i, t) != 0 && (!rem_row || abs(a(i, t)) < abs(a(*rem_row, t))))
          rem_row = i;
      if (rem_row) {
        detail::swap_rows(a, t, *rem_row);
        detail::swap_rows(u, t, *rem_row);
        continue;
      }

      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a(t, j) == 0) continue;
        Int q = a(t, j) / a(t, t);
        detail::col_sub(a, j, t, q);
        detail::col_sub(v, j, t, q);
      }
      std::optional<std::size_t> rem_col;
      for (std::size_t j = t + 1; j < cols; ++j)
        if (a(t, j) != 0 && (!rem_col || abs(a(t, j)) < abs(a(t, *rem_col))))
          rem_col = j;
      if (rem_col) {
        detail::swap_cols(a, t, *rem_col);
        detail::swap_cols(v, t, *rem_col);
        continue;
      }

      // Row t and column t are clear; absorb any entry the pivot does not
      // divide so the divisibility chain holds.
      bool absorbed = false;
      for (std::size_t i = t + 1; i < rows && !absorbed; ++i)
        for (std::size_t j = t + 1; j < cols && !absorbed; ++j)
          if (!mpz_divisible_p(a(i, j).get_mpz_t(), a(t, t).get_mpz_t())) {
            detail::row_add(a, t, i);
            detail::row_add(u, t, i);
            absorbed = true;
          }
      if (!absorbed) break;
    }

    if (a(t, t) < 0) {
      detail::negate_row(a, t);
      detail::negate_row(u, t);
    }
  }
  return {std::move(u), std::move(a), std::move(v)};
}

// Finitely generated abelian group in canonical form: Z^free_rank plus one
// Z/f per invariant factor, with 1 < f_1 | f_2 | ...
struct AbelianGroup {
  std::size_t free_rank = 0;
  std::vector<Int> invariant_factors;

  bool operator==(const AbelianGroup&) const = default;

  bool is_trivial() const { return free_rank == 0 && invariant_factors.empty(); }

  Int torsion_order() const {
    Int t = 1;
    for (const Int& f : invariant_factors) t *= f;
    return t;
  }

  std::string to_string() const {
    if (is_trivial()) return "0";
    std::string s;
    for (const Int& f : invariant_factors) {
      if (!s.empty()) s += " ⊕ ";
      s += "Z/" + f.get_str();
    }
    if (free_rank > 0) {
      if (!s.empty()) s += " ⊕ ";
      s += free_rank == 1 ? "Z" : "Z^" + std::to_string(free_rank);
    }
    return s;
  }
};

inline std::ostream& operator<<(std::ostream& os, const AbelianGroup& g) {
  return os << g.to_string();
}

namespace detail {
inline AbelianGroup cokernel_from_diagonal(const IntMatrix& d, std::size_t rows) {
  AbelianGroup g;
  std::size_t nonzero = 0;
  for (std::size_t k = 0; k < std::min(d.rows(), d.cols()); ++k) {
    if (d(k, k) == 0) continue;
    ++nonzero;
    if (d(k, k) > 1) g.invariant_factors.push_back(d(k, k));
  }
  g.free_rank = rows - nonzero;
  return g;
}
}  // namespace detail

// Cokernel of m acting on column vectors: Z^rows / column lattice of m.
inline AbelianGroup cokernel(const IntMatrix& m) {
  SnfResult snf = smith_normal_form(m);
  return detail::cokernel_from_diagonal(snf.d, m.rows());
}

// Order of the class of vec in coker(m); nullopt means infinite order.
inline std::optional<Int> element_order(const IntMatrix& m, const std::vector<Int>& vec) {
  if (vec.size() != m.rows())
    throw DimensionMismatch("element_order: vector length != matrix rows");
  SnfResult snf = smith_normal_form(m);
  const std::size_t n = std::min(m.rows(), m.cols());
  Int order = 1;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Int w = 0;
    for (std::size_t j = 0; j < m.rows(); ++j) w += snf.u(i, j) * vec[j];
    Int modulus = i < n ? snf.d(i, i) : Int(0);
    if (modulus == 0) {
      if (w != 0) return std::nullopt;
    } else {
      Int g = gcd(modulus, w);
      order = lcm(order, Int(modulus / g));
    }
  }
  return order;
}

// True iff the classes of vecs generate coker(m): appending them to the
// column lattice must make the cokernel trivial.
inline bool is_generating_set(const IntMatrix& m, const std::vector<std::vector<Int>>& vecs) {
  for (const auto& v : vecs)
    if (v.size() != m.rows())
      throw DimensionMismatch("is_generating_set: vector length != matrix rows");
  IntMatrix aug(m.rows(), m.cols() + vecs.size());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
  for (std::size_t k = 0; k < vecs.size(); ++k)
    for (std::size_t i = 0; i < m.rows(); ++i) aug(i, m.cols() + k) = vecs[k][i];
  return cokernel(aug).is_trivial();
}

}  // namespace khbound
