#pragma once

#include <cstdint>
#include <vector>

#include "dbb/errors.hpp"
#include "dbb/rational.hpp"

namespace dbb {

using RationalMatrix = std::vector<std::vector<Rational>>;

struct LinearSolveResult {
  std::int64_t rank = 0;
  bool consistent = true;
  bool unique = false;
  // A particular solution when consistent (free variables set to zero); the
  // unique one when `unique` is set.
  std::vector<Rational> solution;
};

// Exact Gauss-Jordan elimination on [A | b].
inline LinearSolveResult solve_linear_system(RationalMatrix a,
                                             std::vector<Rational> b) {
  const std::size_t rows = a.size();
  if (b.size() != rows)
    throw DomainError("right-hand side length does not match row count");
  const std::size_t cols = rows == 0 ? 0 : a[0].size();
  for (const auto& row : a)
    if (row.size() != cols) throw DomainError("ragged matrix");

  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pivot = r;
    while (pivot < rows && a[pivot][c].is_zero()) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[r]);
    std::swap(b[pivot], b[r]);
    Rational inv = Rational(1) / a[r][c];
    for (std::size_t j = c; j < cols; ++j) a[r][j] *= inv;
    b[r] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c].is_zero()) continue;
      Rational factor = a[i][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= factor * a[r][j];
      b[i] -= factor * b[r];
    }
    pivot_col.push_back(c);
    ++r;
  }

  LinearSolveResult result;
  result.rank = static_cast<std::int64_t>(r);
  for (std::size_t i = r; i < rows; ++i)
    if (!b[i].is_zero()) result.consistent = false;
  result.unique = result.consistent && r == cols;
  if (result.consistent) {
    result.solution.assign(cols, Rational(0));
    for (std::size_t i = 0; i < pivot_col.size(); ++i)
      result.solution[pivot_col[i]] = b[i];
  }
  return result;
}

namespace detail {

inline Int128 checked_mul128(Int128 a, Int128 b) {
  Int128 out = 0;
  if (__builtin_mul_overflow(a, b, &out))
    throw ArithmeticError("128-bit overflow in fraction-free elimination");
  return out;
}

}  // namespace detail

// Rank by fraction-free (Bareiss) elimination over the integers. Every
// division is exact; intermediates are minors of the input.
inline std::int64_t fraction_free_rank(
    std::vector<std::vector<std::int64_t>> matrix) {
  const std::size_t rows = matrix.size();
  const std::size_t cols = rows == 0 ? 0 : matrix[0].size();
  std::vector<std::vector<detail::Int128>> m(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    if (matrix[i].size() != cols) throw DomainError("ragged matrix");
    m[i].assign(matrix[i].begin(), matrix[i].end());
  }

  detail::Int128 prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pivot = r;
    while (pivot < rows && m[pivot][c] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(m[pivot], m[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        detail::Int128 t = detail::checked_mul128(m[r][c], m[i][j]) -
                           detail::checked_mul128(m[i][c], m[r][j]);
        if (t % prev != 0)
          throw AssertionFailure("Bareiss division is not exact");
        m[i][j] = t / prev;
      }
      m[i][c] = 0;
    }
    prev = m[r][c];
    ++r;
  }
  return static_cast<std::int64_t>(r);
}

// Rational rows are scaled to integers first; row scaling preserves rank.
inline std::int64_t fraction_free_rank(const RationalMatrix& matrix) {
  std::vector<std::vector<std::int64_t>> scaled(matrix.size());
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    detail::Int128 lcm = 1;
    for (const Rational& x : matrix[i]) {
      detail::Int128 den = x.den();
      lcm = detail::checked_mul128(lcm / detail::gcd128(lcm, den), den);
    }
    scaled[i].reserve(matrix[i].size());
    for (const Rational& x : matrix[i]) {
      detail::Int128 v =
          detail::checked_mul128(x.num(), lcm / x.den());
      constexpr detail::Int128 kMax = std::numeric_limits<std::int64_t>::max();
      if (v > kMax || v < -kMax)
        throw ArithmeticError("scaled matrix entry overflows 64 bits");
      scaled[i].push_back(static_cast<std::int64_t>(v));
    }
  }
  return fraction_free_rank(std::move(scaled));
}

}  // namespace dbb
