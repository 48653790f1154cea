#pragma once

// Brute-force references. Deliberately written without touching the
// decomposition, convolution, sign or base-case code they check.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "treeperm/base_cases.hpp"
#include "treeperm/errors.hpp"
#include "treeperm/scalar.hpp"
#include "treeperm/tensor.hpp"
#include "treeperm/zonotope.hpp"

namespace treeperm::oracle {

template <Ring T>
std::vector<std::vector<T>> dense(const SparseTensor<T>& m) {
  std::vector<std::vector<T>> a(m.length(0), std::vector<T>(m.length(1), T(0)));
  for (const auto& e : m.entries()) a[e.index[0]][e.index[1]] = e.value;
  return a;
}

/// Ryser's formula, columns visited in Gray-code order so each step adds or
/// removes a single column from the running row sums.
template <Ring T>
T ryser_permanent(const SparseTensor<T>& m) {
  if (m.order() != 2 || m.length(0) != m.length(1)) throw IncompatibleInput("ryser_permanent needs a square matrix");
  const std::size_t n = m.length(0);
  if (n > 30) throw BudgetExceeded("ryser_permanent is capped at n = 30");
  if (n == 0) return T(1);
  auto a = dense(m);
  std::vector<T> row_sum(n, T(0));
  T total(0);
  std::uint64_t gray = 0;
  for (std::uint64_t k = 1; k < (std::uint64_t{1} << n); ++k) {
    std::uint64_t next = k ^ (k >> 1);
    std::uint64_t flipped = next ^ gray;
    std::size_t j = 0;
    while (!(flipped >> j & 1)) ++j;
    bool added = next >> j & 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (added) row_sum[i] += a[i][j];
      else row_sum[i] -= a[i][j];
    }
    gray = next;
    T prod(1);
    for (std::size_t i = 0; i < n; ++i) prod *= row_sum[i];
    int bits = 0;
    for (std::uint64_t g = gray; g; g &= g - 1) ++bits;
    if ((n - bits) % 2) total -= prod;
    else total += prod;
  }
  return total;
}

namespace detail {

template <Ring T>
struct NaiveSearch {
  const SparseTensor<T>& t;
  const FunctionSignature& sig;
  std::size_t n, d;
  std::vector<std::vector<char>> used;
  std::vector<std::vector<Index>> chosen;
  std::vector<Index> idx;
  T total{0};

  void run(std::size_t row, T prod, int parity) {
    if (row == n) {
      if (parity % 2) total -= prod;
      else total += prod;
      return;
    }
    choose(row, 0, prod, parity);
  }

  void choose(std::size_t row, std::size_t axis, const T& prod, int parity) {
    if (axis == d) {
      idx[0] = row;
      for (std::size_t l = 0; l < d; ++l) idx[l + 1] = chosen[l][row];
      T v = t.at(idx);
      if (is_zero(v)) return;
      run(row + 1, prod * v, parity);
      return;
    }
    for (Index x = 0; x < n; ++x) {
      if (used[axis][x]) continue;
      int extra = 0;
      if (sig.eps[axis] == Epsilon::Sign)
        for (std::size_t r = 0; r < row; ++r) extra += chosen[axis][r] > x;
      used[axis][x] = 1;
      chosen[axis][row] = x;
      choose(row, axis + 1, prod, parity + extra);
      used[axis][x] = 0;
    }
  }
};

} // namespace detail

/// F(M) by enumerating every tuple of bijections. Capped at n <= 7, d <= 3.
template <Ring T>
T naive_generalized(const SparseTensor<T>& t, const FunctionSignature& sig) {
  const std::size_t d = t.order() - 1;
  if (sig.free_axes() != d) throw IncompatibleInput("signature does not match tensor order");
  const std::size_t n = t.length(0);
  for (auto len : t.lengths())
    if (len != n) return T(0);
  if (n > 7 || d > 3) throw BudgetExceeded("naive_generalized is capped at n <= 7, d <= 3");
  detail::NaiveSearch<T> s{t, sig, n, d, std::vector<std::vector<char>>(d, std::vector<char>(n, 0)),
                           std::vector<std::vector<Index>>(d, std::vector<Index>(n, 0)), std::vector<Index>(d + 1),
                           T(0)};
  s.run(0, T(1), 0);
  return s.total;
}

/// Bareiss elimination over the rationals with row pivoting.
inline Rational exact_determinant(std::vector<std::vector<Rational>> a) {
  const std::size_t n = a.size();
  for (const auto& r : a)
    if (r.size() != n) throw IncompatibleInput("exact_determinant needs a square matrix");
  if (n == 0) return Rational(1);
  Rational prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::size_t p = k;
    while (p < n && sgn(a[p][k]) == 0) ++p;
    if (p == n) return Rational(0);
    if (p != k) {
      std::swap(a[p], a[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

template <Ring T>
Rational exact_determinant(const SparseTensor<T>& m) {
  if (m.order() != 2) throw IncompatibleInput("exact_determinant needs a matrix");
  std::vector<std::vector<Rational>> a(m.length(0), std::vector<Rational>(m.length(1), Rational(0)));
  for (const auto& e : m.entries()) a[e.index[0]][e.index[1]] = Rational(e.value);
  return exact_determinant(std::move(a));
}

/// Sum of |det(g_1, ..., g_n)| over one generator g_i from each zonotope.
inline Rational naive_mixed_volume(const ZonotopeSystem& zs) {
  const std::size_t n = zs.dimension();
  double budget = 1;
  for (std::size_t i = 0; i < n; ++i) budget *= static_cast<double>(zs.generators(i).size());
  if (budget > 1e6) throw BudgetExceeded("naive_mixed_volume enumeration exceeds 10^6 generator choices");
  for (std::size_t i = 0; i < n; ++i)
    if (zs.generators(i).empty()) return Rational(0);
  std::vector<std::size_t> pick(n, 0);
  Rational total = 0;
  while (true) {
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t i = 0; i < n; ++i) a[r][i] = zs.generators(i)[pick[i]][r];
    total += abs(exact_determinant(std::move(a)));
    std::size_t i = 0;
    while (i < n && ++pick[i] == zs.generators(i).size()) pick[i++] = 0;
    if (i == n) break;
  }
  return total;
}

} // namespace treeperm::oracle
