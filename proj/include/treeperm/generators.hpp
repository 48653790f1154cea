#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "treeperm/scalar.hpp"
#include "treeperm/tensor.hpp"
#include "treeperm/tree_decomposition.hpp"

namespace treeperm {

using Rng = std::mt19937_64;

namespace detail {

/// Uniform nonzero integer in [lo, hi]; requires the range to contain one.
inline long nonzero_in(Rng& rng, long lo, long hi) {
  if (lo > hi || (lo == 0 && hi == 0)) throw std::invalid_argument("value range contains no nonzero integer");
  std::uniform_int_distribution<long> dist(lo, hi);
  for (;;)
    if (long v = dist(rng); v != 0) return v;
}

} // namespace detail

/// n×n matrix with M[i][j] != 0 exactly when -w1 <= j - i <= w2, entries
/// uniform in [lo, hi] \ {0}.
template <Ring T>
SparseTensor<T> band_matrix(std::size_t n, std::size_t w1, std::size_t w2, Rng& rng, long lo = 1, long hi = 9) {
  std::vector<typename SparseTensor<T>::Entry> entries;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j0 = i > w1 ? i - w1 : 0, j1 = std::min(n - 1, i + w2);
    for (std::size_t j = j0; j <= j1; ++j) entries.push_back({{i, j}, T(detail::nonzero_in(rng, lo, hi))});
  }
  return SparseTensor<T>({n, n}, std::move(entries));
}

/// Path decomposition of a band matrix's column graph with bags
/// {x_i, ..., x_{i+w1+w2}}.
inline TreeDecomposition band_column_decomposition(std::size_t n, std::size_t w1, std::size_t w2) {
  const std::size_t span = std::min(n, w1 + w2 + 1);
  const std::size_t count = n - span + 1;
  std::vector<Bag> bags;
  std::vector<std::size_t> parent;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<Index> chi(span);
    std::iota(chi.begin(), chi.end(), i);
    bags.push_back(Bag(std::vector<std::vector<Index>>{chi}));
    parent.push_back(i == 0 ? TreeDecomposition::kNoParent : i - 1);
  }
  return TreeDecomposition(1, WidthConvention::SinglePart, std::move(bags), std::move(parent));
}

/// Path decomposition of a band matrix's symmetrized graph with bags
/// {i, ..., i+max(w1, w2)}.
inline TreeDecomposition band_symmetrized_decomposition(std::size_t n, std::size_t w1, std::size_t w2) {
  return band_column_decomposition(n, std::max(w1, w2), 0);
}

/// The m²×m² family whose symmetrized graph contains the m×m grid while at
/// most two entries per row are nonzero (1-based):
///   M[a_i, x_{i+1}] = 1 if m does not divide i,
///   M[a_i, x_{i+m}] = 2 for i <= n - m,
///   M[a_{(m-i+1)m}, x_i] = 3 for 1 <= i <= m,
///   M[a_{n-i}, x_{im+1}] = 3 for 1 <= i < m.
template <Ring T>
SparseTensor<T> grid_matrix(std::size_t m) {
  if (m < 1) throw std::invalid_argument("grid family needs m >= 1");
  const std::size_t n = m * m;
  std::vector<typename SparseTensor<T>::Entry> entries;
  auto put = [&](std::size_t a, std::size_t x, long v) { entries.push_back({{a - 1, x - 1}, T(v)}); };
  for (std::size_t i = 1; i <= n; ++i) {
    if (i % m != 0 && i + 1 <= n) put(i, i + 1, 1);
    if (i + m <= n) put(i, i + m, 2);
  }
  for (std::size_t i = 1; i <= m; ++i) put((m - i + 1) * m, i, 3);
  for (std::size_t i = 1; i < m; ++i) put(n - i, i * m + 1, 3);
  return SparseTensor<T>({n, n}, std::move(entries));
}

/// Random n×n matrix with at most two nonzeros per row: a random
/// permutation keeps a perfect matching, plus one extra random column.
template <Ring T>
SparseTensor<T> two_per_row_matrix(std::size_t n, Rng& rng, long lo = 1, long hi = 9) {
  std::vector<std::size_t> sigma(n);
  std::iota(sigma.begin(), sigma.end(), std::size_t{0});
  std::shuffle(sigma.begin(), sigma.end(), rng);
  std::vector<typename SparseTensor<T>::Entry> entries;
  std::uniform_int_distribution<std::size_t> col(0, n ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) {
    entries.push_back({{i, sigma[i]}, T(detail::nonzero_in(rng, lo, hi))});
    std::size_t extra = col(rng);
    if (extra != sigma[i]) entries.push_back({{i, extra}, T(detail::nonzero_in(rng, lo, hi))});
  }
  return SparseTensor<T>({n, n}, std::move(entries));
}

/// Each index tuple is nonzero with probability `density`, with a value
/// uniform in [lo, hi] \ {0}.
template <Ring T>
SparseTensor<T> random_tensor(std::vector<std::size_t> lengths, double density, Rng& rng, long lo = -5, long hi = 5) {
  std::vector<typename SparseTensor<T>::Entry> entries;
  std::bernoulli_distribution keep(density);
  std::vector<Index> idx(lengths.size(), 0);
  bool empty = std::any_of(lengths.begin(), lengths.end(), [](std::size_t n) { return n == 0; });
  while (!empty) {
    if (keep(rng)) entries.push_back({idx, T(detail::nonzero_in(rng, lo, hi))});
    std::size_t l = lengths.size();
    while (l > 0) {
      --l;
      if (++idx[l] < lengths[l]) break;
      idx[l] = 0;
      if (l == 0) empty = true;
    }
  }
  return SparseTensor<T>(std::move(lengths), std::move(entries));
}

template <Ring T>
SparseTensor<T> random_matrix(std::size_t n, double density, Rng& rng, long lo = -5, long hi = 5) {
  return random_tensor<T>({n, n}, density, rng, lo, hi);
}

/// Identity-like tensor: M[i, i, ..., i] = 1.
template <Ring T>
SparseTensor<T> diagonal_tensor(std::size_t n, std::size_t order) {
  std::vector<typename SparseTensor<T>::Entry> entries;
  for (std::size_t i = 0; i < n; ++i) entries.push_back({std::vector<Index>(order, i), T(1)});
  return SparseTensor<T>(std::vector<std::size_t>(order, n), std::move(entries));
}

} // namespace treeperm
