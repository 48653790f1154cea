#pragma once

#include <bit>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "treeperm/errors.hpp"
#include "treeperm/scalar.hpp"
#include "treeperm/subset_convolution.hpp"
#include "treeperm/tensor.hpp"

namespace treeperm {

enum class Epsilon { Plus, Sign };

/// One epsilon per free axis X^1..X^d of the generalized function F.
struct FunctionSignature {
  std::vector<Epsilon> eps;

  FunctionSignature() = default;
  explicit FunctionSignature(std::vector<Epsilon> e) : eps(std::move(e)) {
    if (eps.empty()) throw std::invalid_argument("signature needs at least one free axis");
  }

  std::size_t free_axes() const noexcept { return eps.size(); }
  std::size_t num_signed() const noexcept {
    std::size_t s = 0;
    for (auto e : eps) s += e == Epsilon::Sign;
    return s;
  }
  bool all_plus() const noexcept { return num_signed() == 0; }

  static FunctionSignature permanent() { return FunctionSignature({Epsilon::Plus}); }
  static FunctionSignature determinant() { return FunctionSignature({Epsilon::Sign}); }
  static FunctionSignature mixed_discriminant() { return FunctionSignature({Epsilon::Sign, Epsilon::Sign}); }
  static FunctionSignature hyperdeterminant(std::size_t d) {
    if ((d + 1) % 2) throw IncompatibleInput("hyperdeterminant requires even tensor order");
    return FunctionSignature(std::vector<Epsilon>(d, Epsilon::Sign));
  }
  static FunctionSignature multidim_permanent(std::size_t d) { return FunctionSignature(std::vector<Epsilon>(d, Epsilon::Plus)); }

  bool operator==(const FunctionSignature&) const = default;
};

/// Ground set of a block: axis 0 elements first, then axis 1, and so on,
/// each in increasing index order.
inline std::vector<GroundElement> block_ground(const AxisSubsetSelection& block) {
  std::vector<GroundElement> g;
  for (std::size_t l = 0; l < block.axes.size(); ++l)
    for (Index i : block.axes[l]) g.push_back({l, i});
  return g;
}

/// Values of the generalized function on every equal-cardinality
/// sub-selection of `block`, keyed by packed mask over block_ground(block).
/// Unbalanced masks hold 0; the empty mask holds 1. Each value is the
/// expansion along the smallest selected row.
template <Ring T>
SubsetTable<T> all_subvalues(const SparseTensor<T>& t, const AxisSubsetSelection& block, const FunctionSignature& sig,
                             OpCounter* ops = nullptr) {
  const std::size_t order = t.order();
  if (block.axes.size() != order) throw std::invalid_argument("block arity does not match tensor order");
  if (sig.free_axes() + 1 != order) throw IncompatibleInput("signature does not match tensor order");
  std::size_t w = 0;
  std::vector<unsigned> offset(order + 1, 0);
  for (std::size_t l = 0; l < order; ++l) {
    w += block.axes[l].size();
    offset[l + 1] = static_cast<unsigned>(w);
  }
  SubsetTable<T>::check_width(w);
  SubsetTable<T> table(block_ground(block));

  // Local entries of each block row: packed column bits and value.
  struct Local {
    std::vector<unsigned> bit;
    const T* value;
  };
  std::vector<std::vector<Local>> rows(block.axes[0].size());
  for (std::size_t r = 0; r < block.axes[0].size(); ++r) {
    for (const auto& e : t.row(block.axes[0][r])) {
      Local loc{{}, &e.value};
      bool inside = true;
      for (std::size_t l = 1; l < order && inside; ++l) {
        const auto& ax = block.axes[l];
        auto it = std::lower_bound(ax.begin(), ax.end(), e.index[l]);
        inside = it != ax.end() && *it == e.index[l];
        if (inside) loc.bit.push_back(offset[l] + static_cast<unsigned>(it - ax.begin()));
      }
      if (inside) rows[r].push_back(std::move(loc));
    }
  }

  std::vector<Mask> axis_mask(order);
  for (std::size_t l = 0; l < order; ++l)
    axis_mask[l] = static_cast<Mask>(((std::uint64_t{1} << offset[l + 1]) - 1) ^ ((std::uint64_t{1} << offset[l]) - 1));

  table[0] = T(1);
  std::uint64_t mults = 0;
  const std::size_t size = std::size_t{1} << w;
  for (std::size_t s = 1; s < size; ++s) {
    const Mask m = static_cast<Mask>(s);
    const int k = std::popcount(m & axis_mask[0]);
    bool balanced = k > 0;
    for (std::size_t l = 1; l < order && balanced; ++l) balanced = std::popcount(m & axis_mask[l]) == k;
    if (!balanced) continue;
    const unsigned a0 = static_cast<unsigned>(std::countr_zero(m));
    const Mask rest = m & ~(Mask{1} << a0);
    T acc(0);
    for (const auto& loc : rows[a0]) {
      Mask sub = rest;
      bool ok = true, negative = false;
      for (std::size_t l = 1; l < order; ++l) {
        const Mask b = Mask{1} << loc.bit[l - 1];
        if (!(sub & b)) {
          ok = false;
          break;
        }
        sub &= ~b;
        if (sig.eps[l - 1] == Epsilon::Sign && (std::popcount(m & axis_mask[l] & (b - 1)) & 1)) negative = !negative;
      }
      if (!ok) continue;
      const T& below = table[sub];
      if (is_zero(below)) continue;
      ++mults;
      if (negative)
        acc -= *loc.value * below;
      else
        acc += *loc.value * below;
    }
    table[m] = std::move(acc);
  }
  if (ops) ops->add(mults);
  return table;
}

/// Whole tensor as a single block.
template <Ring T>
SubsetTable<T> all_subvalues(const SparseTensor<T>& t, const FunctionSignature& sig, OpCounter* ops = nullptr) {
  return all_subvalues(t, AxisSubsetSelection::full(t.lengths()), sig, ops);
}

/// n×n matrix with 1 on the diagonal and -1 on the superdiagonal of rows
/// 1..n-1, and last row s. Its determinant is s_1 + ... + s_n.
template <Ring T>
SparseTensor<T> lemma_sum_matrix(std::span<const T> s) {
  const std::size_t n = s.size();
  if (n == 0) throw std::invalid_argument("lemma_sum_matrix needs at least one value");
  std::vector<typename SparseTensor<T>::Entry> entries;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    entries.push_back({{i, i}, T(1)});
    entries.push_back({{i, i + 1}, T(-1)});
  }
  for (std::size_t j = 0; j < n; ++j)
    if (!is_zero(s[j])) entries.push_back({{n - 1, j}, s[j]});
  return SparseTensor<T>({n, n}, std::move(entries));
}

template <Ring T>
SparseTensor<T> lemma_sum_matrix(const std::vector<T>& s) {
  return lemma_sum_matrix<T>(std::span<const T>(s));
}

} // namespace treeperm
