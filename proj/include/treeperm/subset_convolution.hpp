#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "treeperm/errors.hpp"
#include "treeperm/scalar.hpp"
#include "treeperm/tensor.hpp"

namespace treeperm {

using Mask = std::uint32_t;

/// Largest total bag cardinality any table may be indexed by.
inline constexpr std::size_t kMaxGroundSet = 30;

/// One labeled ground-set element; `part` is the tensor axis.
struct GroundElement {
  std::size_t part;
  Index index;
  bool operator==(const GroundElement&) const = default;
};

/// Set function on an ordered ground set, stored densely by bitmask. Bit i
/// of a mask refers to ground()[i].
template <Ring T>
class SubsetTable {
public:
  SubsetTable() : values_(1, T(0)) {}

  explicit SubsetTable(std::vector<GroundElement> ground) : ground_(std::move(ground)) {
    check_width(ground_.size());
    values_.assign(std::size_t{1} << ground_.size(), T(0));
  }

  SubsetTable(std::vector<GroundElement> ground, std::vector<T> values)
      : ground_(std::move(ground)), values_(std::move(values)) {
    check_width(ground_.size());
    if (values_.size() != (std::size_t{1} << ground_.size()))
      throw std::invalid_argument("table length must be 2^|ground set|");
  }

  /// g(∅) = 1, zero elsewhere.
  static SubsetTable unit(std::vector<GroundElement> ground) {
    SubsetTable t(std::move(ground));
    t.values_[0] = T(1);
    return t;
  }

  std::size_t width() const noexcept { return ground_.size(); }
  std::size_t size() const noexcept { return values_.size(); }
  Mask full_mask() const noexcept { return static_cast<Mask>(values_.size() - 1); }
  const std::vector<GroundElement>& ground() const noexcept { return ground_; }
  std::span<const T> values() const noexcept { return values_; }
  std::vector<T>& mutable_values() noexcept { return values_; }

  T& operator[](Mask m) { return values_[m]; }
  const T& operator[](Mask m) const { return values_[m]; }

  bool operator==(const SubsetTable&) const = default;

  static void check_width(std::size_t w) {
    if (w > kMaxGroundSet)
      throw WidthTooLarge("ground set of " + std::to_string(w) + " elements exceeds the cap of " +
                          std::to_string(kMaxGroundSet));
  }

private:
  std::vector<GroundElement> ground_;
  std::vector<T> values_;
};

/// Layer k holds the zeta transform of f restricted to sets of size k:
/// layer[k][S] = sum of f(T) over T ⊆ S with |T| = k.
template <Ring T>
std::vector<std::vector<T>> ranked_zeta(std::span<const T> f, std::size_t w) {
  const std::size_t size = std::size_t{1} << w;
  if (f.size() != size) throw std::invalid_argument("ranked_zeta: table length must be 2^w");
  std::vector<std::vector<T>> layer(w + 1, std::vector<T>(size, T(0)));
  for (std::size_t s = 0; s < size; ++s) layer[std::popcount(s)][s] = f[s];
  for (std::size_t k = 0; k <= w; ++k)
    for (std::size_t bit = 0; bit < w; ++bit)
      for (std::size_t s = 0; s < size; ++s)
        if (s >> bit & 1) layer[k][s] += layer[k][s ^ (std::size_t{1} << bit)];
  return layer;
}

/// Inverse of ranked_zeta: Möbius-transforms each layer and reads layer
/// |S| at S.
template <Ring T>
std::vector<T> ranked_mobius(std::vector<std::vector<T>> layer) {
  if (layer.empty()) throw std::invalid_argument("ranked_mobius: no layers");
  const std::size_t w = layer.size() - 1;
  const std::size_t size = std::size_t{1} << w;
  for (auto& l : layer)
    for (std::size_t bit = 0; bit < w; ++bit)
      for (std::size_t s = 0; s < size; ++s)
        if (s >> bit & 1) l[s] -= l[s ^ (std::size_t{1} << bit)];
  std::vector<T> out(size);
  for (std::size_t s = 0; s < size; ++s) out[s] = std::move(layer[std::popcount(s)][s]);
  return out;
}

enum class ConvolutionKernel {
  Auto,   ///< cheaper of Ranked and Sparse by operation count
  Ranked, ///< ranked zeta / pointwise / Möbius, w²2^w multiplications
  Sparse, ///< all disjoint pairs of nonzero entries
};

namespace detail {

inline void require_same_ground(const std::vector<GroundElement>& a, const std::vector<GroundElement>& b) {
  if (a != b) throw std::invalid_argument("subset convolution: ground-set mismatch");
}

template <Ring T>
std::vector<std::pair<Mask, const T*>> nonzeros(const SubsetTable<T>& t) {
  std::vector<std::pair<Mask, const T*>> out;
  for (std::size_t s = 0; s < t.size(); ++s)
    if (!is_zero(t[static_cast<Mask>(s)])) out.emplace_back(static_cast<Mask>(s), &t[static_cast<Mask>(s)]);
  return out;
}

inline std::uint64_t ranked_cost(std::size_t w) { return ((w + 1) * (w + 2) / 2) << w; }

template <Ring T>
SubsetTable<T> ranked_convolve(const SubsetTable<T>& a, const SubsetTable<T>& b, OpCounter* ops) {
  const std::size_t w = a.width();
  const std::size_t size = a.size();
  auto fa = ranked_zeta<T>(a.values(), w);
  auto fb = ranked_zeta<T>(b.values(), w);
  std::vector<std::vector<T>> h(w + 1, std::vector<T>(size, T(0)));
  for (std::size_t k = 0; k <= w; ++k)
    for (std::size_t i = 0; i <= k; ++i)
      for (std::size_t s = 0; s < size; ++s) h[k][s] += fa[i][s] * fb[k - i][s];
  if (ops) ops->add(ranked_cost(w));
  return SubsetTable<T>(a.ground(), ranked_mobius<T>(std::move(h)));
}

} // namespace detail

/// (a * b)(S) = sum over T ⊆ S of a(T)·b(S∖T). Division-free.
template <Ring T>
SubsetTable<T> subset_convolve(const SubsetTable<T>& a, const SubsetTable<T>& b, OpCounter* ops = nullptr,
                               ConvolutionKernel kernel = ConvolutionKernel::Auto) {
  detail::require_same_ground(a.ground(), b.ground());
  if (kernel == ConvolutionKernel::Ranked) return detail::ranked_convolve(a, b, ops);
  auto na = detail::nonzeros(a);
  auto nb = detail::nonzeros(b);
  if (kernel == ConvolutionKernel::Auto &&
      static_cast<std::uint64_t>(na.size()) * nb.size() > detail::ranked_cost(a.width()))
    return detail::ranked_convolve(a, b, ops);
  SubsetTable<T> out(a.ground());
  std::uint64_t mults = 0;
  for (auto [ma, va] : na)
    for (auto [mb, vb] : nb)
      if ((ma & mb) == 0) {
        out[ma | mb] += *va * *vb;
        ++mults;
      }
  if (ops) ops->add(mults);
  return out;
}

/// Left fold of pairwise convolutions.
template <Ring T>
SubsetTable<T> subset_convolve_many(std::span<const SubsetTable<T>> tables, OpCounter* ops = nullptr,
                                    ConvolutionKernel kernel = ConvolutionKernel::Auto) {
  if (tables.empty()) throw std::invalid_argument("subset_convolve_many: empty table list");
  for (const auto& t : tables) detail::require_same_ground(tables[0].ground(), t.ground());
  SubsetTable<T> acc = tables[0];
  for (std::size_t i = 1; i < tables.size(); ++i) acc = subset_convolve(acc, tables[i], ops, kernel);
  return acc;
}

/// result(A ∪ B) += sign(A, B)·acc(A)·next(B) over disjoint A, B. `sign`
/// returns +1 or -1. Dense inputs enumerate submask pairs (3^w); sparse
/// inputs enumerate nonzero pairs.
template <Ring T, class SignFn>
SubsetTable<T> signed_convolve(const SubsetTable<T>& acc, const SubsetTable<T>& next, SignFn&& sign,
                               OpCounter* ops = nullptr) {
  detail::require_same_ground(acc.ground(), next.ground());
  SubsetTable<T> out(acc.ground());
  auto na = detail::nonzeros(acc);
  auto nb = detail::nonzeros(next);
  std::uint64_t mults = 0;
  auto emit = [&](Mask a, const T& va, Mask b, const T& vb) {
    if (sign(a, b) > 0)
      out[a | b] += va * vb;
    else
      out[a | b] -= va * vb;
    ++mults;
  };
  std::uint64_t submask_pairs = 1;
  for (std::size_t i = 0; i < acc.width(); ++i) submask_pairs *= 3;
  if (static_cast<std::uint64_t>(na.size()) * nb.size() <= submask_pairs) {
    for (auto [ma, va] : na)
      for (auto [mb, vb] : nb)
        if ((ma & mb) == 0) emit(ma, *va, mb, *vb);
  } else {
    const Mask full = acc.full_mask();
    for (auto [ma, va] : na) {
      const Mask rest = full & ~ma;
      for (Mask b = rest;; b = (b - 1) & rest) {
        if (!is_zero(next[b])) emit(ma, *va, b, next[b]);
        if (b == 0) break;
      }
    }
  }
  if (ops) ops->add(mults);
  return out;
}

} // namespace treeperm
