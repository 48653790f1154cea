#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "treeperm/scalar.hpp"
#include "treeperm/subset_convolution.hpp"
#include "treeperm/tensor.hpp"

namespace treeperm {

/// Sign of a bijection onto an ordered set, given as its list of images.
/// Images may be any distinct values; they are ranked first. Throws
/// std::invalid_argument when two images coincide.
template <Ring T = int>
T perm_sign(std::span<const Index> images) {
  const std::size_t n = images.size();
  std::vector<std::size_t> rank(n);
  bool dense = true;
  std::vector<char> hit(n, 0);
  for (std::size_t i = 0; i < n && dense; ++i) {
    if (images[i] >= n || hit[images[i]]) dense = false;
    else hit[images[i]] = 1;
  }
  if (dense) {
    std::copy(images.begin(), images.end(), rank.begin());
  } else {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return images[a] < images[b]; });
    for (std::size_t k = 0; k < n; ++k) {
      if (k > 0 && images[order[k]] == images[order[k - 1]]) throw std::invalid_argument("perm_sign: not a bijection");
      rank[order[k]] = k;
    }
  }
  std::vector<char> seen(n, 0);
  std::size_t even_cycles = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = rank[j]) {
      seen[j] = 1;
      ++len;
    }
    if (len % 2 == 0) ++even_cycles;
  }
  return even_cycles % 2 ? T(-1) : T(1);
}

template <Ring T = int>
T perm_sign(std::initializer_list<Index> images) {
  return perm_sign<T>(std::span<const Index>(images.begin(), images.size()));
}

/// Sign of the permutation putting the (sorted) blocks one after another.
template <Ring T = int>
T partition_sign(const std::vector<std::vector<Index>>& blocks) {
  std::vector<Index> concat;
  for (auto b : blocks) {
    std::sort(b.begin(), b.end());
    if (std::adjacent_find(b.begin(), b.end()) != b.end()) throw std::invalid_argument("partition_sign: repeated element");
    concat.insert(concat.end(), b.begin(), b.end());
  }
  try {
    return perm_sign<T>(concat);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("partition_sign: blocks overlap");
  }
}

/// Parity data for one ordered axis of a packed mask: the visible elements
/// occupy bits [offset, offset + len) in increasing order, and two hidden
/// blocks (already-accumulated and incoming) sit outside the mask. With it
/// the sign of the two-block partition (A ∪ H_acc, B ∪ H_next) costs O(w).
class CrossInversionTable {
public:
  CrossInversionTable() = default;

  /// `keys` must be strictly increasing; hidden blocks need not be sorted
  /// but must be disjoint from `keys` and from each other.
  CrossInversionTable(std::span<const Index> keys, unsigned offset, std::span<const Index> acc_hidden,
                      std::span<const Index> next_hidden)
      : offset_(offset) {
    if (keys.size() + offset > kMaxGroundSet) throw std::invalid_argument("CrossInversionTable: axis exceeds mask width");
    axis_ = keys.empty() ? 0 : static_cast<Mask>(((std::uint64_t{1} << keys.size()) - 1) << offset);
    std::vector<Index> acc(acc_hidden.begin(), acc_hidden.end()), nxt(next_hidden.begin(), next_hidden.end());
    std::sort(acc.begin(), acc.end());
    std::sort(nxt.begin(), nxt.end());
    for (std::size_t i = 0; i < keys.size(); ++i) {
      // N_x for x against the incoming hidden block, and hidden-above counts.
      auto below_next = static_cast<std::size_t>(std::lower_bound(nxt.begin(), nxt.end(), keys[i]) - nxt.begin());
      auto above_acc = acc.end() - std::upper_bound(acc.begin(), acc.end(), keys[i]);
      if (below_next & 1) odd_vs_next_ |= Mask{1} << (offset + i);
      if (above_acc & 1) odd_vs_acc_ |= Mask{1} << (offset + i);
    }
    std::size_t cross = 0;
    for (Index h : acc) cross += static_cast<std::size_t>(std::lower_bound(nxt.begin(), nxt.end(), h) - nxt.begin());
    constant_ = cross & 1;
  }

  Mask axis_mask() const noexcept { return axis_; }
  bool constant_parity() const noexcept { return constant_; }

  /// Parity of the cross inversions between (A ∪ H_acc) and (B ∪ H_next),
  /// counting pairs (x, y) with x in the first block, y in the second, x > y.
  bool parity(Mask a, Mask b) const noexcept {
    a &= axis_;
    b &= axis_;
    unsigned p = constant_ ^ (std::popcount(a & odd_vs_next_) & 1u) ^ (std::popcount(b & odd_vs_acc_) & 1u);
    while (b) {
      int j = std::countr_zero(b);
      b &= b - 1;
      p ^= std::popcount(static_cast<Mask>(static_cast<std::uint64_t>(a) >> (j + 1))) & 1u;
    }
    return p & 1u;
  }

private:
  unsigned offset_ = 0;
  Mask axis_ = 0;
  Mask odd_vs_next_ = 0;
  Mask odd_vs_acc_ = 0;
  bool constant_ = false;
};

/// ±1 sign of the split (a, b) over every table's axis. Throws
/// std::invalid_argument if the masks overlap.
inline int sign_oracle(std::span<const CrossInversionTable> tables, Mask a, Mask b) {
  if (a & b) throw std::invalid_argument("sign_oracle: overlapping masks");
  bool p = false;
  for (const auto& t : tables) p ^= t.parity(a, b);
  return p ? -1 : 1;
}

inline int sign_oracle(const CrossInversionTable& table, Mask a, Mask b) {
  return sign_oracle(std::span<const CrossInversionTable>(&table, 1), a, b);
}

} // namespace treeperm
