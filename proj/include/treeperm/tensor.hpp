#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <istream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "treeperm/errors.hpp"
#include "treeperm/scalar.hpp"

namespace treeperm {

/// Axis position, 0-based in memory (files are 1-based).
using Index = std::size_t;

/// Order-(d+1) sparse array of exact scalars. Axis 0 is the row set A, axes
/// 1..d are the column sets X^1..X^d. Entries are kept sorted
/// lexicographically by index tuple, so one row's entries are contiguous.
template <Ring T>
class SparseTensor {
public:
  struct Entry {
    std::vector<Index> index;
    T value;
    bool operator==(const Entry&) const = default;
  };

  SparseTensor() = default;

  explicit SparseTensor(std::vector<std::size_t> lengths) : lengths_(std::move(lengths)) {
    if (lengths_.empty()) throw std::invalid_argument("tensor order must be at least 1");
    rebuild_rows();
  }

  /// Throws std::invalid_argument on out-of-bounds, duplicate or zero entries.
  SparseTensor(std::vector<std::size_t> lengths, std::vector<Entry> entries)
      : lengths_(std::move(lengths)), entries_(std::move(entries)) {
    if (lengths_.empty()) throw std::invalid_argument("tensor order must be at least 1");
    for (const auto& e : entries_) {
      if (e.index.size() != lengths_.size()) throw std::invalid_argument("entry arity does not match tensor order");
      for (std::size_t l = 0; l < lengths_.size(); ++l)
        if (e.index[l] >= lengths_[l]) throw std::invalid_argument("entry index out of bounds");
      if (is_zero(e.value)) throw std::invalid_argument("zero-valued entry");
    }
    std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) { return a.index < b.index; });
    for (std::size_t i = 1; i < entries_.size(); ++i)
      if (entries_[i - 1].index == entries_[i].index) throw std::invalid_argument("duplicate entry");
    rebuild_rows();
  }

  std::size_t order() const noexcept { return lengths_.size(); }
  const std::vector<std::size_t>& lengths() const noexcept { return lengths_; }
  std::size_t length(std::size_t axis) const { return lengths_.at(axis); }
  std::size_t nnz() const noexcept { return entries_.size(); }
  std::span<const Entry> entries() const noexcept { return entries_; }

  bool is_square() const noexcept {
    return std::all_of(lengths_.begin(), lengths_.end(), [&](std::size_t n) { return n == lengths_[0]; });
  }

  /// Entries whose axis-0 index is `row`.
  std::span<const Entry> row(Index r) const {
    return std::span<const Entry>(entries_).subspan(row_begin_.at(r), row_begin_.at(r + 1) - row_begin_.at(r));
  }

  const T* find(std::span<const Index> idx) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), idx, [](const Entry& e, std::span<const Index> key) {
      return std::lexicographical_compare(e.index.begin(), e.index.end(), key.begin(), key.end());
    });
    if (it != entries_.end() && std::equal(it->index.begin(), it->index.end(), idx.begin(), idx.end()))
      return &it->value;
    return nullptr;
  }

  T at(std::span<const Index> idx) const {
    const T* v = find(idx);
    return v ? *v : T(0);
  }
  T at(std::initializer_list<Index> idx) const { return at(std::span<const Index>(idx.begin(), idx.size())); }

  bool operator==(const SparseTensor& o) const { return lengths_ == o.lengths_ && entries_ == o.entries_; }

private:
  void rebuild_rows() {
    row_begin_.assign(lengths_[0] + 1, 0);
    for (const auto& e : entries_) ++row_begin_[e.index[0] + 1];
    for (std::size_t r = 0; r < lengths_[0]; ++r) row_begin_[r + 1] += row_begin_[r];
  }

  std::vector<std::size_t> lengths_;
  std::vector<Entry> entries_;
  std::vector<std::size_t> row_begin_;
};

/// Builds an order-2 tensor from a dense row-major table, skipping zeros.
template <Ring T, class V>
SparseTensor<T> matrix_from_dense(const std::vector<std::vector<V>>& rows) {
  std::size_t cols = rows.empty() ? 0 : rows[0].size();
  std::vector<typename SparseTensor<T>::Entry> entries;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw std::invalid_argument("ragged dense matrix");
    for (std::size_t j = 0; j < cols; ++j) {
      T v(rows[i][j]);
      if (!is_zero(v)) entries.push_back({{i, j}, v});
    }
  }
  return SparseTensor<T>({rows.size(), cols}, std::move(entries));
}

/// One sorted index subset per axis.
struct AxisSubsetSelection {
  std::vector<std::vector<Index>> axes;

  static AxisSubsetSelection full(std::span<const std::size_t> lengths) {
    AxisSubsetSelection s;
    for (auto n : lengths) {
      std::vector<Index> all(n);
      for (Index i = 0; i < n; ++i) all[i] = i;
      s.axes.push_back(std::move(all));
    }
    return s;
  }

  /// The selection `inner` expressed in the index space of the tensor that
  /// `*this` was applied to.
  AxisSubsetSelection compose(const AxisSubsetSelection& inner) const {
    AxisSubsetSelection out;
    for (std::size_t l = 0; l < axes.size(); ++l) {
      std::vector<Index> v;
      for (Index k : inner.axes.at(l)) v.push_back(axes[l].at(k));
      out.axes.push_back(std::move(v));
    }
    return out;
  }

  bool operator==(const AxisSubsetSelection&) const = default;
};

/// Restriction of `t` to the selected index sets, reindexed densely in
/// subset order.
template <Ring T>
SparseTensor<T> subtensor(const SparseTensor<T>& t, const AxisSubsetSelection& sel) {
  if (sel.axes.size() != t.order()) throw std::invalid_argument("selection arity does not match tensor order");
  constexpr Index kAbsent = static_cast<Index>(-1);
  std::vector<std::vector<Index>> pos(t.order());
  std::vector<std::size_t> lengths;
  for (std::size_t l = 0; l < t.order(); ++l) {
    pos[l].assign(t.length(l), kAbsent);
    const auto& ax = sel.axes[l];
    for (std::size_t k = 0; k < ax.size(); ++k) {
      if (ax[k] >= t.length(l)) throw std::invalid_argument("selection out of bounds");
      if (k > 0 && ax[k] <= ax[k - 1]) throw std::invalid_argument("selection must be sorted and unique");
      pos[l][ax[k]] = k;
    }
    lengths.push_back(ax.size());
  }
  std::vector<typename SparseTensor<T>::Entry> out;
  for (const auto& e : t.entries()) {
    std::vector<Index> idx(t.order());
    bool keep = true;
    for (std::size_t l = 0; l < t.order() && keep; ++l) {
      idx[l] = pos[l][e.index[l]];
      keep = idx[l] != kAbsent;
    }
    if (keep) out.push_back({std::move(idx), e.value});
  }
  return SparseTensor<T>(std::move(lengths), std::move(out));
}

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline bool skip_line(const std::vector<std::string_view>& tok) { return tok.empty() || tok[0] == "c"; }

inline std::size_t parse_count(std::string_view tok, std::size_t line) {
  if (tok.empty()) throw FormatError("expected a non-negative integer", line);
  std::size_t v = 0;
  for (char ch : tok) {
    if (ch < '0' || ch > '9') throw FormatError("expected a non-negative integer, got '" + std::string(tok) + "'", line);
    v = v * 10 + static_cast<std::size_t>(ch - '0');
  }
  return v;
}

} // namespace detail

/// Reads the `tensor <order> <len_0> ...` text format.
template <Ring T>
SparseTensor<T> parse_tensor(std::istream& in) {
  std::string raw;
  std::size_t lineno = 0;
  std::vector<std::size_t> lengths;
  bool have_header = false;
  std::vector<typename SparseTensor<T>::Entry> entries;
  std::vector<std::size_t> entry_lines;
  while (std::getline(in, raw)) {
    ++lineno;
    auto tok = detail::split_ws(raw);
    if (detail::skip_line(tok)) continue;
    if (!have_header) {
      if (tok[0] != "tensor") throw FormatError("expected 'tensor' header", lineno);
      if (tok.size() < 2) throw FormatError("missing tensor order", lineno);
      std::size_t order = detail::parse_count(tok[1], lineno);
      if (order < 1) throw FormatError("tensor order must be at least 1", lineno);
      if (tok.size() != order + 2) throw FormatError("header must list one length per axis", lineno);
      for (std::size_t l = 0; l < order; ++l) lengths.push_back(detail::parse_count(tok[l + 2], lineno));
      have_header = true;
      continue;
    }
    if (tok.size() != lengths.size() + 1) throw FormatError("entry line must have order+1 fields", lineno);
    std::vector<Index> idx(lengths.size());
    for (std::size_t l = 0; l < lengths.size(); ++l) {
      std::size_t v = detail::parse_count(tok[l], lineno);
      if (v < 1 || v > lengths[l]) throw FormatError("index out of bounds on axis " + std::to_string(l), lineno);
      idx[l] = v - 1;
    }
    T value;
    try {
      value = parse_scalar<T>(tok.back());
    } catch (const std::invalid_argument& e) {
      throw FormatError(e.what(), lineno);
    }
    if (is_zero(value)) throw FormatError("zero-valued entry", lineno);
    entries.push_back({std::move(idx), std::move(value)});
    entry_lines.push_back(lineno);
  }
  if (!have_header) throw FormatError("missing 'tensor' header", lineno);
  std::vector<std::size_t> order(entries.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return entries[a].index < entries[b].index; });
  for (std::size_t i = 1; i < order.size(); ++i)
    if (entries[order[i - 1]].index == entries[order[i]].index)
      throw FormatError("duplicate entry", entry_lines[order[i]]);
  return SparseTensor<T>(std::move(lengths), std::move(entries));
}

template <Ring T>
SparseTensor<T> parse_tensor(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_tensor<T>(in);
}

template <Ring T>
std::string write_tensor(const SparseTensor<T>& t) {
  std::ostringstream out;
  out << "tensor " << t.order();
  for (auto n : t.lengths()) out << ' ' << n;
  out << '\n';
  for (const auto& e : t.entries()) {
    for (auto i : e.index) out << (i + 1) << ' ';
    out << to_string(e.value) << '\n';
  }
  return out.str();
}

} // namespace treeperm
