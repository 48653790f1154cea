#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "treeperm/base_cases.hpp"
#include "treeperm/errors.hpp"
#include "treeperm/graph.hpp"
#include "treeperm/signs.hpp"
#include "treeperm/subset_convolution.hpp"
#include "treeperm/tensor.hpp"
#include "treeperm/tree_decomposition.hpp"

namespace treeperm {

struct EngineOptions {
  /// Worker threads for the node sweep. Results do not depend on it.
  unsigned threads = 1;
  ConvolutionKernel kernel = ConvolutionKernel::Auto;
  /// Keep the root's table in the result.
  bool keep_root_table = false;
};

struct EngineStats {
  std::size_t nodes = 0;
  std::size_t max_bag = 0;
  std::size_t width_single_part = 0;
  std::size_t width_multi_part = 0;
  /// Largest number of table cells alive while one node is combined: its
  /// own table, the accumulator, and its children's tables.
  std::uint64_t peak_cells = 0;
  std::uint64_t ring_mults = 0;
};

template <Ring T>
struct EngineResult {
  T value;
  EngineStats stats;
  std::optional<SubsetTable<T>> root_table;
};

namespace detail {

/// Index of `i` in the sorted list `v`, or -1.
inline long position_in(const std::vector<Index>& v, Index i) {
  auto it = std::lower_bound(v.begin(), v.end(), i);
  return it != v.end() && *it == i ? static_cast<long>(it - v.begin()) : -1;
}

struct Layout {
  AxisSubsetSelection sel;
  std::vector<unsigned> offset; // per axis, plus total
  std::size_t width = 0;

  explicit Layout(const Bag& b) {
    sel.axes = b.parts;
    offset.assign(b.parts.size() + 1, 0);
    for (std::size_t l = 0; l < b.parts.size(); ++l) offset[l + 1] = offset[l] + static_cast<unsigned>(b.parts[l].size());
    width = offset.back();
  }

  Mask axis_mask(std::size_t l) const {
    return static_cast<Mask>(((std::uint64_t{1} << offset[l + 1]) - 1) ^ ((std::uint64_t{1} << offset[l]) - 1));
  }
  Mask full() const { return static_cast<Mask>((std::uint64_t{1} << width) - 1); }
};

/// Bag overlap of a parent and child, expressed as bit maps.
struct Overlap {
  Mask lambda = 0;                                  // shared bits, parent ground
  Mask delta = 0;                                   // child-only bits, child ground
  std::vector<std::pair<unsigned, unsigned>> pairs; // parent bit -> child bit

  Overlap(const Bag& parent, const Layout& lp, const Bag& child, const Layout& lc) {
    for (std::size_t l = 0; l < child.parts.size(); ++l)
      for (std::size_t k = 0; k < child.parts[l].size(); ++k) {
        long p = position_in(parent.parts[l], child.parts[l][k]);
        unsigned cbit = lc.offset[l] + static_cast<unsigned>(k);
        if (p < 0) {
          delta |= Mask{1} << cbit;
        } else {
          unsigned tbit = lp.offset[l] + static_cast<unsigned>(p);
          lambda |= Mask{1} << tbit;
          pairs.emplace_back(tbit, cbit);
        }
      }
  }

  Mask to_child(Mask m) const {
    Mask out = delta;
    for (auto [tb, cb] : pairs)
      if (m >> tb & 1) out |= Mask{1} << cb;
    return out;
  }
};

inline std::vector<Index> set_union(const std::vector<Index>& a, const std::vector<Index>& b) {
  std::vector<Index> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline std::vector<Index> set_difference(const std::vector<Index>& a, const std::vector<Index>& b) {
  std::vector<Index> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

/// Runs `work(t)` over every node, children strictly before parents. With
/// more than one thread, nodes of equal height run concurrently.
template <class Work>
void sweep(const TreeDecomposition& td, unsigned threads, Work&& work) {
  auto post = td.post_order();
  if (threads <= 1 || td.size() < 2) {
    for (std::size_t t : post) work(t);
    return;
  }
  std::vector<std::size_t> height(td.size(), 0);
  std::size_t max_h = 0;
  for (std::size_t t : post) {
    for (std::size_t c : td.children(t)) height[t] = std::max(height[t], height[c] + 1);
    max_h = std::max(max_h, height[t]);
  }
  std::vector<std::vector<std::size_t>> levels(max_h + 1);
  for (std::size_t t : post) levels[height[t]].push_back(t);
  for (const auto& level : levels) {
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
      for (std::size_t k; (k = next.fetch_add(1)) < level.size();) {
        try {
          work(level[k]);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = level.size();
        }
      }
    };
    std::vector<std::jthread> pool;
    unsigned n = std::min<unsigned>(threads, static_cast<unsigned>(level.size()));
    for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
    worker();
    pool.clear();
    if (error) std::rethrow_exception(error);
  }
}

template <Ring T>
bool has_empty_slice(const SparseTensor<T>& t) {
  for (std::size_t l = 0; l < t.order(); ++l) {
    std::vector<char> hit(t.length(l), 0);
    for (const auto& e : t.entries()) hit[e.index[l]] = 1;
    if (std::find(hit.begin(), hit.end(), 0) != hit.end()) return true;
  }
  return false;
}

inline EngineStats shape_stats(const TreeDecomposition& td) {
  EngineStats s;
  s.nodes = td.size();
  s.max_bag = td.max_bag_size();
  s.width_multi_part = td.width_multi_part();
  s.width_single_part = td.width_single_part();
  return s;
}

inline void check_bag_cap(const TreeDecomposition& td) {
  for (std::size_t t = 0; t < td.size(); ++t)
    if (td.bag(t).size() > kMaxGroundSet)
      throw WidthTooLarge("bag " + std::to_string(t + 1) + " has " + std::to_string(td.bag(t).size()) +
                          " elements, above the cap of " + std::to_string(kMaxGroundSet));
}

} // namespace detail

/// Permanent of a matrix from a decomposition of its column graph.
/// Each node combines the permanents of its own rows on every column subset
/// of its bag with its children's tables by one subset convolution.
template <Ring T>
EngineResult<T> cols_perm(const SparseTensor<T>& m, const TreeDecomposition& td, EngineOptions opt = {}) {
  if (m.order() != 2) throw IncompatibleInput("cols_perm needs a matrix (order 2)");
  if (td.num_parts() != 1) throw IncompatibleInput("cols_perm needs a column-graph decomposition");
  validate(td, column_graph(m));
  detail::check_bag_cap(td);
  EngineResult<T> res{T(0), detail::shape_stats(td), std::nullopt};
  if (!m.is_square() || detail::has_empty_slice(m)) return res;

  RowAssignment assign = assign_rows(td, m);
  std::vector<std::vector<Index>> rows_of(td.size());
  for (Index a = 0; a < assign.node.size(); ++a) rows_of[assign.node[a]].push_back(a);
  for (std::size_t t = 0; t < td.size(); ++t)
    if (rows_of[t].size() > td.bag(t).parts[0].size()) return res;

  const auto sig = FunctionSignature::permanent();
  std::vector<std::optional<SubsetTable<T>>> P(td.size());
  std::vector<std::uint64_t> mults(td.size(), 0), cells(td.size(), 0);
  detail::sweep(td, opt.threads, [&](std::size_t t) {
    OpCounter ops;
    const auto& chi = td.bag(t).parts[0];
    const std::size_t w = chi.size(), r = rows_of[t].size();
    AxisSubsetSelection block{{rows_of[t], chi}};
    SubsetTable<T> local = all_subvalues(m, block, sig, &ops);
    std::vector<GroundElement> ground;
    for (Index x : chi) ground.push_back({1, x});
    SubsetTable<T> qt(ground);
    const Mask rows_full = static_cast<Mask>((std::uint64_t{1} << r) - 1);
    for (std::size_t y = 0; y < qt.size(); ++y)
      if (std::popcount(y) == static_cast<int>(r)) qt[static_cast<Mask>(y)] = local[rows_full | static_cast<Mask>(y << r)];
    std::vector<SubsetTable<T>> factors;
    factors.push_back(std::move(qt));
    std::uint64_t live = 2 * (std::uint64_t{1} << w);
    for (std::size_t c : td.children(t)) {
      Bag pb(std::vector<std::vector<Index>>{chi}), cb(td.bag(c).parts);
      detail::Layout lp(pb), lc(cb);
      detail::Overlap ov(pb, lp, cb, lc);
      SubsetTable<T> qc(ground);
      const SubsetTable<T>& pc = *P[c];
      live += pc.size();
      for (Mask s = ov.lambda;; s = (s - 1) & ov.lambda) {
        qc[s] = pc[ov.to_child(s)];
        if (s == 0) break;
      }
      P[c].reset();
      factors.push_back(std::move(qc));
    }
    P[t] = subset_convolve_many<T>(factors, &ops, opt.kernel);
    mults[t] = ops.mults;
    cells[t] = live;
  });
  const SubsetTable<T>& root = *P[td.root()];
  res.value = root[root.full_mask()];
  for (std::size_t t = 0; t < td.size(); ++t) {
    res.stats.ring_mults += mults[t];
    res.stats.peak_cells = std::max(res.stats.peak_cells, cells[t]);
  }
  if (opt.keep_root_table) res.root_table = std::move(P[td.root()]);
  return res;
}

/// Generalized function F of a square order-(d+1) tensor from a
/// multipartite decomposition of its (d+1)-partite graph.
///
/// Node t holds P_t(M) for masks M over its bag: the value on the rows and
/// columns visible in M plus everything forgotten below t. It is the
/// convolution of Q_t, then for each child c the table of (-1)^{|D|}Q_t on
/// the shared bags (the inclusion-exclusion correction) and the child's
/// table shifted by its private bag elements. Signed axes fold pairwise with
/// partition signs computed against the hidden elements of each block; the
/// row axis contributes once per signed axis, so only its parity matters.
template <Ring T>
EngineResult<T> generalized_engine(const SparseTensor<T>& t, const FunctionSignature& sig, const TreeDecomposition& td,
                                   EngineOptions opt = {}) {
  const std::size_t order = t.order();
  if (sig.free_axes() + 1 != order) throw IncompatibleInput("signature does not match tensor order");
  if (td.num_parts() != order) throw IncompatibleInput("decomposition part count does not match tensor order");
  validate(td, multipartite_graph(t));
  detail::check_bag_cap(td);
  EngineResult<T> res{T(0), detail::shape_stats(td), std::nullopt};
  if (!t.is_square() || detail::has_empty_slice(t)) return res;

  // Axes whose ordered-partition signs enter the fold.
  std::vector<std::size_t> weighted;
  if (sig.num_signed() % 2) weighted.push_back(0);
  for (std::size_t l = 1; l < order; ++l)
    if (sig.eps[l - 1] == Epsilon::Sign) weighted.push_back(l);
  const bool signed_fold = !weighted.empty();

  std::vector<std::optional<SubsetTable<T>>> P(td.size());
  std::vector<std::vector<std::vector<Index>>> hidden(td.size());
  std::vector<std::uint64_t> mults(td.size(), 0), cells(td.size(), 0);

  detail::sweep(td, opt.threads, [&](std::size_t node) {
    OpCounter ops;
    const Bag& bag = td.bag(node);
    detail::Layout lt(bag);
    SubsetTable<T> qt = all_subvalues(t, lt.sel, sig, &ops);
    SubsetTable<T> acc = qt;
    std::uint64_t live = 2 * std::uint64_t{qt.size()};
    const Mask rows_mask = lt.axis_mask(0);
    std::vector<std::vector<Index>> acc_hidden(order);
    std::vector<CrossInversionTable> signs(weighted.size());

    auto fold = [&](const SubsetTable<T>& next, const std::vector<std::vector<Index>>* next_hidden) {
      if (!signed_fold) {
        acc = subset_convolve(acc, next, &ops, opt.kernel);
        return;
      }
      static const std::vector<Index> none;
      for (std::size_t k = 0; k < weighted.size(); ++k) {
        std::size_t l = weighted[k];
        signs[k] = CrossInversionTable(bag.parts[l], lt.offset[l], acc_hidden[l], next_hidden ? (*next_hidden)[l] : none);
      }
      acc = signed_convolve(acc, next, [&](Mask a, Mask b) { return sign_oracle(signs, a, b); }, &ops);
    };

    for (std::size_t c : td.children(node)) {
      const Bag& cb = td.bag(c);
      detail::Layout lc(cb);
      detail::Overlap ov(bag, lt, cb, lc);
      SubsetTable<T> tc(qt.ground()), cc(qt.ground());
      const SubsetTable<T>& pc = *P[c];
      live += pc.size();
      for (Mask s = ov.lambda;; s = (s - 1) & ov.lambda) {
        if (!is_zero(qt[s])) tc[s] = std::popcount(s & rows_mask) % 2 ? T(-qt[s]) : qt[s];
        cc[s] = pc[ov.to_child(s)];
        if (s == 0) break;
      }
      P[c].reset();
      std::vector<std::vector<Index>> child_hidden;
      if (signed_fold) {
        child_hidden.resize(order);
        for (std::size_t l : weighted)
          child_hidden[l] = detail::set_union(hidden[c][l], detail::set_difference(cb.parts[l], bag.parts[l]));
        hidden[c].clear();
      }
      fold(tc, nullptr);
      fold(cc, &child_hidden);
      if (signed_fold)
        for (std::size_t l : weighted) acc_hidden[l] = detail::set_union(acc_hidden[l], child_hidden[l]);
    }
    P[node] = std::move(acc);
    if (signed_fold) hidden[node] = std::move(acc_hidden);
    mults[node] = ops.mults;
    cells[node] = live;
  });

  const SubsetTable<T>& root = *P[td.root()];
  res.value = root[root.full_mask()];
  for (std::size_t k = 0; k < td.size(); ++k) {
    res.stats.ring_mults += mults[k];
    res.stats.peak_cells = std::max(res.stats.peak_cells, cells[k]);
  }
  if (opt.keep_root_table) res.root_table = std::move(P[td.root()]);
  return res;
}

enum class Function { Perm, Det, Disc, Hyperdet, MdPerm };

inline std::string_view to_string(Function f) {
  switch (f) {
  case Function::Perm: return "perm";
  case Function::Det: return "det";
  case Function::Disc: return "disc";
  case Function::Hyperdet: return "hyperdet";
  case Function::MdPerm: return "mdperm";
  }
  return "?";
}

inline Function parse_function(std::string_view s) {
  if (s == "perm") return Function::Perm;
  if (s == "det") return Function::Det;
  if (s == "disc") return Function::Disc;
  if (s == "hyperdet") return Function::Hyperdet;
  if (s == "mdperm") return Function::MdPerm;
  throw std::invalid_argument("unknown function '" + std::string(s) + "'");
}

/// Signature of `f` on a tensor of the given order; throws
/// IncompatibleInput when the function is undefined there.
inline FunctionSignature signature_for(Function f, std::size_t order) {
  switch (f) {
  case Function::Perm:
    if (order != 2) throw IncompatibleInput("permanent requires a matrix (order 2)");
    return FunctionSignature::permanent();
  case Function::Det:
    if (order != 2) throw IncompatibleInput("determinant requires a matrix (order 2)");
    return FunctionSignature::determinant();
  case Function::Disc:
    if (order != 3) throw IncompatibleInput("mixed discriminant requires tensor order 3");
    return FunctionSignature::mixed_discriminant();
  case Function::Hyperdet:
    if (order < 2 || order % 2) throw IncompatibleInput("hyperdeterminant requires even tensor order");
    return FunctionSignature::hyperdeterminant(order - 1);
  case Function::MdPerm:
    if (order < 2) throw IncompatibleInput("multidimensional permanent requires tensor order >= 2");
    return FunctionSignature::multidim_permanent(order - 1);
  }
  throw std::invalid_argument("unknown function");
}

/// Graph a supplied or heuristic decomposition refers to.
enum class DecompositionGraph { Bipartite, Column, Symmetrized };

inline std::string_view to_string(DecompositionGraph g) {
  switch (g) {
  case DecompositionGraph::Bipartite: return "bipartite";
  case DecompositionGraph::Column: return "column";
  case DecompositionGraph::Symmetrized: return "symmetrized";
  }
  return "?";
}

inline DecompositionGraph parse_decomposition_graph(std::string_view s) {
  if (s == "bipartite" || s == "multipartite") return DecompositionGraph::Bipartite;
  if (s == "column") return DecompositionGraph::Column;
  if (s == "symmetrized") return DecompositionGraph::Symmetrized;
  throw std::invalid_argument("unknown decomposition graph '" + std::string(s) + "'");
}

struct DecompositionSource {
  /// Empty: run the heuristic on `graph`.
  std::optional<TreeDecomposition> td;
  DecompositionGraph graph = DecompositionGraph::Bipartite;
  Heuristic heuristic = Heuristic::MinFill;
};

template <Ring T>
struct ComputeOutcome {
  T value;
  EngineStats stats;
  /// "cols_perm" or "generalized".
  std::string engine;
};

/// Graph a decomposition source refers to, for the given tensor.
template <Ring T>
LabeledGraph decomposition_graph(const SparseTensor<T>& t, DecompositionGraph g) {
  switch (g) {
  case DecompositionGraph::Bipartite: return multipartite_graph(t);
  case DecompositionGraph::Column: return column_graph(t);
  case DecompositionGraph::Symmetrized: return symmetrized_graph(t);
  }
  throw std::invalid_argument("unknown decomposition graph");
}

/// Evaluates `f` on `t`. Permanents over column decompositions use
/// cols_perm; everything else runs the generalized engine, lifting column
/// and symmetrized decompositions to bipartite ones first.
template <Ring T>
ComputeOutcome<T> compute(Function f, const SparseTensor<T>& t, const DecompositionSource& src, EngineOptions opt = {}) {
  const FunctionSignature sig = signature_for(f, t.order());
  if (src.graph != DecompositionGraph::Bipartite && t.order() != 2)
    throw IncompatibleInput(std::string(to_string(src.graph)) + " decompositions need a matrix");
  TreeDecomposition td =
      src.td ? *src.td : heuristic_decomposition(decomposition_graph(t, src.graph), src.heuristic);
  if (src.graph == DecompositionGraph::Column && f == Function::Perm) {
    auto r = cols_perm(t, td, opt);
    return {std::move(r.value), r.stats, "cols_perm"};
  }
  if (src.graph == DecompositionGraph::Column)
    td = lift_column_to_bipartite(td, t);
  else if (src.graph == DecompositionGraph::Symmetrized)
    td = lift_symmetrized_to_bipartite(td, t);
  auto r = generalized_engine(t, sig, td, opt);
  return {std::move(r.value), r.stats, "generalized"};
}

} // namespace treeperm
