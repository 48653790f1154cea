#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "treeperm/errors.hpp"
#include "treeperm/graph.hpp"
#include "treeperm/tensor.hpp"

namespace treeperm {

/// Single-part widths subtract one from the largest bag; multi-part widths
/// are the largest |alpha(t)| + |chi^1(t)| + ... with no correction. Both are
/// used in the literature, so the convention travels with the decomposition.
enum class WidthConvention { SinglePart, MultiPart };

inline const char* to_string(WidthConvention c) { return c == WidthConvention::SinglePart ? "single-part" : "multi-part"; }

/// Multi-part bag: one sorted index list per graph part.
struct Bag {
  std::vector<std::vector<Index>> parts;

  Bag() = default;
  explicit Bag(std::size_t num_parts) : parts(num_parts) {}
  explicit Bag(std::vector<std::vector<Index>> p) : parts(std::move(p)) {
    for (auto& v : parts) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
  }

  std::size_t size() const noexcept {
    std::size_t s = 0;
    for (const auto& v : parts) s += v.size();
    return s;
  }

  bool contains(std::size_t part, Index i) const { return std::binary_search(parts[part].begin(), parts[part].end(), i); }

  bool operator==(const Bag&) const = default;
};

/// Rooted tree of multi-part bags. Node ids are dense 0..size()-1.
class TreeDecomposition {
public:
  static constexpr std::size_t kNoParent = std::numeric_limits<std::size_t>::max();

  TreeDecomposition() = default;

  /// `parent[root] == kNoParent` for exactly one node; the parent links must
  /// form a tree.
  TreeDecomposition(std::size_t num_parts, WidthConvention convention, std::vector<Bag> bags,
                    std::vector<std::size_t> parent)
      : num_parts_(num_parts), convention_(convention), bags_(std::move(bags)), parent_(std::move(parent)) {
    if (bags_.empty()) throw InvalidDecomposition("decomposition has no nodes");
    if (parent_.size() != bags_.size()) throw InvalidDecomposition("parent list does not match bag count");
    for (const auto& b : bags_)
      if (b.parts.size() != num_parts_) throw InvalidDecomposition("bag part count does not match decomposition");
    children_.assign(bags_.size(), {});
    root_ = kNoParent;
    for (std::size_t t = 0; t < bags_.size(); ++t) {
      if (parent_[t] == kNoParent) {
        if (root_ != kNoParent) throw InvalidDecomposition("decomposition has more than one root");
        root_ = t;
      } else {
        if (parent_[t] >= bags_.size()) throw InvalidDecomposition("parent id out of range");
        children_[parent_[t]].push_back(t);
      }
    }
    if (root_ == kNoParent) throw InvalidDecomposition("decomposition has no root");
    if (post_order().size() != bags_.size()) throw InvalidDecomposition("parent links contain a cycle");
  }

  std::size_t size() const noexcept { return bags_.size(); }
  std::size_t num_parts() const noexcept { return num_parts_; }
  WidthConvention convention() const noexcept { return convention_; }
  std::size_t root() const noexcept { return root_; }
  const Bag& bag(std::size_t t) const { return bags_.at(t); }
  const std::vector<Bag>& bags() const noexcept { return bags_; }
  std::size_t parent(std::size_t t) const { return parent_.at(t); }
  const std::vector<std::size_t>& parents() const noexcept { return parent_; }
  const std::vector<std::size_t>& children(std::size_t t) const { return children_.at(t); }

  std::size_t max_bag_size() const {
    std::size_t m = 0;
    for (const auto& b : bags_) m = std::max(m, b.size());
    return m;
  }
  std::size_t width_multi_part() const { return max_bag_size(); }
  std::size_t width_single_part() const { return max_bag_size() == 0 ? 0 : max_bag_size() - 1; }
  std::size_t width() const {
    return convention_ == WidthConvention::SinglePart ? width_single_part() : width_multi_part();
  }

  /// Children before parents; siblings in ascending id order.
  std::vector<std::size_t> post_order() const {
    std::vector<std::size_t> out;
    out.reserve(bags_.size());
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root_, 0}};
    std::vector<char> seen(bags_.size(), 0);
    seen[root_] = 1;
    while (!stack.empty()) {
      auto& [t, next] = stack.back();
      if (next < children_[t].size()) {
        std::size_t c = children_[t][next++];
        if (seen[c]) break;
        seen[c] = 1;
        stack.emplace_back(c, 0);
      } else {
        out.push_back(t);
        stack.pop_back();
      }
    }
    return out;
  }

private:
  std::size_t num_parts_ = 0;
  WidthConvention convention_ = WidthConvention::MultiPart;
  std::vector<Bag> bags_;
  std::vector<std::size_t> parent_;
  std::vector<std::vector<std::size_t>> children_;
  std::size_t root_ = 0;
};

namespace detail {

inline std::string describe(const LabeledGraph& g, LabeledGraph::Vertex v) {
  auto lab = g.label(v);
  return "vertex " + std::to_string(v + 1) + " (part " + std::to_string(lab.part) + ", index " +
         std::to_string(lab.index + 1) + ")";
}

} // namespace detail

/// Checks coverage, edge coverage and connectedness; returns the width under
/// the decomposition's convention. Throws InvalidDecomposition naming a
/// witness on failure.
inline std::size_t validate(const TreeDecomposition& td, const LabeledGraph& g) {
  if (td.num_parts() != g.num_parts())
    throw InvalidDecomposition("decomposition has " + std::to_string(td.num_parts()) + " parts, graph has " +
                               std::to_string(g.num_parts()));
  const std::size_t nv = g.num_vertices();
  std::vector<std::size_t> occurrences(nv, 0), tops(nv, 0);
  std::vector<std::vector<std::size_t>> nodes_of(nv);
  for (std::size_t t = 0; t < td.size(); ++t) {
    const Bag& b = td.bag(t);
    for (std::size_t p = 0; p < b.parts.size(); ++p)
      for (Index i : b.parts[p]) {
        if (i >= g.part_size(p))
          throw InvalidDecomposition("bag " + std::to_string(t + 1) + " references unknown index " +
                                     std::to_string(i + 1) + " in part " + std::to_string(p));
        auto v = g.vertex(p, i);
        ++occurrences[v];
        nodes_of[v].push_back(t);
        std::size_t par = td.parent(t);
        if (par == TreeDecomposition::kNoParent || !td.bag(par).contains(p, i)) ++tops[v];
      }
  }
  for (LabeledGraph::Vertex v = 0; v < nv; ++v) {
    if (occurrences[v] == 0) throw InvalidDecomposition("uncovered " + detail::describe(g, v));
    if (tops[v] != 1) throw InvalidDecomposition("bags containing " + detail::describe(g, v) + " are not connected");
  }
  for (auto [u, v] : g.edges()) {
    auto lu = g.label(u), lv = g.label(v);
    bool found = false;
    // Scan the shorter occurrence list.
    const auto& cand = nodes_of[u].size() <= nodes_of[v].size() ? nodes_of[u] : nodes_of[v];
    for (std::size_t t : cand)
      if (td.bag(t).contains(lu.part, lu.index) && td.bag(t).contains(lv.part, lv.index)) {
        found = true;
        break;
      }
    if (!found)
      throw InvalidDecomposition("uncovered edge between " + detail::describe(g, u) + " and " + detail::describe(g, v));
  }
  return td.width();
}

enum class Heuristic { MinDegree, MinFill };

/// Elimination-order decomposition: eliminate greedily by the chosen score,
/// take the elimination cliques, contract nested bags, and root the clique
/// tree at a maximum-cardinality bag (ties: lowest node id). Components are
/// hung below that root.
inline TreeDecomposition heuristic_decomposition(const LabeledGraph& g, Heuristic method) {
  using V = LabeledGraph::Vertex;
  const std::size_t n = g.num_vertices();
  const auto convention = g.num_parts() > 1 ? WidthConvention::MultiPart : WidthConvention::SinglePart;
  if (n == 0) return TreeDecomposition(g.num_parts(), convention, {Bag(g.num_parts())}, {TreeDecomposition::kNoParent});

  std::vector<std::vector<V>> adj(n);
  for (V v = 0; v < n; ++v) adj[v] = g.neighbors(v);
  auto adjacent = [&](V a, V b) { return std::binary_search(adj[a].begin(), adj[a].end(), b); };
  auto score = [&](V v) -> std::size_t {
    if (method == Heuristic::MinDegree) return adj[v].size();
    std::size_t fill = 0;
    const auto& nb = adj[v];
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j)
        if (!adjacent(nb[i], nb[j])) ++fill;
    return fill;
  };

  std::set<std::pair<std::size_t, V>> queue;
  std::vector<std::size_t> current(n);
  for (V v = 0; v < n; ++v) queue.emplace(current[v] = score(v), v);

  std::vector<std::size_t> position(n);
  std::vector<V> order;
  std::vector<std::vector<V>> elim_bag(n);
  std::vector<char> eliminated(n, 0);
  order.reserve(n);
  while (!queue.empty()) {
    V v = queue.begin()->second;
    queue.erase(queue.begin());
    position[v] = order.size();
    order.push_back(v);
    eliminated[v] = 1;
    std::vector<V> nb = adj[v];
    elim_bag[v] = nb;
    elim_bag[v].push_back(v);
    std::sort(elim_bag[v].begin(), elim_bag[v].end());
    for (V u : nb) {
      auto& au = adj[u];
      au.erase(std::lower_bound(au.begin(), au.end(), v));
      for (V w : nb)
        if (w != u) {
          auto it = std::lower_bound(au.begin(), au.end(), w);
          if (it == au.end() || *it != w) au.insert(it, w);
        }
    }
    adj[v].clear();
    std::vector<V> touched = nb;
    if (method == Heuristic::MinFill)
      for (V u : nb) touched.insert(touched.end(), adj[u].begin(), adj[u].end());
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (V u : touched) {
      if (eliminated[u]) continue;
      queue.erase({current[u], u});
      queue.emplace(current[u] = score(u), u);
    }
  }

  // Elimination tree: parent is the earliest-eliminated later neighbour.
  constexpr V kNone = std::numeric_limits<V>::max();
  std::vector<V> parent(n, kNone);
  for (V v = 0; v < n; ++v)
    for (V u : elim_bag[v])
      if (u != v && (parent[v] == kNone || position[u] < position[parent[v]])) parent[v] = u;

  std::vector<V> rep(n);
  std::iota(rep.begin(), rep.end(), V{0});
  auto find = [&](V x) {
    while (rep[x] != x) x = rep[x] = rep[rep[x]];
    return x;
  };
  auto subset = [](const std::vector<V>& a, const std::vector<V>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (V x : order) {
      V c = find(x);
      if (c != x) continue;
      while (parent[c] != kNone) {
        V p = find(parent[c]);
        if (subset(elim_bag[p], elim_bag[c])) {
          rep[p] = c;
          parent[c] = parent[p];
          changed = true;
        } else if (subset(elim_bag[c], elim_bag[p])) {
          rep[c] = p;
          changed = true;
          break;
        } else {
          break;
        }
      }
    }
  }

  std::vector<std::size_t> node_id(n, TreeDecomposition::kNoParent);
  std::vector<V> live;
  for (V x : order)
    if (find(x) == x) {
      node_id[x] = live.size();
      live.push_back(x);
    }
  const std::size_t m = live.size();
  std::vector<std::size_t> par(m, TreeDecomposition::kNoParent);
  std::vector<Bag> bags;
  bags.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    V x = live[k];
    if (parent[x] != kNone) par[k] = node_id[find(parent[x])];
    Bag b(g.num_parts());
    for (V u : elim_bag[x]) {
      auto lab = g.label(u);
      b.parts[lab.part].push_back(lab.index);
    }
    for (auto& p : b.parts) std::sort(p.begin(), p.end());
    bags.push_back(std::move(b));
  }

  std::size_t root = 0;
  for (std::size_t k = 1; k < m; ++k)
    if (bags[k].size() > bags[root].size()) root = k;
  // Re-root the chosen node's component, then hang the other components below it.
  for (std::size_t cur = root, prev = TreeDecomposition::kNoParent; cur != TreeDecomposition::kNoParent;) {
    std::size_t next = par[cur];
    par[cur] = prev;
    prev = cur;
    cur = next;
  }
  for (std::size_t k = 0; k < m; ++k)
    if (k != root && par[k] == TreeDecomposition::kNoParent) par[k] = root;
  return TreeDecomposition(g.num_parts(), convention, std::move(bags), std::move(par));
}

/// Node assigned to each row (column decompositions) or each entry
/// (multipartite decompositions).
struct RowAssignment {
  std::vector<std::size_t> node;
};

namespace detail {

/// Earliest node in post-order whose bag contains every (part, index) of
/// `clique`; the root when the clique is empty.
class CliqueLocator {
public:
  CliqueLocator(const TreeDecomposition& td, std::span<const std::size_t> part_sizes) : td_(td) {
    auto post = td.post_order();
    rank_.assign(td.size(), 0);
    for (std::size_t r = 0; r < post.size(); ++r) rank_[post[r]] = r;
    nodes_.resize(part_sizes.size());
    for (std::size_t p = 0; p < part_sizes.size(); ++p) nodes_[p].resize(part_sizes[p]);
    for (std::size_t t = 0; t < td.size(); ++t)
      for (std::size_t p = 0; p < td.num_parts(); ++p)
        for (Index i : td.bag(t).parts[p])
          if (i < nodes_[p].size()) nodes_[p][i].push_back(t);
    for (auto& part : nodes_)
      for (auto& list : part) std::sort(list.begin(), list.end(), [&](auto a, auto b) { return rank_[a] < rank_[b]; });
  }

  std::size_t locate(std::span<const std::pair<std::size_t, Index>> clique) const {
    if (clique.empty()) return td_.root();
    auto [p0, i0] = clique[0];
    for (std::size_t t : nodes_[p0][i0]) {
      const Bag& b = td_.bag(t);
      bool all = std::all_of(clique.begin(), clique.end(), [&](auto pi) { return b.contains(pi.first, pi.second); });
      if (all) return t;
    }
    throw InvalidDecomposition("no bag contains the clique of part " + std::to_string(p0) + " index " +
                               std::to_string(i0 + 1));
  }

private:
  const TreeDecomposition& td_;
  std::vector<std::size_t> rank_;
  std::vector<std::vector<std::vector<std::size_t>>> nodes_;
};

} // namespace detail

/// Assigns every row a of a matrix to the earliest post-order node of a
/// column decomposition whose bag contains X(a). Empty rows go to the root.
template <Ring T>
RowAssignment assign_rows(const TreeDecomposition& td, const SparseTensor<T>& m) {
  if (m.order() != 2 || td.num_parts() != 1)
    throw IncompatibleInput("row assignment needs a matrix and a column decomposition");
  std::vector<std::size_t> sizes{m.length(1)};
  detail::CliqueLocator loc(td, sizes);
  RowAssignment out;
  std::vector<std::pair<std::size_t, Index>> clique;
  for (Index a = 0; a < m.length(0); ++a) {
    clique.clear();
    for (const auto& e : m.row(a)) clique.emplace_back(0, e.index[1]);
    out.node.push_back(loc.locate(clique));
  }
  return out;
}

/// Assigns every nonzero entry (in entries() order) of a tensor to the
/// earliest post-order node of a multipartite decomposition containing all
/// its coordinates.
template <Ring T>
RowAssignment assign_entries(const TreeDecomposition& td, const SparseTensor<T>& t) {
  if (td.num_parts() != t.order()) throw IncompatibleInput("entry assignment needs a multipartite decomposition");
  detail::CliqueLocator loc(td, t.lengths());
  RowAssignment out;
  std::vector<std::pair<std::size_t, Index>> clique;
  for (const auto& e : t.entries()) {
    clique.clear();
    for (std::size_t l = 0; l < t.order(); ++l) clique.emplace_back(l, e.index[l]);
    out.node.push_back(loc.locate(clique));
  }
  return out;
}

/// Turns a decomposition of the column graph into one of the bipartite
/// graph: each node with assigned rows a_1..a_k becomes a path of k nodes
/// with bags chi(t) ∪ {a_j}. Nodes without rows are kept as they are.
template <Ring T>
TreeDecomposition lift_column_to_bipartite(const TreeDecomposition& td_x, const SparseTensor<T>& m) {
  validate(td_x, column_graph(m));
  RowAssignment rows = assign_rows(td_x, m);
  std::vector<std::vector<Index>> assigned(td_x.size());
  for (Index a = 0; a < rows.node.size(); ++a) assigned[rows.node[a]].push_back(a);

  std::vector<Bag> bags;
  std::vector<std::size_t> par;
  std::vector<std::size_t> first(td_x.size()), last(td_x.size());
  // Parents before children so ids of parent paths exist.
  auto post = td_x.post_order();
  std::reverse(post.begin(), post.end());
  for (std::size_t t : post) {
    std::size_t attach = td_x.parent(t) == TreeDecomposition::kNoParent ? TreeDecomposition::kNoParent
                                                                        : first[td_x.parent(t)];
    std::size_t k = std::max<std::size_t>(1, assigned[t].size());
    for (std::size_t j = 0; j < k; ++j) {
      Bag b(2);
      if (!assigned[t].empty()) b.parts[0].push_back(assigned[t][j]);
      b.parts[1] = td_x.bag(t).parts[0];
      par.push_back(j == 0 ? attach : bags.size() - 1);
      if (j == 0) first[t] = bags.size();
      last[t] = bags.size();
      bags.push_back(std::move(b));
    }
  }
  return TreeDecomposition(2, WidthConvention::MultiPart, std::move(bags), std::move(par));
}

/// Bag iota(t) of a symmetrized-graph decomposition becomes
/// {a_i : i in iota(t)} ∪ {x_i : i in iota(t)}.
inline TreeDecomposition lift_symmetrized_to_bipartite(const TreeDecomposition& td_s) {
  if (td_s.num_parts() != 1) throw IncompatibleInput("symmetrized decompositions have a single part");
  std::vector<Bag> bags;
  for (const auto& b : td_s.bags()) bags.push_back(Bag(std::vector<std::vector<Index>>{b.parts[0], b.parts[0]}));
  return TreeDecomposition(2, WidthConvention::MultiPart, std::move(bags), td_s.parents());
}

/// Validating overload: checks `td_s` against the symmetrized graph of `m`.
template <Ring T>
TreeDecomposition lift_symmetrized_to_bipartite(const TreeDecomposition& td_s, const SparseTensor<T>& m) {
  validate(td_s, symmetrized_graph(m));
  return lift_symmetrized_to_bipartite(td_s);
}

/// PACE 2017 `.td` text. Bags are renumbered in pre-order from the root
/// (root = bag 1), tree edges are listed as `parent child` in child order.
inline std::string write_decomposition(const TreeDecomposition& td, std::span<const std::size_t> part_sizes) {
  if (part_sizes.size() != td.num_parts()) throw std::invalid_argument("part size list does not match decomposition");
  std::vector<std::size_t> offset(part_sizes.size() + 1, 0);
  std::partial_sum(part_sizes.begin(), part_sizes.end(), offset.begin() + 1);
  std::vector<std::size_t> pre, id(td.size());
  std::vector<std::size_t> stack{td.root()};
  while (!stack.empty()) {
    std::size_t t = stack.back();
    stack.pop_back();
    id[t] = pre.size();
    pre.push_back(t);
    const auto& ch = td.children(t);
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
  }
  std::ostringstream out;
  out << "s td " << td.size() << ' ' << td.max_bag_size() << ' ' << offset.back() << '\n';
  for (std::size_t k = 0; k < pre.size(); ++k) {
    out << "b " << (k + 1);
    const Bag& b = td.bag(pre[k]);
    for (std::size_t p = 0; p < b.parts.size(); ++p)
      for (Index i : b.parts[p]) out << ' ' << (offset[p] + i + 1);
    out << '\n';
  }
  for (std::size_t k = 1; k < pre.size(); ++k) out << (id[td.parent(pre[k])] + 1) << ' ' << (k + 1) << '\n';
  return out.str();
}

/// Parses PACE `.td` text. Vertex ids are mapped back to (part, index) via
/// the part-by-part numbering given by `part_sizes`; bag 1 becomes the root.
inline TreeDecomposition read_decomposition(std::string_view text, std::span<const std::size_t> part_sizes) {
  std::vector<std::size_t> offset(part_sizes.size() + 1, 0);
  std::partial_sum(part_sizes.begin(), part_sizes.end(), offset.begin() + 1);
  const std::size_t nv = offset.back();
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0, nbags = 0;
  bool header = false;
  std::vector<Bag> bags;
  std::vector<char> seen;
  std::vector<std::vector<std::size_t>> adj;
  std::size_t nedges = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    auto tok = detail::split_ws(raw);
    if (detail::skip_line(tok)) continue;
    if (!header) {
      if (tok.size() != 5 || tok[0] != "s" || tok[1] != "td") throw FormatError("expected 's td <bags> <max> <vertices>'", lineno);
      nbags = detail::parse_count(tok[2], lineno);
      std::size_t declared = detail::parse_count(tok[4], lineno);
      if (nbags == 0) throw FormatError("decomposition must have at least one bag", lineno);
      if (declared != nv)
        throw FormatError("header declares " + std::to_string(declared) + " vertices, graph has " + std::to_string(nv), lineno);
      bags.assign(nbags, Bag(part_sizes.size()));
      seen.assign(nbags, 0);
      adj.assign(nbags, {});
      header = true;
      continue;
    }
    if (tok[0] == "b") {
      if (tok.size() < 2) throw FormatError("bag line needs an id", lineno);
      std::size_t id = detail::parse_count(tok[1], lineno);
      if (id < 1 || id > nbags) throw FormatError("bag id out of range", lineno);
      if (seen[id - 1]) throw FormatError("bag " + std::to_string(id) + " listed twice", lineno);
      seen[id - 1] = 1;
      std::vector<std::vector<Index>> parts(part_sizes.size());
      for (std::size_t k = 2; k < tok.size(); ++k) {
        std::size_t v = detail::parse_count(tok[k], lineno);
        if (v < 1 || v > nv) throw FormatError("unknown vertex id " + std::string(tok[k]), lineno);
        auto it = std::upper_bound(offset.begin(), offset.end(), v - 1);
        std::size_t p = static_cast<std::size_t>(it - offset.begin()) - 1;
        parts[p].push_back(v - 1 - offset[p]);
      }
      bags[id - 1] = Bag(std::move(parts));
      continue;
    }
    if (tok.size() != 2) throw FormatError("expected a tree edge '<bag> <bag>'", lineno);
    std::size_t u = detail::parse_count(tok[0], lineno), v = detail::parse_count(tok[1], lineno);
    if (u < 1 || u > nbags || v < 1 || v > nbags || u == v) throw FormatError("tree edge references an invalid bag", lineno);
    adj[u - 1].push_back(v - 1);
    adj[v - 1].push_back(u - 1);
    ++nedges;
  }
  if (!header) throw FormatError("missing 's td' header", lineno);
  for (std::size_t b = 0; b < nbags; ++b)
    if (!seen[b]) throw FormatError("bag " + std::to_string(b + 1) + " is never listed", lineno);
  if (nedges != nbags - 1) throw FormatError("tree must have exactly #bags-1 edges", lineno);
  std::vector<std::size_t> par(nbags, TreeDecomposition::kNoParent);
  std::vector<char> vis(nbags, 0);
  std::vector<std::size_t> stack{0};
  vis[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t v : adj[u])
      if (!vis[v]) {
        vis[v] = 1;
        par[v] = u;
        ++reached;
        stack.push_back(v);
      }
  }
  if (reached != nbags) throw FormatError("tree edges do not connect all bags", lineno);
  // Sorted child lists make the written form canonical.
  auto convention = part_sizes.size() > 1 ? WidthConvention::MultiPart : WidthConvention::SinglePart;
  return TreeDecomposition(part_sizes.size(), convention, std::move(bags), std::move(par));
}

} // namespace treeperm
