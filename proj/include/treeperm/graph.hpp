#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "treeperm/tensor.hpp"

namespace treeperm {

/// Which sparsity abstraction a graph represents. Multipartite covers the
/// bipartite graph of a matrix (two parts) and the (d+1)-partite graph of a
/// tensor; Column and Symmetrized have a single coordinate part.
enum class GraphKind { Multipartite, Column, Symmetrized, ZonotopeEdge, ZonotopeCoordinates };

struct VertexLabel {
  std::size_t part;
  Index index;
  bool operator==(const VertexLabel&) const = default;
};

/// Undirected simple graph whose vertices are numbered part-by-part: all of
/// part 0 first, then part 1, and so on.
class LabeledGraph {
public:
  using Vertex = std::size_t;

  LabeledGraph(GraphKind kind, std::vector<std::size_t> part_sizes) : kind_(kind), part_sizes_(std::move(part_sizes)) {
    part_offset_.assign(part_sizes_.size() + 1, 0);
    std::partial_sum(part_sizes_.begin(), part_sizes_.end(), part_offset_.begin() + 1);
    adj_.resize(part_offset_.back());
  }

  GraphKind kind() const noexcept { return kind_; }
  std::size_t num_parts() const noexcept { return part_sizes_.size(); }
  std::size_t part_size(std::size_t p) const { return part_sizes_.at(p); }
  const std::vector<std::size_t>& part_sizes() const noexcept { return part_sizes_; }
  std::size_t num_vertices() const noexcept { return adj_.size(); }
  std::size_t num_edges() const noexcept { return num_edges_; }

  Vertex vertex(std::size_t part, Index index) const {
    if (part >= part_sizes_.size() || index >= part_sizes_[part]) throw std::out_of_range("vertex label out of range");
    return part_offset_[part] + index;
  }

  VertexLabel label(Vertex v) const {
    auto it = std::upper_bound(part_offset_.begin(), part_offset_.end(), v);
    std::size_t p = static_cast<std::size_t>(it - part_offset_.begin()) - 1;
    return {p, v - part_offset_[p]};
  }

  /// Self-loops and repeated edges are ignored.
  void add_edge(Vertex u, Vertex v) {
    if (u == v) return;
    auto& au = adj_.at(u);
    auto it = std::lower_bound(au.begin(), au.end(), v);
    if (it != au.end() && *it == v) return;
    au.insert(it, v);
    auto& av = adj_.at(v);
    av.insert(std::lower_bound(av.begin(), av.end(), u), u);
    ++num_edges_;
  }

  void add_clique(std::span<const Vertex> vs) {
    for (std::size_t i = 0; i < vs.size(); ++i)
      for (std::size_t j = i + 1; j < vs.size(); ++j) add_edge(vs[i], vs[j]);
  }

  bool has_edge(Vertex u, Vertex v) const {
    const auto& au = adj_.at(u);
    return std::binary_search(au.begin(), au.end(), v);
  }

  const std::vector<Vertex>& neighbors(Vertex v) const { return adj_.at(v); }

  /// Edges as (u, v) with u < v, in lexicographic order.
  std::vector<std::pair<Vertex, Vertex>> edges() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    out.reserve(num_edges_);
    for (Vertex u = 0; u < adj_.size(); ++u)
      for (Vertex v : adj_[u])
        if (u < v) out.emplace_back(u, v);
    return out;
  }

private:
  GraphKind kind_;
  std::vector<std::size_t> part_sizes_;
  std::vector<std::size_t> part_offset_;
  std::vector<std::vector<Vertex>> adj_;
  std::size_t num_edges_ = 0;
};

/// Vertices A ∪ X^1 ∪ ... ∪ X^d with a (d+1)-clique per nonzero entry. For
/// matrices this is the bipartite graph with one edge per nonzero.
template <Ring T>
LabeledGraph multipartite_graph(const SparseTensor<T>& t) {
  if (t.order() < 2) throw IncompatibleInput("multipartite graph needs tensor order >= 2");
  LabeledGraph g(GraphKind::Multipartite, t.lengths());
  std::vector<LabeledGraph::Vertex> clique(t.order());
  for (const auto& e : t.entries()) {
    for (std::size_t l = 0; l < t.order(); ++l) clique[l] = g.vertex(l, e.index[l]);
    g.add_clique(clique);
  }
  return g;
}

template <Ring T>
LabeledGraph bipartite_graph(const SparseTensor<T>& m) {
  if (m.order() != 2) throw IncompatibleInput("bipartite graph needs a matrix (order 2)");
  return multipartite_graph(m);
}

/// Adjacency graph of M + M^T on vertices 1..n (no cancellation assumed).
template <Ring T>
LabeledGraph symmetrized_graph(const SparseTensor<T>& m) {
  if (m.order() != 2) throw IncompatibleInput("symmetrized graph needs a matrix (order 2)");
  if (!m.is_square()) throw IncompatibleInput("symmetrized graph needs a square matrix");
  LabeledGraph g(GraphKind::Symmetrized, {m.length(0)});
  for (const auto& e : m.entries()) g.add_edge(e.index[0], e.index[1]);
  return g;
}

/// Vertices X; a clique on the support X(a) of every row a.
template <Ring T>
LabeledGraph column_graph(const SparseTensor<T>& m) {
  if (m.order() != 2) throw IncompatibleInput("column graph needs a matrix (order 2)");
  LabeledGraph g(GraphKind::Column, {m.length(1)});
  std::vector<LabeledGraph::Vertex> support;
  for (Index a = 0; a < m.length(0); ++a) {
    support.clear();
    for (const auto& e : m.row(a)) support.push_back(e.index[1]);
    g.add_clique(support);
  }
  return g;
}

/// PACE 2017 `.gr` text using the global 1-based vertex numbering.
inline std::string write_pace_graph(const LabeledGraph& g) {
  std::ostringstream out;
  out << "p tw " << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (auto [u, v] : g.edges()) out << (u + 1) << ' ' << (v + 1) << '\n';
  return out.str();
}

} // namespace treeperm
