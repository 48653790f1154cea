#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "treeperm/engine.hpp"
#include "treeperm/errors.hpp"
#include "treeperm/graph.hpp"
#include "treeperm/scalar.hpp"
#include "treeperm/tensor.hpp"
#include "treeperm/tree_decomposition.hpp"

namespace treeperm {

using Vector = std::vector<Rational>;

/// n zonotopes in R^n, each the Minkowski sum of segments [0,1]g over its
/// generators g. Zero generators are dropped on construction.
class ZonotopeSystem {
public:
  ZonotopeSystem() = default;

  ZonotopeSystem(std::size_t dimension, std::vector<std::vector<Vector>> zonotopes)
      : n_(dimension), zs_(std::move(zonotopes)) {
    if (zs_.size() != n_)
      throw std::invalid_argument("expected " + std::to_string(n_) + " zonotopes, got " + std::to_string(zs_.size()));
    for (auto& z : zs_) {
      for (const auto& g : z)
        if (g.size() != n_) throw std::invalid_argument("generator dimension does not match the system");
      std::erase_if(z, [](const Vector& g) { return std::all_of(g.begin(), g.end(), [](const Rational& x) { return sgn(x) == 0; }); });
    }
  }

  std::size_t dimension() const noexcept { return n_; }
  std::size_t size() const noexcept { return zs_.size(); }
  const std::vector<Vector>& generators(std::size_t i) const { return zs_.at(i); }
  const std::vector<std::vector<Vector>>& zonotopes() const noexcept { return zs_; }

  bool operator==(const ZonotopeSystem&) const = default;

private:
  std::size_t n_ = 0;
  std::vector<std::vector<Vector>> zs_;
};

/// Reads `zonotopes <n>`, then per zonotope `z <m>` and m lines of n
/// rationals. Lines starting with `c` are comments.
inline ZonotopeSystem parse_zonotopes(std::istream& in) {
  std::string raw;
  std::size_t lineno = 0, n = 0, pending = 0;
  bool header = false;
  std::vector<std::vector<Vector>> zs;
  while (std::getline(in, raw)) {
    ++lineno;
    auto tok = detail::split_ws(raw);
    if (detail::skip_line(tok)) continue;
    if (!header) {
      if (tok.size() != 2 || tok[0] != "zonotopes") throw FormatError("expected 'zonotopes <n>' header", lineno);
      n = detail::parse_count(tok[1], lineno);
      if (n == 0) throw FormatError("dimension must be positive", lineno);
      header = true;
      continue;
    }
    if (pending == 0) {
      if (tok.size() != 2 || tok[0] != "z") throw FormatError("expected 'z <m>'", lineno);
      if (zs.size() == n) throw FormatError("more than " + std::to_string(n) + " zonotopes", lineno);
      pending = detail::parse_count(tok[1], lineno);
      zs.emplace_back();
      continue;
    }
    if (tok.size() != n) throw FormatError("generator must have " + std::to_string(n) + " coordinates", lineno);
    Vector g;
    for (auto s : tok) {
      try {
        g.push_back(parse_scalar<Rational>(s));
      } catch (const std::invalid_argument& e) {
        throw FormatError(e.what(), lineno);
      }
    }
    zs.back().push_back(std::move(g));
    --pending;
  }
  if (!header) throw FormatError("missing 'zonotopes' header", lineno);
  if (pending != 0) throw FormatError("zonotope generator list ended early", lineno);
  if (zs.size() != n) throw FormatError("expected " + std::to_string(n) + " zonotopes, got " + std::to_string(zs.size()), lineno);
  return ZonotopeSystem(n, std::move(zs));
}

inline ZonotopeSystem parse_zonotopes(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_zonotopes(in);
}

inline std::string write_zonotopes(const ZonotopeSystem& zs) {
  std::ostringstream out;
  out << "zonotopes " << zs.dimension() << '\n';
  for (const auto& z : zs.zonotopes()) {
    out << "z " << z.size() << '\n';
    for (const auto& g : z) {
      for (std::size_t k = 0; k < g.size(); ++k) out << (k ? " " : "") << g[k].get_str();
      out << '\n';
    }
  }
  return out.str();
}

/// Edge directions U of a system and each zonotope's total segment length
/// along them. Directions are primitive integer vectors whose first nonzero
/// entry is positive. A generator g = c·u contributes |c| to its zonotope's
/// coefficient on u: [0,1]g and [0,1](-g) differ by a translation.
struct DirectionIndex {
  std::vector<std::vector<Integer>> directions;
  std::vector<std::vector<Rational>> coeff; // [zonotope][direction], all >= 0

  std::size_t extra() const { return directions.size() > coeff.size() ? directions.size() - coeff.size() : 0; }
};

/// Primitive canonical direction of a nonzero rational vector, and the
/// scalar c with g = c·u.
inline std::pair<std::vector<Integer>, Rational> canonical_direction(const Vector& g) {
  Integer l = 1;
  for (const auto& x : g) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  std::vector<Integer> u;
  Integer gcd = 0;
  for (const auto& x : g) {
    Integer v = x.get_num() * (l / x.get_den());
    mpz_gcd(gcd.get_mpz_t(), gcd.get_mpz_t(), v.get_mpz_t());
    u.push_back(std::move(v));
  }
  if (sgn(gcd) == 0) throw std::invalid_argument("zero generator has no direction");
  auto first = std::find_if(u.begin(), u.end(), [](const Integer& v) { return sgn(v) != 0; });
  if (sgn(*first) < 0) gcd = -gcd;
  for (auto& v : u) v /= gcd;
  std::size_t k = static_cast<std::size_t>(first - u.begin());
  Rational c = g[k] / Rational(u[k]);
  return {std::move(u), std::move(c)};
}

inline DirectionIndex index_directions(const ZonotopeSystem& zs) {
  DirectionIndex idx;
  std::map<std::vector<Integer>, std::size_t> id;
  std::vector<std::vector<std::pair<std::size_t, Rational>>> contrib(zs.size());
  for (std::size_t i = 0; i < zs.size(); ++i)
    for (const auto& g : zs.generators(i)) {
      auto [u, c] = canonical_direction(g);
      auto [it, fresh] = id.try_emplace(u, idx.directions.size());
      if (fresh) idx.directions.push_back(u);
      contrib[i].emplace_back(it->second, abs(c));
    }
  idx.coeff.assign(zs.size(), std::vector<Rational>(idx.directions.size(), Rational(0)));
  for (std::size_t i = 0; i < zs.size(); ++i)
    for (auto& [u, c] : contrib[i]) idx.coeff[i][u] += c;
  return idx;
}

/// Bipartite graph on zonotopes Z (part 0) and directions U (part 1).
inline LabeledGraph edge_graph(const ZonotopeSystem& zs, const DirectionIndex& idx) {
  LabeledGraph g(GraphKind::ZonotopeEdge, {zs.size(), idx.directions.size()});
  for (std::size_t i = 0; i < zs.size(); ++i)
    for (std::size_t u = 0; u < idx.directions.size(); ++u)
      if (sgn(idx.coeff[i][u]) != 0) g.add_edge(g.vertex(0, i), g.vertex(1, u));
  return g;
}

inline LabeledGraph edge_graph(const ZonotopeSystem& zs) { return edge_graph(zs, index_directions(zs)); }

/// Graph on the coordinates; each zonotope spans a clique on the
/// coordinates along which it is not constant.
inline LabeledGraph coordinates_graph(const ZonotopeSystem& zs) {
  LabeledGraph g(GraphKind::ZonotopeCoordinates, {zs.dimension()});
  for (const auto& z : zs.zonotopes()) {
    std::vector<LabeledGraph::Vertex> support;
    for (std::size_t k = 0; k < zs.dimension(); ++k)
      if (std::any_of(z.begin(), z.end(), [&](const Vector& v) { return sgn(v[k]) != 0; })) support.push_back(k);
    g.add_clique(support);
  }
  return g;
}

/// All k-subsets of {0..n-1} in revolving-door order: consecutive subsets
/// differ by one element swapped in and one swapped out.
inline std::vector<std::vector<std::size_t>> revolving_door(std::size_t n, std::size_t k) {
  if (k > n) return {};
  if (k == 0) return {{}};
  if (k == n) {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    return {all};
  }
  auto out = revolving_door(n - 1, k);
  auto tail = revolving_door(n - 1, k - 1);
  for (auto it = tail.rbegin(); it != tail.rend(); ++it) {
    it->push_back(n - 1);
    out.push_back(std::move(*it));
  }
  return out;
}

namespace detail {

/// Fraction-free elimination on an integer matrix; each division is exact.
inline Integer bareiss_determinant(std::vector<std::vector<Integer>> a) {
  const std::size_t n = a.size();
  if (n == 0) return Integer(1);
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sgn(a[k][k]) == 0) {
      std::size_t p = k + 1;
      while (p < n && sgn(a[p][k]) == 0) ++p;
      if (p == n) return Integer(0);
      std::swap(a[p], a[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

} // namespace detail

struct MixedVolumeOptions {
  std::size_t max_extra_directions = 4;
  Heuristic heuristic = Heuristic::MinFill;
  EngineOptions engine;
};

struct MixedVolumeResult {
  Rational value;
  std::size_t directions = 0;
  std::size_t subsets = 0;         // size-n direction subsets visited
  std::size_t nonsingular = 0;     // of which had det != 0
  std::size_t width_multi_part = 0;
  std::uint64_t ring_mults = 0;
};

/// Restriction of an edge-graph decomposition to Z ∪ W, with W's elements
/// renumbered 0..|W|-1 in the order given.
inline TreeDecomposition restrict_to_directions(const TreeDecomposition& td, const std::vector<std::size_t>& w) {
  std::vector<Bag> bags;
  for (const auto& b : td.bags()) {
    std::vector<Index> dirs;
    for (Index u : b.parts[1]) {
      auto it = std::find(w.begin(), w.end(), u);
      if (it != w.end()) dirs.push_back(static_cast<Index>(it - w.begin()));
    }
    bags.push_back(Bag(std::vector<std::vector<Index>>{b.parts[0], std::move(dirs)}));
  }
  return TreeDecomposition(2, WidthConvention::MultiPart, std::move(bags), td.parents());
}

/// MVol as the sum over n-subsets W of the edge directions of
/// |det(W)|·Perm(C_W), where C_W holds each zonotope's coefficients on W.
/// Each permanent runs on the decomposition restricted to Z ∪ W.
inline MixedVolumeResult mixed_volume_few_directions(const ZonotopeSystem& zs,
                                                     const std::optional<TreeDecomposition>& edge_td = std::nullopt,
                                                     MixedVolumeOptions opt = {}) {
  const std::size_t n = zs.dimension();
  DirectionIndex idx = index_directions(zs);
  MixedVolumeResult res;
  res.value = 0;
  res.directions = idx.directions.size();
  if (idx.directions.size() < n) return res;
  if (idx.extra() > opt.max_extra_directions)
    throw DirectionCapExceeded(std::to_string(idx.extra()) + " extra edge directions exceed the cap of " +
                               std::to_string(opt.max_extra_directions));
  LabeledGraph g = edge_graph(zs, idx);
  TreeDecomposition td = edge_td ? *edge_td : heuristic_decomposition(g, opt.heuristic);
  validate(td, g);
  res.width_multi_part = td.width_multi_part();
  for (const auto& w : revolving_door(idx.directions.size(), n)) {
    ++res.subsets;
    std::vector<std::vector<Integer>> cols(n, std::vector<Integer>(n));
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t k = 0; k < n; ++k) cols[r][k] = idx.directions[w[k]][r];
    Integer det = detail::bareiss_determinant(std::move(cols));
    if (sgn(det) == 0) continue;
    ++res.nonsingular;
    std::vector<SparseTensor<Rational>::Entry> entries;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        if (sgn(idx.coeff[i][w[k]]) != 0) entries.push_back({{i, k}, idx.coeff[i][w[k]]});
    SparseTensor<Rational> cw({n, n}, std::move(entries));
    auto perm = generalized_engine(cw, FunctionSignature::permanent(), restrict_to_directions(td, w), opt.engine);
    res.ring_mults += perm.stats.ring_mults;
    res.value += Rational(abs(det)) * perm.value;
  }
  return res;
}

/// The subset-sum family: with n = |a| + 1 and a_n = delta,
///   z^1 = [0,1](a_1 e_n + e_1) + [0,1]e_1,
///   z^i = [0,1](a_i e_n + e_i - e_{i-1}) + [0,1](e_i - e_{i-1}),  1 < i < n,
///   z^n = [0,1](delta e_n - e_{n-1}).
/// ½MVol(delta=-1) - MVol(delta=0) + ½MVol(delta=1) counts the subsets of
/// a with zero sum.
inline ZonotopeSystem subset_sum_instance(const std::vector<Integer>& a, const Integer& delta) {
  const std::size_t n = a.size() + 1;
  if (n < 2) throw std::invalid_argument("subset-sum instance needs at least one value");
  auto zero = [&] { return Vector(n, Rational(0)); };
  std::vector<std::vector<Vector>> zs(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    Vector step = zero();
    step[i] = 1;
    if (i > 0) step[i - 1] = -1;
    Vector lifted = step;
    lifted[n - 1] += Rational(a[i]);
    zs[i] = {lifted, step};
  }
  Vector last = zero();
  last[n - 1] = Rational(delta);
  last[n - 2] -= 1;
  zs[n - 1] = {last};
  return ZonotopeSystem(n, std::move(zs));
}

/// z^i = [0,1]a_i e_i + [0,1]b_i e with e the all-ones vector.
inline ZonotopeSystem few_directions_instance(const std::vector<Integer>& a, const std::vector<Integer>& b) {
  if (a.size() != b.size() || a.empty()) throw std::invalid_argument("a and b must be nonempty and of equal length");
  const std::size_t n = a.size();
  std::vector<std::vector<Vector>> zs(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vector axis(n, Rational(0));
    axis[i] = Rational(a[i]);
    zs[i] = {axis, Vector(n, Rational(b[i]))};
  }
  return ZonotopeSystem(n, std::move(zs));
}

} // namespace treeperm
