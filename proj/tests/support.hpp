#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "treeperm/treeperm.hpp"

namespace support {

using treeperm::Integer;
using treeperm::Mask;

inline Integer random_value(treeperm::Rng& rng, long lo, long hi) {
  return Integer(std::uniform_int_distribution<long>(lo, hi)(rng));
}

/// Every pair of masks, including the overlapping ones that get skipped.
template <class T>
std::vector<T> naive_convolution(const std::vector<T>& f, const std::vector<T>& g) {
  std::vector<T> h(f.size(), T(0));
  for (std::size_t a = 0; a < f.size(); ++a)
    for (std::size_t b = 0; b < g.size(); ++b)
      if ((a & b) == 0) h[a | b] += f[a] * g[b];
  return h;
}

/// (-1)^{#inversions} by the quadratic count.
inline int inversion_sign(const std::vector<std::size_t>& p) {
  std::size_t inv = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) inv += p[i] > p[j];
  return inv % 2 ? -1 : 1;
}

inline std::vector<std::size_t> random_permutation(std::size_t n, treeperm::Rng& rng) {
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

template <class T>
treeperm::SparseTensor<T> permute_rows_cols(const treeperm::SparseTensor<T>& m, const std::vector<std::size_t>& rows,
                                            const std::vector<std::size_t>& cols) {
  std::vector<typename treeperm::SparseTensor<T>::Entry> out;
  for (const auto& e : m.entries()) out.push_back({{rows[e.index[0]], cols[e.index[1]]}, e.value});
  return treeperm::SparseTensor<T>(m.lengths(), std::move(out));
}

/// The 5×5 pattern with row supports {x1,x3,x4} (a1, a2), {x2,x3,x4} (a3)
/// and {x2,x3,x5} (a4, a5), filled with the given values row by row.
inline treeperm::SparseTensor<Integer> triangles_matrix(const std::vector<long>& v) {
  static const std::vector<std::vector<std::size_t>> support = {{0, 2, 3}, {0, 2, 3}, {1, 2, 3}, {1, 2, 4}, {1, 2, 4}};
  std::vector<treeperm::SparseTensor<Integer>::Entry> e;
  std::size_t k = 0;
  for (std::size_t a = 0; a < 5; ++a)
    for (std::size_t x : support[a]) e.push_back({{a, x}, Integer(v.at(k++))});
  return treeperm::SparseTensor<Integer>({5, 5}, std::move(e));
}

inline treeperm::SparseTensor<Integer> triangles_matrix(treeperm::Rng& rng) {
  std::vector<long> v(15);
  for (auto& x : v) x = std::uniform_int_distribution<long>(1, 9)(rng);
  return triangles_matrix(v);
}

inline treeperm::Bag bag(std::vector<std::vector<treeperm::Index>> parts) { return treeperm::Bag(std::move(parts)); }

/// The three-node path t1 - t2 - t3 of the triangle chain, rooted at t2:
/// t1 = {x1,x3,x4}, t2 = {x2,x3,x4}, t3 = {x2,x3,x5}.
inline treeperm::TreeDecomposition triangles_column_decomposition() {
  using treeperm::Bag;
  using treeperm::TreeDecomposition;
  std::vector<Bag> bags{bag({{0, 2, 3}}), bag({{1, 2, 3}}), bag({{1, 2, 4}})};
  return TreeDecomposition(1, treeperm::WidthConvention::SinglePart, std::move(bags),
                           {1, TreeDecomposition::kNoParent, 1});
}

/// Bipartite decomposition with root {a3; x3} and children
/// {a1,a2,a3; x1,x3,x4} and {a3,a4,a5; x2,x3,x5}.
inline treeperm::TreeDecomposition triangles_bipartite_decomposition() {
  using treeperm::Bag;
  using treeperm::TreeDecomposition;
  std::vector<Bag> bags{bag({{2}, {2}}), bag({{0, 1, 2}, {0, 2, 3}}), bag({{2, 3, 4}, {1, 2, 4}})};
  return TreeDecomposition(2, treeperm::WidthConvention::MultiPart, std::move(bags), {TreeDecomposition::kNoParent, 0, 0});
}

} // namespace support
