#include <gtest/gtest.h>

#include "support.hpp"

using namespace treeperm;

namespace {

TreeDecomposition heuristic_bipartite(const SparseTensor<Integer>& t, Heuristic h = Heuristic::MinFill) {
  return heuristic_decomposition(multipartite_graph(t), h);
}

Integer gen(const SparseTensor<Integer>& t, const FunctionSignature& sig, EngineOptions opt = {}) {
  return generalized_engine(t, sig, heuristic_bipartite(t), opt).value;
}

// perm of the block on 1-based rows D, columns Y.
Integer perm_block(const SparseTensor<Integer>& m, std::vector<Index> d, std::vector<Index> y) {
  for (auto& i : d) --i;
  for (auto& i : y) --i;
  return oracle::ryser_permanent(subtensor(m, AxisSubsetSelection{{d, y}}));
}

Integer entry(const SparseTensor<Integer>& m, Index a, Index x) {
  const Integer* v = m.find(std::vector<Index>{a - 1, x - 1});
  return v ? *v : Integer(0);
}

SparseTensor<Integer> slices(const std::vector<SparseTensor<Integer>>& ms) {
  const std::size_t n = ms.size();
  std::vector<SparseTensor<Integer>::Entry> e;
  for (Index k = 0; k < n; ++k)
    for (const auto& x : ms[k].entries()) e.push_back({{k, x.index[0], x.index[1]}, x.value});
  return SparseTensor<Integer>({n, n, n}, std::move(e));
}

SparseTensor<Integer> diag(const std::vector<long>& v) {
  std::vector<SparseTensor<Integer>::Entry> e;
  for (Index i = 0; i < v.size(); ++i)
    if (v[i]) e.push_back({{i, i}, Integer(v[i])});
  return SparseTensor<Integer>({v.size(), v.size()}, std::move(e));
}

std::vector<FunctionSignature> signatures(std::size_t d) {
  std::vector<FunctionSignature> out;
  for (unsigned bits = 0; bits < (1u << d); ++bits) {
    std::vector<Epsilon> e(d);
    for (std::size_t l = 0; l < d; ++l) e[l] = bits >> l & 1 ? Epsilon::Sign : Epsilon::Plus;
    out.emplace_back(e);
  }
  return out;
}

} // namespace

TEST(ColsPerm, Identity) {
  auto m = diagonal_tensor<Integer>(3, 2);
  auto td = heuristic_decomposition(column_graph(m), Heuristic::MinFill);
  EXPECT_EQ(cols_perm(m, td).value, 1);
  EXPECT_EQ(gen(m, FunctionSignature::permanent()), 1);
}

TEST(ColsPerm, TrianglesWithDrawnDecomposition) {
  auto ones = support::triangles_matrix(std::vector<long>(15, 1));
  auto col = support::triangles_column_decomposition();
  EXPECT_EQ(cols_perm(ones, col).value, oracle::ryser_permanent(ones));
  Rng rng(1);
  for (int k = 0; k < 20; ++k) {
    auto m = support::triangles_matrix(rng);
    EXPECT_EQ(cols_perm(m, col).value, oracle::ryser_permanent(m));
  }
}

// Perm(M) = perm(a1a2; x1x3) M[a3,x4] perm(a4a5; x2x5)
//         + perm(a1a2; x1x4) M[a3,x3] perm(a4a5; x2x5)
//         + perm(a1a2; x1x4) M[a3,x2] perm(a4a5; x3x5)
TEST(ColsPerm, TrianglesPartitionExpansion) {
  Rng rng(2);
  for (int k = 0; k < 20; ++k) {
    auto m = support::triangles_matrix(rng);
    Integer e = perm_block(m, {1, 2}, {1, 3}) * entry(m, 3, 4) * perm_block(m, {4, 5}, {2, 5}) +
                perm_block(m, {1, 2}, {1, 4}) * entry(m, 3, 3) * perm_block(m, {4, 5}, {2, 5}) +
                perm_block(m, {1, 2}, {1, 4}) * entry(m, 3, 2) * perm_block(m, {4, 5}, {3, 5});
    EXPECT_EQ(cols_perm(m, support::triangles_column_decomposition()).value, e);
  }
}

TEST(ColsPerm, GridFamily) {
  auto m = grid_matrix<Integer>(3);
  auto td = heuristic_decomposition(column_graph(m), Heuristic::MinFill);
  Integer expected = oracle::ryser_permanent(m);
  EXPECT_EQ(cols_perm(m, td).value, expected);
  EXPECT_EQ(gen(m, FunctionSignature::permanent()), expected);
  auto m4 = grid_matrix<Integer>(4);
  EXPECT_EQ(cols_perm(m4, heuristic_decomposition(column_graph(m4), Heuristic::MinDegree)).value,
            oracle::ryser_permanent(m4));
}

TEST(ColsPerm, MatchesRyserOnRandomMatrices) {
  Rng rng(3);
  for (int k = 0; k < 60; ++k) {
    std::size_t n = 2 + k % 7;
    auto m = random_matrix<Integer>(n, 0.2 + 0.8 * (k % 5) / 4.0, rng);
    auto td = heuristic_decomposition(column_graph(m), k % 2 ? Heuristic::MinFill : Heuristic::MinDegree);
    EXPECT_EQ(cols_perm(m, td).value, oracle::ryser_permanent(m)) << write_tensor(m);
  }
}

TEST(ColsPerm, RejectsWrongDecomposition) {
  auto m = diagonal_tensor<Integer>(3, 2);
  EXPECT_THROW(cols_perm(m, heuristic_bipartite(m)), IncompatibleInput);
  TreeDecomposition partial(1, WidthConvention::SinglePart, {support::bag({{0, 1}})}, {TreeDecomposition::kNoParent});
  EXPECT_THROW(cols_perm(m, partial), InvalidDecomposition);
}

TEST(Generalized, TrianglesWithBipartiteDecomposition) {
  auto td = support::triangles_bipartite_decomposition();
  Rng rng(4);
  for (int k = 0; k < 20; ++k) {
    auto m = support::triangles_matrix(rng);
    EXPECT_EQ(generalized_engine(m, FunctionSignature::permanent(), td).value, oracle::ryser_permanent(m));
    EXPECT_EQ(generalized_engine(m, FunctionSignature::determinant(), td).value,
              oracle::naive_generalized(m, FunctionSignature::determinant()));
  }
}

// Perm(M) = perm(a1a2; x1x4) perm(a3a4a5; x2x3x5) + perm(a1a2a3; x1x3x4) perm(a4a5; x2x5)
//         - M[a3,x3] perm(a1a2; x1x4) perm(a4a5; x2x5)
TEST(Generalized, TrianglesInclusionExclusionExpansion) {
  Rng rng(5);
  for (int k = 0; k < 20; ++k) {
    auto m = support::triangles_matrix(rng);
    Integer left = perm_block(m, {1, 2}, {1, 4}), right = perm_block(m, {4, 5}, {2, 5});
    Integer e = left * perm_block(m, {3, 4, 5}, {2, 3, 5}) + perm_block(m, {1, 2, 3}, {1, 3, 4}) * right -
                entry(m, 3, 3) * left * right;
    EXPECT_EQ(generalized_engine(m, FunctionSignature::permanent(), support::triangles_bipartite_decomposition()).value, e);
    EXPECT_EQ(perm_block(m, {1, 2, 3}, {1, 3, 4}),
              entry(m, 3, 3) * left + entry(m, 3, 4) * perm_block(m, {1, 2}, {1, 3}));
    EXPECT_EQ(perm_block(m, {3, 4, 5}, {2, 3, 5}),
              entry(m, 3, 3) * right + entry(m, 3, 2) * perm_block(m, {4, 5}, {3, 5}));
  }
}

TEST(Generalized, DeterminantOfSumMatrix) {
  EXPECT_EQ(gen(lemma_sum_matrix(std::vector<Integer>{1, 2, 3}), FunctionSignature::determinant()), 6);
  Rng rng(6);
  for (int k = 0; k < 10; ++k) {
    std::vector<Integer> s(3 + k);
    Integer total = 0;
    for (auto& v : s) total += v = support::random_value(rng, -20, 20);
    EXPECT_EQ(gen(lemma_sum_matrix(s), FunctionSignature::determinant()), total);
  }
}

TEST(Generalized, DiscriminantIdentities) {
  auto id = diagonal_tensor<Integer>(2, 2);
  EXPECT_EQ(gen(slices({id, id}), FunctionSignature::mixed_discriminant()), 2);
  EXPECT_EQ(gen(slices({diag({1, 2}), diag({3, 4})}), FunctionSignature::mixed_discriminant()), 10);
}

TEST(Generalized, HyperdeterminantMatchesNaive) {
  Rng rng(7);
  for (int k = 0; k < 10; ++k) {
    auto t = random_tensor<Integer>({3, 3, 3, 3}, 0.3, rng);
    auto sig = FunctionSignature::hyperdeterminant(3);
    EXPECT_EQ(gen(t, sig), oracle::naive_generalized(t, sig));
  }
}

TEST(Generalized, EverySignatureMatchesNaive) {
  Rng rng(8);
  for (std::size_t d = 1; d <= 3; ++d)
    for (const auto& sig : signatures(d))
      for (int k = 0; k < 6; ++k) {
        const std::size_t n = 2 + k % (d == 3 ? 3 : 4);
        auto t = random_tensor<Integer>(std::vector<std::size_t>(d + 1, n), d == 1 ? 0.6 : 0.35, rng);
        EXPECT_EQ(gen(t, sig), oracle::naive_generalized(t, sig)) << "d=" << d << "\n" << write_tensor(t);
      }
}

// The root table holds F of the tensor restricted to the forgotten
// elements plus the visible part of each mask.
TEST(Generalized, RootTableHoldsPartialValues) {
  Rng rng(9);
  int checked = 0;
  for (auto sig : {FunctionSignature::permanent(), FunctionSignature::determinant()})
    for (int k = 0; k < 10; ++k) {
      auto m = random_matrix<Integer>(6, 0.6, rng);
      auto td = heuristic_bipartite(m);
      auto r = generalized_engine(m, sig, td, {.keep_root_table = true});
      // Matrices with an empty row or column stop before the sweep.
      if (!r.root_table) continue;
      ++checked;
      const auto& table = *r.root_table;
      const Bag& root = td.bag(td.root());
      for (Mask s = 0; s < table.size(); ++s) {
        AxisSubsetSelection sel;
        unsigned bit = 0;
        for (std::size_t l = 0; l < 2; ++l) {
          std::vector<Index> ax;
          for (Index i = 0; i < 6; ++i) {
            if (!root.contains(l, i)) ax.push_back(i);
            else if (s >> bit++ & 1) ax.push_back(i);
          }
          sel.axes.push_back(ax);
        }
        Integer expected = sel.axes[0].size() == sel.axes[1].size() ? oracle::naive_generalized(subtensor(m, sel), sig) : Integer(0);
        EXPECT_EQ(table[s], expected) << "mask " << s;
      }
    }
  EXPECT_GE(checked, 10);
}

TEST(Generalized, PermutationInvariance) {
  Rng rng(10);
  for (int k = 0; k < 20; ++k) {
    std::size_t n = 2 + k % 6;
    auto m = random_matrix<Integer>(n, 0.6, rng);
    auto p = support::random_permutation(n, rng), q = support::random_permutation(n, rng);
    auto pm = support::permute_rows_cols(m, p, q);
    EXPECT_EQ(gen(pm, FunctionSignature::permanent()), gen(m, FunctionSignature::permanent()));
    EXPECT_EQ(gen(pm, FunctionSignature::determinant()),
              perm_sign(p) * perm_sign(q) * gen(m, FunctionSignature::determinant()));
  }
}

TEST(Generalized, DiscriminantIsMultilinearInSlices) {
  Rng rng(11);
  for (int k = 0; k < 10; ++k) {
    const std::size_t n = 3 + k % 2;
    std::vector<SparseTensor<Integer>> base;
    for (std::size_t i = 0; i < n; ++i) base.push_back(random_matrix<Integer>(n, 0.6, rng));
    auto a = random_matrix<Integer>(n, 0.6, rng), b = random_matrix<Integer>(n, 0.6, rng);
    auto da = oracle::dense(a), db = oracle::dense(b);
    std::vector<std::vector<Integer>> sum(n, std::vector<Integer>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) sum[i][j] = 3 * da[i][j] - 2 * db[i][j];
    auto with = [&](const SparseTensor<Integer>& s) {
      auto ms = base;
      ms[1] = s;
      return gen(slices(ms), FunctionSignature::mixed_discriminant());
    };
    EXPECT_EQ(with(matrix_from_dense<Integer>(sum)), 3 * with(a) - 2 * with(b));
  }
}

TEST(Generalized, DecompositionIndependence) {
  Rng rng(12);
  for (int k = 0; k < 15; ++k) {
    std::size_t n = 3 + k % 5;
    auto m = random_matrix<Integer>(n, 0.5, rng);
    for (auto f : {Function::Perm, Function::Det}) {
      std::vector<Integer> values;
      for (auto g : {DecompositionGraph::Bipartite, DecompositionGraph::Column, DecompositionGraph::Symmetrized})
        for (auto h : {Heuristic::MinFill, Heuristic::MinDegree})
          values.push_back(compute(f, m, DecompositionSource{std::nullopt, g, h}).value);
      std::vector<Bag> one{Bag(std::vector<std::vector<Index>>(2, [&] {
        std::vector<Index> all(n);
        std::iota(all.begin(), all.end(), Index{0});
        return all;
      }()))};
      TreeDecomposition single(2, WidthConvention::MultiPart, one, {TreeDecomposition::kNoParent});
      values.push_back(compute(f, m, DecompositionSource{single, DecompositionGraph::Bipartite, Heuristic::MinFill}).value);
      for (const auto& v : values) EXPECT_EQ(v, values.front());
      EXPECT_EQ(Rational(values.front()), f == Function::Perm ? Rational(oracle::ryser_permanent(m)) : oracle::exact_determinant(m));
    }
  }
}

TEST(Generalized, ThreadsDoNotChangeResults) {
  Rng rng(13);
  for (int k = 0; k < 5; ++k) {
    auto m = band_matrix<Integer>(60, 1, 2, rng);
    auto td = lift_column_to_bipartite(band_column_decomposition(60, 1, 2), m);
    auto one = generalized_engine(m, FunctionSignature::determinant(), td);
    auto four = generalized_engine(m, FunctionSignature::determinant(), td, {.threads = 4});
    EXPECT_EQ(one.value, four.value);
    EXPECT_EQ(one.stats.ring_mults, four.stats.ring_mults);
    EXPECT_EQ(one.stats.peak_cells, four.stats.peak_cells);
    auto ctd = band_column_decomposition(60, 1, 2);
    EXPECT_EQ(cols_perm(m, ctd).value, cols_perm(m, ctd, {.threads = 4}).value);
  }
}

TEST(Generalized, WidthCap) {
  auto m = diagonal_tensor<Integer>(16, 2);
  std::vector<Index> all(16);
  std::iota(all.begin(), all.end(), Index{0});
  TreeDecomposition single(2, WidthConvention::MultiPart, {Bag(std::vector<std::vector<Index>>{all, all})},
                           {TreeDecomposition::kNoParent});
  EXPECT_THROW(generalized_engine(m, FunctionSignature::permanent(), single), WidthTooLarge);
  TreeDecomposition cols(1, WidthConvention::SinglePart, {Bag(std::vector<std::vector<Index>>{all})},
                         {TreeDecomposition::kNoParent});
  // All 16 rows land in the one bag, so the local block has 32 elements.
  EXPECT_THROW(cols_perm(m, cols), WidthTooLarge);
}

TEST(Generalized, NonSquareAndEmptySlicesGiveZero) {
  Rng rng(14);
  auto wide = random_tensor<Integer>({3, 4}, 0.8, rng);
  EXPECT_EQ(gen(wide, FunctionSignature::permanent()), 0);
  EXPECT_EQ(cols_perm(wide, heuristic_decomposition(column_graph(wide), Heuristic::MinFill)).value, 0);
  auto holes = matrix_from_dense<Integer>(std::vector<std::vector<long>>{{1, 0, 2}, {3, 0, 4}, {5, 0, 6}});
  EXPECT_EQ(gen(holes, FunctionSignature::determinant()), 0);
}

TEST(Compute, Examples) {
  DecompositionSource heuristic;
  EXPECT_EQ(compute(Function::Perm, diagonal_tensor<Integer>(4, 2), heuristic).value, 1);
  // Permutation matrix of (2,3,1).
  auto p = matrix_from_dense<Integer>(std::vector<std::vector<long>>{{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
  EXPECT_EQ(compute(Function::Det, p, heuristic).value, 1);
  auto t3 = diagonal_tensor<Integer>(3, 3);
  try {
    compute(Function::Hyperdet, t3, heuristic);
    FAIL() << "expected IncompatibleInput";
  } catch (const IncompatibleInput& e) {
    EXPECT_NE(std::string(e.what()).find("hyperdeterminant requires even tensor order"), std::string::npos);
  }
  EXPECT_EQ(compute(Function::Disc, t3, heuristic).value, 1);
  EXPECT_EQ(compute(Function::MdPerm, diagonal_tensor<Integer>(3, 5), heuristic).value, 1);
  EXPECT_THROW(compute(Function::Disc, p, heuristic), IncompatibleInput);
  EXPECT_THROW(compute(Function::Perm, t3, DecompositionSource{std::nullopt, DecompositionGraph::Column}), IncompatibleInput);
  EXPECT_EQ(compute(Function::Perm, p, DecompositionSource{std::nullopt, DecompositionGraph::Column}).engine, "cols_perm");
  EXPECT_EQ(parse_function("hyperdet"), Function::Hyperdet);
  EXPECT_THROW(parse_function("trace"), std::invalid_argument);
  EXPECT_EQ(parse_decomposition_graph("multipartite"), DecompositionGraph::Bipartite);
}

TEST(Compute, StatsAreFilled) {
  Rng rng(15);
  auto m = band_matrix<Integer>(30, 1, 1, rng);
  auto out = compute(Function::Det, m, DecompositionSource{});
  EXPECT_GT(out.stats.nodes, 1u);
  EXPECT_GT(out.stats.ring_mults, 0u);
  EXPECT_GE(out.stats.width_multi_part, 2u);
  EXPECT_LE(out.stats.max_bag, 8u);
}

TEST(ColsPerm, BandScalesLinearly) {
  Rng rng(16);
  std::uint64_t last = 0;
  for (std::size_t n : {100, 200, 400}) {
    auto m = band_matrix<Integer>(n, 1, 1, rng);
    auto r = cols_perm(m, band_column_decomposition(n, 1, 1));
    EXPECT_EQ(r.stats.width_single_part, 2u);
    if (last) {
      EXPECT_LE(r.stats.ring_mults, 3 * last);
    }
    last = r.stats.ring_mults;
  }
}
