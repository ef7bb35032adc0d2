#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>
#include <set>

#include "sgcol/errors.hpp"
#include "sgcol/hermite.hpp"
#include "sgcol/multi_index.hpp"
#include "test_support.hpp"

namespace sgcol {
namespace {

using testing::random_monotone_set;

MultiIndex D(std::initializer_list<int> l) { return MultiIndex::dense(l); }

// Brute-force |Xi_Lambda|: materialize every tensor node as a dense vector of
// doubles and deduplicate coordinates rounded to 1e-12.
std::size_t count_points_by_coordinates(const MonotoneSet& lambda) {
  const int dims = std::max(1, lambda.max_dim());
  std::set<std::vector<long long>> seen;
  for (const auto& k : lambda.members()) {
    std::vector<int> idx(dims, 0);
    while (true) {
      std::vector<long long> key(dims);
      for (int m = 0; m < dims; ++m) {
        const auto& r = gauss_hermite(k[m + 1] + 1);
        key[m] = std::llround(r.nodes[idx[m]] * 1e12);
      }
      seen.insert(key);
      int m = dims - 1;
      while (m >= 0 && ++idx[m] > k[m + 1]) idx[m--] = 0;
      if (m < 0) break;
    }
  }
  return seen.size();
}

TEST(MultiIndexTest, CanonicalForm) {
  MultiIndex a = D({0, 2, 0, 1});
  EXPECT_EQ(a.entries().size(), 2u);
  EXPECT_EQ(a[2], 2);
  EXPECT_EQ(a[4], 1);
  EXPECT_EQ(a[1], 0);
  EXPECT_EQ(a[100], 0);
  EXPECT_EQ(a.l1(), 3);
  EXPECT_EQ(a.support_size(), 2);
  EXPECT_EQ(a.max_dim(), 4);
  a.set(2, 0);
  EXPECT_EQ(a, MultiIndex::unit(4));
  EXPECT_EQ(D({0, 0, 0}), MultiIndex{});
  EXPECT_THROW(MultiIndex{}.minus_unit(1), ContractError);
  EXPECT_THROW(MultiIndex::unit(0), ContractError);
}

TEST(MultiIndexTest, LexicographicOrder) {
  EXPECT_LT(MultiIndex{}, MultiIndex::unit(1));
  EXPECT_LT(MultiIndex::unit(1), MultiIndex::unit(1, 2));
  EXPECT_LT(MultiIndex::unit(1, 2), MultiIndex::unit(2));
  EXPECT_LT(D({1, 1}), MultiIndex::unit(1, 2));
}

TEST(MultiIndexTest, Leq) {
  EXPECT_TRUE(leq(D({1, 0}), D({1, 2})));
  EXPECT_FALSE(leq(D({2, 0}), D({1, 2})));
  EXPECT_TRUE(leq(MultiIndex{}, D({0, 0, 3})));
  EXPECT_TRUE(leq(MultiIndex{}, MultiIndex{}));
}

TEST(MonotoneSetTest, RejectsNonMonotone) {
  MonotoneSet s = MonotoneSet::origin();
  EXPECT_THROW(s.insert(D({1, 1})), ContractError);
  EXPECT_THROW(s.insert(MultiIndex{}), ContractError);
  EXPECT_THROW(MonotoneSet::from({MultiIndex{}, D({2})}), ContractError);
  EXPECT_NO_THROW(MonotoneSet::from({D({1}), MultiIndex{}, D({2})}));
}

TEST(EnvelopeTest, Examples) {
  EXPECT_EQ(envelope(D({2, 1})).size(), 6u);
  EXPECT_EQ(envelope(MultiIndex{}).size(), 1u);
  EXPECT_EQ(envelope(D({1, 1, 1})).size(), 8u);
}

TEST(EnvelopeTest, CardinalityIsProduct) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> dim(1, 8);
  for (int t = 0; t < 200; ++t) {
    MultiIndex nu;
    std::uniform_int_distribution<int> budget(0, 10);
    const int total = budget(rng);
    for (int j = 0; j < total; ++j) nu = nu.plus_unit(dim(rng));
    std::size_t prod = 1;
    for (const auto& [m, l] : nu.entries()) prod *= std::size_t(l) + 1;
    const auto env = envelope(nu);
    EXPECT_EQ(env.size(), prod);
    for (const auto& i : env.members()) EXPECT_TRUE(leq(i, nu));
  }
}

TEST(NeighborsTest, Examples) {
  const auto n0 = neighbors(MonotoneSet::origin(), 2);
  ASSERT_EQ(n0.size(), 2u);
  EXPECT_EQ(n0[0], MultiIndex::unit(1));
  EXPECT_EQ(n0[1], MultiIndex::unit(2));

  MonotoneSet s = MonotoneSet::origin();
  s.insert(MultiIndex::unit(1));
  const auto n1 = neighbors(s, 1);
  ASSERT_EQ(n1.size(), 2u);
  EXPECT_EQ(n1[0], MultiIndex::unit(1, 2));
  EXPECT_EQ(n1[1], MultiIndex::unit(2));

  EXPECT_EQ(neighbors(MonotoneSet::origin(), 5, 3).size(), 3u);
}

TEST(NeighborsTest, InsertionsPreserveMonotonicity) {
  std::mt19937_64 rng(5);
  for (int run = 0; run < 20; ++run) {
    MonotoneSet s = MonotoneSet::origin();
    for (int step = 0; step < 30; ++step) {
      const auto cands = neighbors(s, 2);
      ASSERT_FALSE(cands.empty());
      for (const auto& nu : cands) {
        EXPECT_TRUE(s.admissible(nu));
        EXPECT_LE(nu.max_dim(), s.max_dim() + 2);
      }
      std::uniform_int_distribution<std::size_t> pick(0, cands.size() - 1);
      s.insert(cands[pick(rng)]);
      for (const auto& nu : s.members()) {
        for (const auto& [m, l] : nu.entries()) EXPECT_TRUE(s.contains(nu.minus_unit(m)));
      }
    }
  }
}

TEST(NeighborsTest, UnionOfEnvelopesRecoversSet) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 30; ++t) {
    const auto s = random_monotone_set(rng, 1 + t, 4);
    std::set<MultiIndex> u;
    for (const auto& nu : s.members()) {
      const auto env = envelope(nu);
      for (const auto& i : env.members()) u.insert(i);
    }
    const auto sorted = s.sorted();
    EXPECT_EQ(std::vector<MultiIndex>(u.begin(), u.end()), sorted);
  }
}

TEST(GeneratorsTest, TotalDegree) {
  EXPECT_EQ(td_set(1, 2).sorted(), (std::vector<MultiIndex>{MultiIndex{}, D({1}), D({0, 1})}));
  for (int w = 0; w <= 7; ++w) EXPECT_EQ(td_set(w, 1).size(), std::size_t(w + 1));
  EXPECT_EQ(td_set(2, 2).size(), 6u);
  EXPECT_EQ(td_set(3, 3).size(), 20u);  // C(6,3)
}

TEST(GeneratorsTest, HyperbolicCross) {
  EXPECT_EQ(hc_set(1, 4).size(), 1u);
  EXPECT_EQ(hc_set(2, 2).sorted(), (std::vector<MultiIndex>{MultiIndex{}, D({1}), D({0, 1})}));
  EXPECT_TRUE(hc_set(4, 2).contains(D({1, 1})));
  EXPECT_FALSE(hc_set(3, 2).contains(D({1, 1})));
}

TEST(CombinationTest, Examples) {
  const auto rect = combination_coefficients(envelope(D({1, 1})));
  ASSERT_EQ(rect.size(), 1u);
  EXPECT_EQ(rect[0].first, D({1, 1}));
  EXPECT_EQ(rect[0].second, 1);

  const auto cross = combination_coefficients(td_set(1, 2));
  ASSERT_EQ(cross.size(), 3u);
  EXPECT_EQ(cross[0], std::make_pair(MultiIndex{}, -1));
  EXPECT_EQ(cross[1], std::make_pair(D({1}), 1));
  EXPECT_EQ(cross[2], std::make_pair(D({0, 1}), 1));
}

// Brute force: expand every Delta_i into its 2^{|i|_0} signed tensor terms.
TEST(CombinationTest, MatchesDetailExpansion) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 40; ++t) {
    const auto s = random_monotone_set(rng, 1 + (t % 25), 5);
    std::map<MultiIndex, int> brute;
    for (const auto& i : s.members()) {
      for (const auto& [k, c] : detail_terms(i)) brute[k] += c;
    }
    std::erase_if(brute, [](const auto& kv) { return kv.second == 0; });
    const auto cc = combination_coefficients(s);
    EXPECT_EQ(CombinationCoefficients(brute.begin(), brute.end()), cc);
    int sum = 0;
    for (const auto& [k, c] : cc) {
      sum += c;
      EXPECT_TRUE(s.contains(k));
    }
    EXPECT_EQ(sum, 1);
  }
}

TEST(CombinationTest, ManyActiveDimensions) {
  // The origin touches 40 dimensions; enumeration must not be exponential.
  MonotoneSet s = MonotoneSet::origin();
  for (int m = 1; m <= 40; ++m) s.insert(MultiIndex::unit(m));
  const auto cc = combination_coefficients(s);
  ASSERT_EQ(cc.size(), 41u);
  EXPECT_EQ(cc[0].second, -39);
}

TEST(GridTest, Examples) {
  const auto p0 = sparse_grid_points(MonotoneSet::origin());
  ASSERT_EQ(p0.size(), 1u);
  EXPECT_TRUE(p0[0].coords.empty());
  EXPECT_EQ(p0[0].coordinates(3), (std::vector<double>{0.0, 0.0, 0.0}));

  const auto line = td_set(2, 1);
  EXPECT_EQ(sparse_grid_points(line).size(), 5u);
  const auto c = count_points(line);
  EXPECT_EQ(c.exact, 5u);
  EXPECT_EQ(c.bound, 6u);

  const auto c0 = count_points(MonotoneSet::origin());
  EXPECT_EQ(c0.exact, 1u);
  EXPECT_EQ(c0.bound, 1u);
}

TEST(GridTest, TensorGridSize) {
  EXPECT_EQ(tensor_grid(D({2, 0, 3})).size(), 12u);
  EXPECT_EQ(tensor_grid(MultiIndex{}).size(), 1u);
}

TEST(GridTest, SymbolicCountMatchesCoordinateCount) {
  for (int M : {1, 2, 3}) {
    for (int w = 0; w <= 6; ++w) {
      EXPECT_EQ(count_points(td_set(w, M)).exact, count_points_by_coordinates(td_set(w, M))) << M << "," << w;
    }
    for (int w = 1; w <= 8; ++w) {
      EXPECT_EQ(count_points(hc_set(w, M)).exact, count_points_by_coordinates(hc_set(w, M))) << M << "," << w;
    }
  }
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    const auto s = random_monotone_set(rng, 20, 3);
    EXPECT_EQ(count_points(s).exact, count_points_by_coordinates(s));
  }
}

TEST(GridTest, QuadraticBound) {
  for (int M : {2, 4}) {
    for (int w = 0; w <= 6; ++w) {
      const auto c = count_points(td_set(w, M));
      EXPECT_LE(c.exact, c.bound);
    }
    for (int w = 1; w <= 6; ++w) {
      const auto c = count_points(hc_set(w, M));
      EXPECT_LE(c.exact, c.bound);
    }
  }
  for (int N = 1; N <= 30; ++N) {
    const auto c = count_points(td_set(N - 1, 1));
    const std::size_t expected = std::size_t(N) * (N + 1) / 2 - ((N + 1) / 2 - 1);
    EXPECT_EQ(c.exact, expected) << N;
  }
}

}  // namespace
}  // namespace sgcol
