#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "graphheat/errors.hpp"
#include "graphheat/paths.hpp"
#include "graphheat/special_functions.hpp"
#include "oracles.hpp"

namespace gh = graphheat;
using gh::Bond;
using gh::Direction;

namespace {

constexpr Bond fwd(gh::EdgeId e) { return {e, Direction::Forward}; }
constexpr Bond bwd(gh::EdgeId e) { return {e, Direction::Backward}; }

gh::PathClass everything(const gh::MetricGraph& g) {
  gh::PathClass cls;
  cls.prune_zero = false;
  (void)g;
  return cls;
}

gh::PathClass unpruned_dirichlet(const gh::MetricGraph& g) {
  auto cls = gh::PathClass::dirichlet(g);
  cls.prune_zero = false;
  return cls;
}

using LengthAlpha = std::vector<std::pair<double, double>>;

LengthAlpha length_alpha(const std::vector<gh::DirectedPath>& paths) {
  LengthAlpha out;
  for (const auto& p : paths) out.emplace_back(p.length(), p.alpha());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(Beta, StarCenter) {
  const auto g = fx::star(3, 1.0, 1);  // center 0, Dirichlet leaf 1
  EXPECT_DOUBLE_EQ(gh::beta(g, bwd(0), fwd(1)), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(gh::beta(g, bwd(0), fwd(0)), 2.0 / 3.0 - 1.0);
  EXPECT_DOUBLE_EQ(gh::beta(g, fwd(0), bwd(0)), -1.0);  // at the Dirichlet leaf
}

TEST(Beta, DegreeTwoVertexIsInvisible) {
  const auto g = fx::path({1.0, 1.0}, true, false);
  EXPECT_DOUBLE_EQ(gh::beta(g, fwd(0), fwd(1)), 1.0);
  EXPECT_DOUBLE_EQ(gh::beta(g, fwd(0), bwd(0)), 0.0);
}

TEST(Beta, LoopReversal) {
  const auto g = fx::lasso();
  EXPECT_DOUBLE_EQ(gh::beta(g, fwd(1), fwd(1)), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(gh::beta(g, fwd(1), bwd(1)), -1.0 / 3.0);
  EXPECT_DOUBLE_EQ(gh::beta(g, bwd(1), bwd(1)), 2.0 / 3.0);
}

TEST(Beta, NonConsecutiveRejected) {
  const auto g = fx::star(3, 1.0, 1);
  EXPECT_THROW(gh::beta(g, bwd(0), bwd(1)), gh::DomainError);
}

TEST(ScatteringCoefficient, FigureExample) {
  // Dirichlet leaf -> center, back to the leaf, reflect there, then transfer to arm 1.
  const auto g = fx::star(3, 1.0, 1);
  const gh::DirectedPath p(g, 1, {bwd(0), fwd(0), bwd(0), fwd(1)});
  EXPECT_DOUBLE_EQ(p.alpha(), 2.0 / 9.0);
  EXPECT_DOUBLE_EQ(gh::scattering_coefficient(g, p), 2.0 / 9.0);
  EXPECT_DOUBLE_EQ(gh::reverse(g, p).alpha(), 2.0 / 9.0);
}

TEST(ScatteringCoefficient, ShortPathsHaveUnitCoefficient) {
  const auto g = fx::lasso();
  EXPECT_EQ(gh::DirectedPath(g, 0).alpha(), 1.0);
  EXPECT_EQ(gh::DirectedPath(g, 1, {fwd(1)}).alpha(), 1.0);
  EXPECT_THROW(gh::DirectedPath(g, 0, {fwd(1)}), gh::DomainError);
}

TEST(DirectedPath, Counts) {
  const auto g = fx::lasso();
  const gh::DirectedPath p(g, 0, {fwd(0), fwd(1), bwd(1), bwd(0)});
  EXPECT_DOUBLE_EQ(p.length(), 6.0);
  EXPECT_EQ(p.traversals(0), 2);
  EXPECT_EQ(p.traversals(1), 2);
  EXPECT_EQ(p.hits(0), 2);
  EXPECT_EQ(p.hits(1), 3);
  EXPECT_EQ(p.end_vertex(), 0u);
}

TEST(Enumerate, IntervalBounces) {
  const double l = 1.5;
  const auto g = fx::interval(l);
  const auto paths = gh::enumerate(g, gh::PathClass::dirichlet(g), 5 * l);
  ASSERT_EQ(paths.size(), 2u);
  EXPECT_DOUBLE_EQ(paths[0].length(), 2 * l);
  EXPECT_DOUBLE_EQ(paths[0].alpha(), 1.0);
  EXPECT_DOUBLE_EQ(paths[1].length(), 4 * l);
  EXPECT_DOUBLE_EQ(paths[1].alpha(), -1.0);
}

TEST(Enumerate, EmptyBelowShortestReturn) {
  const auto g = fx::lasso();
  EXPECT_TRUE(gh::enumerate(g, gh::PathClass::dirichlet(g), 1.99).empty());
}

TEST(Enumerate, NonDecreasingAndMatchesBruteForce) {
  for (const auto& g : {fx::lasso(), fx::star({1.0, 1.3, 0.8}, 1), fx::figure_eight()}) {
    const double L = 6.1;
    const auto paths = gh::enumerate(g, unpruned_dirichlet(g), L);
    for (std::size_t i = 1; i < paths.size(); ++i) EXPECT_LE(paths[i - 1].length(), paths[i].length());

    LengthAlpha brute;
    for (const auto& p : oracle::brute_force_paths(g, g.dirichlet_vertices(), L))
      if (g.is_dirichlet(oracle::raw_end(g, p))) brute.emplace_back(p.length, p.alpha);
    std::sort(brute.begin(), brute.end());
    const auto mine = length_alpha(paths);
    ASSERT_EQ(mine.size(), brute.size());
    for (std::size_t i = 0; i < mine.size(); ++i) {
      EXPECT_NEAR(mine[i].first, brute[i].first, 1e-12);
      EXPECT_NEAR(mine[i].second, brute[i].second, 1e-14);
    }
    const std::set<gh::DirectedPath> unique(paths.begin(), paths.end());
    EXPECT_EQ(unique.size(), paths.size());
  }
}

TEST(Enumerate, ClassSelectors) {
  const auto g = fx::star(3, 1.0, 1);
  gh::PathClass cls;
  cls.start = std::vector<gh::VertexId>{2};
  cls.exact_bonds = 3;
  cls.prune_zero = false;
  const auto paths = gh::enumerate(g, cls, 10.0);
  EXPECT_EQ(paths.size(), 3u);  // leaf 2 -> center -> any leaf -> center
  for (const auto& p : paths) {
    EXPECT_EQ(p.start_vertex(), 2u);
    EXPECT_EQ(p.size(), 3u);
  }
  gh::PathClass end_at_center;
  end_at_center.end = std::vector<gh::VertexId>{0};
  const auto both = cls.intersect(end_at_center);
  EXPECT_EQ(gh::enumerate(g, both, 10.0).size(), 3u);
  gh::PathClass end_at_leaf;
  end_at_leaf.end = std::vector<gh::VertexId>{1, 2, 3};
  EXPECT_TRUE(gh::enumerate(g, cls.intersect(end_at_leaf), 10.0).empty());
}

TEST(Enumerate, InitialBondSplitsPartitionTheStream) {
  const auto g = fx::figure_eight();
  const auto cls = everything(g);
  const double L = 4.2;
  const auto all = gh::enumerate(g, cls, L);
  std::size_t total = 0;
  for (std::size_t b = 0; b < 2 * g.edge_count(); ++b) {
    gh::PathEnumerator split(g, cls, L, {Bond::from_index(b)});
    while (auto p = split.next()) {
      if (p->size() > 0) EXPECT_EQ(p->bonds().front(), Bond::from_index(b));
      total += p->size() > 0;
    }
  }
  std::size_t nontrivial = 0;
  for (const auto& p : all) nontrivial += p.size() > 0;
  EXPECT_EQ(total, nontrivial);
}

TEST(DumpPaths, Format) {
  const auto g = fx::interval(1.0);
  std::ostringstream os;
  gh::dump_paths(os, gh::enumerate(g, gh::PathClass::dirichlet(g), 2.0));
  EXPECT_EQ(os.str(), "2 1 0 1\n");
}

TEST(Reverse, Involution) {
  const auto g = fx::figure_eight();
  for (const auto& p : gh::enumerate(g, everything(g), 3.6)) {
    if (p.size() == 0) continue;
    const auto r = gh::reverse(g, p);
    EXPECT_EQ(gh::reverse(g, r), p);
    EXPECT_DOUBLE_EQ(r.length(), p.length());
    EXPECT_NEAR(r.alpha(), p.alpha(), 1e-15);
    EXPECT_EQ(r.start_vertex(), p.end_vertex());
    EXPECT_EQ(r.end_vertex(), p.start_vertex());
  }
}

TEST(Extensions, CountsAreDegrees) {
  const auto g = fx::lasso();
  const gh::DirectedPath p(g, 0, {fwd(0), fwd(1)});
  EXPECT_EQ(gh::extensions(g, p, gh::Side::Pre).size(), g.degree(0));
  EXPECT_EQ(gh::extensions(g, p, gh::Side::Post).size(), g.degree(1));
  for (const auto& q : gh::extensions(g, p, gh::Side::Post)) EXPECT_EQ(q.size(), 3u);
}

class PathIdentities : public ::testing::TestWithParam<int> {
 protected:
  gh::MetricGraph graph() const { return GetParam() == 0 ? fx::lasso() : fx::star(3, 1.0, 1); }
};

TEST_P(PathIdentities, DualSumIdentity) {
  const auto g = graph();
  const double L = 6.0;
  for (const auto& p : gh::enumerate(g, everything(g), L)) {
    if (p.size() == 0) continue;
    for (gh::Side side : {gh::Side::Pre, gh::Side::Post}) {
      const gh::VertexId v = side == gh::Side::Pre ? p.start_vertex() : p.end_vertex();
      double sum = 0.0;
      for (const auto& q : gh::extensions(g, p, side)) sum += q.alpha();
      const double expected = g.is_dirichlet(v) ? -p.alpha() : p.alpha();
      EXPECT_NEAR(sum, expected, 1e-12);
    }
  }
}

TEST_P(PathIdentities, DecompositionIsAPartition) {
  const auto g = graph();
  const double L = 6.0;
  for (gh::VertexId w = 0; w < g.vertex_count(); ++w) {
    gh::PathClass cls = everything(g);
    cls.end = std::vector<gh::VertexId>{w};
    const auto paths = gh::enumerate(g, cls, L);
    std::set<gh::DirectedPath> target;
    for (const auto& q : paths)
      if (q.size() >= 2) target.insert(q);
    std::multiset<gh::DirectedPath> covered;
    for (const auto& p : paths) {
      if (p.size() == 0) continue;
      for (const auto& q : gh::extensions(g, p, gh::Side::Pre))
        if (q.length() <= L) covered.insert(q);
    }
    EXPECT_EQ(covered.size(), target.size()) << "end vertex " << w;
    EXPECT_TRUE(std::equal(covered.begin(), covered.end(), target.begin(), target.end()));
  }
}

TEST_P(PathIdentities, CountBound) {
  const auto g = graph();
  std::map<std::size_t, std::size_t> per_size;
  for (const auto& p : gh::enumerate(g, unpruned_dirichlet(g), 6.0)) ++per_size[p.size()];
  ASSERT_FALSE(per_size.empty());
  const double d = static_cast<double>(g.max_degree());
  for (const auto& [n, count] : per_size)
    EXPECT_LE(static_cast<double>(count), 2.0 * std::pow(d, static_cast<double>(n - 1))) << "n = " << n;
}

INSTANTIATE_TEST_SUITE_P(LassoAndStar, PathIdentities, ::testing::Values(0, 1));

TEST(SubdivisionInvariance, SameLengthCoefficientMultiset) {
  for (const auto& g : {fx::lasso(), fx::star({1.0, 1.3, 0.8}, 1)}) {
    const auto h = gh::subdivide(gh::subdivide(g, 0, 0.3), 1, 0.45);
    const double L = 6.55;
    const auto a = length_alpha(gh::enumerate(g, gh::PathClass::dirichlet(g), L));
    const auto b = length_alpha(gh::enumerate(h, gh::PathClass::dirichlet(h), L));
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_NEAR(a[i].first, b[i].first, 1e-12);
      EXPECT_NEAR(a[i].second, b[i].second, 1e-14);
    }
  }
}

namespace {

// Enumerated Dirichlet-path coefficients of the (1, 2) lasso aggregated by traversal counts.
std::map<std::pair<int, int>, double> lasso_enumerated_counts(double L) {
  const auto g = fx::lasso(1.0, 2.0);
  std::map<std::pair<int, int>, double> out;
  for (const auto& p : gh::enumerate(g, gh::PathClass::dirichlet(g), L)) out[{p.traversals(0), p.traversals(1)}] += p.alpha();
  return out;
}

}  // namespace

TEST(LassoPaths, AggregatedCoefficientsMatchCountRecursion) {
  const auto mine = lasso_enumerated_counts(14.0);
  const auto dp = oracle::lasso_count_coefficients(14, 7);
  for (const auto& [key, c] : dp) {
    const auto [a, b] = key;
    if (a + 2 * b > 14) continue;
    const auto it = mine.find(key);
    EXPECT_NEAR(it == mine.end() ? 0.0 : it->second, c, 1e-12) << "a = " << a << " b = " << b;
  }
}

TEST(LassoPaths, ReindexedDoubleSumFormula) {
  // Coefficient of H(((m+n+l+1) l1 + (k+j) l2) / 2 sqrt t) in the reindexed formula, doubled
  // to the directed normalization.
  std::map<std::pair<int, int>, double> formula;
  const int M = 16;
  for (int m = 0; m < M; ++m)
    for (int n = 0; n < M; ++n)
      for (int k = 0; k + n <= m + 1; ++k)
        for (int l = 0; l < M; ++l)
          for (int j = 0; j < M; ++j) {
            const int a = m + n + l + 1, b = k + j;
            if (a + 2 * b > 12) continue;
            formula[{a, b}] += 2.0 * std::pow(-1.0, m) * std::pow(-1.0 / 3.0, n + l) * std::pow(2.0 / 3.0, b);
          }
  const auto mine = lasso_enumerated_counts(12.0);
  std::set<std::pair<int, int>> keys;
  for (const auto& [k, v] : formula) keys.insert(k);
  for (const auto& [k, v] : mine) keys.insert(k);
  for (const auto& key : keys) {
    const double p = formula.count(key) ? formula.at(key) : 0.0;
    const double e = mine.count(key) ? mine.at(key) : 0.0;
    EXPECT_NEAR(p, e, 1e-12) << "pendant traversals " << key.first << ", loop traversals " << key.second;
  }
  const double t = 0.5;
  const double reindexed = oracle::lasso_reindexed_sum(1.0, 2.0, t, 24, &oracle::quad_H);
  double direct = 3.0 - 2.0 * std::sqrt(t / std::numbers::pi);
  for (const auto& [key, c] : oracle::lasso_count_coefficients(60, 30))
    direct += 4.0 * std::sqrt(t) * c * gh::H((key.first + 2.0 * key.second) / (2.0 * std::sqrt(t)));
  EXPECT_NEAR(reindexed, direct, 1e-10);
}
