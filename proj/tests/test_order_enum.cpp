#include <gtest/gtest.h>

#include <cmath>

#include "causent/error.hpp"
#include "causent/order_enum.hpp"
#include "oracles/oracles.hpp"

namespace causent {
namespace {

TEST(EnumerateOrders, TotalsMatchBruteForce) {
  for (int n = 0; n <= 5; ++n) {
    const auto c = enumerate_orders(n);
    const auto o = oracle::brute_force_orders(n);
    EXPECT_EQ(c.total, o.total) << "n=" << n;
  }
}

TEST(EnumerateOrders, FrozenTotals) {
  const std::uint64_t expected[] = {1, 1, 3, 19, 219, 4231, 130023};
  for (int n = 0; n <= 6; ++n) EXPECT_EQ(enumerate_orders(n).total, expected[n]);
}

TEST(EnumerateOrders, ByRelationsMatchesTwoIndependentStrategies) {
  for (int n = 1; n <= 4; ++n) {
    const auto c = enumerate_orders(n);
    std::map<int, std::uint64_t> lib(c.by_relations.begin(), c.by_relations.end());
    EXPECT_EQ(lib, oracle::brute_force_orders(n).by_relations);
    EXPECT_EQ(lib, oracle::extension_orders(n).by_relations);
  }
}

TEST(EnumerateOrders, HistogramsSumToTotal) {
  for (int n = 1; n <= 6; ++n) {
    const auto c = enumerate_orders(n);
    std::uint64_t a = 0, b = 0, h = 0;
    for (auto [k, v] : c.by_relations) a += v;
    for (auto [k, v] : c.by_height) b += v;
    for (auto [k, v] : c.by_hasse_edges) h += v;
    EXPECT_EQ(a, c.total);
    EXPECT_EQ(b, c.total);
    EXPECT_EQ(h, c.total);
  }
}

TEST(EnumerateOrders, RefusesBeyondExhaustiveRange) {
  EXPECT_THROW(enumerate_orders(7), CapacityError);
  EXPECT_THROW(enumerate_orders(-1), ValidationError);
}

TEST(EnumerateOrders, EveryOrderRoundTrips) {
  for (int n = 1; n <= 4; ++n) {
    for_each_order(n, [&](const SmallOrder& o) {
      const StrictOrder ord = o.to_strict_order();
      EXPECT_EQ(transitive_closure(transitive_reduction(ord)), ord);
      EXPECT_EQ(o.height(), compute_levels(ord).height);
      EXPECT_EQ(static_cast<std::size_t>(o.relation_count()), ord.relation_count());
    });
  }
}

TEST(LowerBound, Examples) {
  const auto two = check_lower_bound(enumerate_orders(2));
  EXPECT_TRUE(two.holds);
  EXPECT_EQ(two.bound, 2u);
  const auto four = check_lower_bound(enumerate_orders(4));
  EXPECT_TRUE(four.holds);
  EXPECT_EQ(four.bound, 16u);
  EXPECT_EQ(four.bipartite_family, 16u);
  const auto one = check_lower_bound(enumerate_orders(1));
  EXPECT_TRUE(one.holds);
  EXPECT_EQ(one.bound, 1u);
  for (int n = 1; n <= 6; ++n) EXPECT_TRUE(check_lower_bound(enumerate_orders(n)).holds);
}

TEST(EntropyCurve, SmallCases) {
  const auto curve = empirical_entropy_curve(3);
  ASSERT_GE(curve.size(), 2u);
  EXPECT_EQ(curve[0].relations, 0);
  EXPECT_DOUBLE_EQ(curve[0].entropy, 0.0);
  EXPECT_EQ(curve[1].count, 6u);
  EXPECT_NEAR(curve[1].d, 1.0 / 9.0, 1e-15);
  EXPECT_NEAR(curve[1].entropy, std::log2(6.0) / 9.0, 1e-15);
}

TEST(EntropyCurve, UnimodalAtFour) {
  const auto curve = empirical_entropy_curve(4);
  std::size_t peak = 0;
  for (std::size_t i = 1; i < curve.size(); ++i)
    if (curve[i].count > curve[peak].count) peak = i;
  for (std::size_t i = 1; i <= peak; ++i) EXPECT_GE(curve[i].count, curve[i - 1].count);
  for (std::size_t i = peak + 1; i < curve.size(); ++i) EXPECT_LE(curve[i].count, curve[i - 1].count);
}

TEST(CountKPartite, Examples) {
  EXPECT_DOUBLE_EQ(count_kpartite(std::vector<int>{2, 2}), 4.0);
  EXPECT_DOUBLE_EQ(count_kpartite(std::vector<int>{1, 1, 1}), 2.0);
  EXPECT_DOUBLE_EQ(count_kpartite(std::vector<int>{4, 8, 4}), 64.0);
  EXPECT_THROW(count_kpartite(std::vector<int>{2, 0, 2}), ValidationError);
}

TEST(EstimateOrderCount, AgreesWithExactCountWithinNoise) {
  const auto est = estimate_order_count(4, 200000, 17);
  EXPECT_NEAR(est.estimate, 219.0, 5 * est.std_error + 1e-9);
  EXPECT_EQ(est.samples, 200000u);
}

}  // namespace
}  // namespace causent
