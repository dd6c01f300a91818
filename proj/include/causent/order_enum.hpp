#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "causent/order.hpp"

namespace causent {

inline constexpr int kMaxExhaustiveN = 6;

// Strict order on at most 8 points as successor bitmasks.
struct SmallOrder {
  int n = 0;
  std::array<std::uint8_t, 8> succ{};

  int relation_count() const;
  int height() const;
  int hasse_edge_count() const;
  StrictOrder to_strict_order() const;
};

struct EnumCensus {
  int n = 0;
  std::uint64_t total = 0;
  std::map<int, std::uint64_t> by_relations;   // comparable-pair count -> orders
  std::map<int, std::uint64_t> by_height;
  std::map<int, std::uint64_t> by_hasse_edges;

  EnumCensus& operator+=(const EnumCensus& other);
};

// Visits every labeled strict order on n points (n <= 8) by extending orders
// on [k] with a new point placed above a down-set and below an up-set.
void for_each_order(int n, const std::function<void(const SmallOrder&)>& visit);

// Exhaustive census, 0 <= n <= kMaxExhaustiveN. Larger n is refused with a
// CapacityError pointing at estimate_order_count.
EnumCensus enumerate_orders(int n);

struct OrderCountEstimate {
  int n = 0;
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t hits = 0;
  std::uint64_t samples = 0;
};

// Approximate: fraction of uniformly random relation sets that are strict
// orders, scaled by 2^(n(n-1)). Useful only up to n of about 7.
OrderCountEstimate estimate_order_count(int n, std::uint64_t samples, std::uint64_t seed);

struct LowerBoundCheck {
  bool holds = false;
  int exponent = 0;                 // floor(n^2 / 4)
  std::uint64_t bound = 0;          // 2^exponent
  std::uint64_t bipartite_family = 0;  // orders built on two fixed antichains
  std::uint64_t height_at_most_two = 0;  // census orders of height <= 2
};

LowerBoundCheck check_lower_bound(const EnumCensus& census);

struct CurvePoint {
  int relations = 0;
  double d = 0.0;        // relations / n^2
  double entropy = 0.0;  // log2(count) / n^2
  std::uint64_t count = 0;
};

std::vector<CurvePoint> empirical_entropy_curve(const EnumCensus& census);
std::vector<CurvePoint> empirical_entropy_curve(int n);

// log2 of the number of k-partitioned orders with the given layer sizes,
// leading term only: sum of |V_i| |V_{i+1}|.
double count_kpartite(std::span<const int> layer_sizes);

}  // namespace causent
