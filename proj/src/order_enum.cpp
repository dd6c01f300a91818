#include "causent/order_enum.hpp"

#include <bit>
#include <cmath>
#include <random>
#include <string>

#include "causent/error.hpp"

namespace causent {

namespace {

std::uint8_t bit(int i) { return static_cast<std::uint8_t>(1u << i); }

bool is_down_closed(const SmallOrder& o, const std::array<std::uint8_t, 8>& pred,
                    unsigned set) {
  for (int x = 0; x < o.n; ++x)
    if ((set >> x & 1u) && (pred[x] & ~set)) return false;
  return true;
}

bool is_up_closed(const SmallOrder& o, unsigned set) {
  for (int x = 0; x < o.n; ++x)
    if ((set >> x & 1u) && (o.succ[x] & ~set)) return false;
  return true;
}

void extend(SmallOrder& o, int target, const std::function<void(const SmallOrder&)>& visit) {
  if (o.n == target) {
    visit(o);
    return;
  }
  const int k = o.n;
  std::array<std::uint8_t, 8> pred{};
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y)
      if (o.succ[x] >> y & 1u) pred[y] |= bit(x);

  const unsigned full = (1u << k) - 1;
  std::vector<unsigned> downs, ups;
  for (unsigned s = 0; s <= full; ++s) {
    if (is_down_closed(o, pred, s)) downs.push_back(s);
    if (is_up_closed(o, s)) ups.push_back(s);
  }
  const SmallOrder base = o;
  for (unsigned down : downs) {
    // Every element of the down-set must already lie below every element of
    // the up-set, otherwise the new point would force new old-old relations.
    unsigned common_above = full;
    for (int x = 0; x < k; ++x)
      if (down >> x & 1u) common_above &= base.succ[x];
    for (unsigned up : ups) {
      if (up & ~common_above) continue;
      o = base;
      o.n = k + 1;
      o.succ[k] = static_cast<std::uint8_t>(up);
      for (int x = 0; x < k; ++x)
        if (down >> x & 1u) o.succ[x] |= bit(k);
      extend(o, target, visit);
    }
  }
  o = base;
}

void record(EnumCensus& census, const SmallOrder& o) {
  ++census.total;
  ++census.by_relations[o.relation_count()];
  ++census.by_height[o.height()];
  ++census.by_hasse_edges[o.hasse_edge_count()];
}

}  // namespace

int SmallOrder::relation_count() const {
  int c = 0;
  for (int i = 0; i < n; ++i) c += std::popcount(static_cast<unsigned>(succ[i]));
  return c;
}

int SmallOrder::height() const {
  // Longest chain by peeling minimal elements.
  unsigned remaining = (1u << n) - 1;
  int h = 0;
  while (remaining) {
    unsigned minimal = 0;
    for (int y = 0; y < n; ++y) {
      if (!(remaining >> y & 1u)) continue;
      bool has_pred = false;
      for (int x = 0; x < n && !has_pred; ++x)
        has_pred = (remaining >> x & 1u) && (succ[x] >> y & 1u);
      if (!has_pred) minimal |= 1u << y;
    }
    remaining &= ~minimal;
    ++h;
  }
  return h;
}

int SmallOrder::hasse_edge_count() const {
  int c = 0;
  for (int a = 0; a < n; ++a) {
    unsigned implied = 0;
    for (int z = 0; z < n; ++z)
      if (succ[a] >> z & 1u) implied |= succ[z];
    c += std::popcount(static_cast<unsigned>(succ[a]) & ~implied);
  }
  return c;
}

StrictOrder SmallOrder::to_strict_order() const {
  BitMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (succ[i] >> j & 1u) m.set(i, j);
  return StrictOrder::from_closure(std::move(m));
}

EnumCensus& EnumCensus::operator+=(const EnumCensus& other) {
  total += other.total;
  for (const auto& [k, v] : other.by_relations) by_relations[k] += v;
  for (const auto& [k, v] : other.by_height) by_height[k] += v;
  for (const auto& [k, v] : other.by_hasse_edges) by_hasse_edges[k] += v;
  return *this;
}

void for_each_order(int n, const std::function<void(const SmallOrder&)>& visit) {
  if (n < 0 || n > 8) throw ValidationError("for_each_order supports 0 <= n <= 8");
  SmallOrder o;
  extend(o, n, visit);
}

EnumCensus enumerate_orders(int n) {
  if (n < 0) throw ValidationError("point count must be non-negative");
  if (n > kMaxExhaustiveN) {
    throw CapacityError("exhaustive enumeration is limited to n <= " +
                        std::to_string(kMaxExhaustiveN) +
                        "; use the sampling estimator (estimate_order_count) for larger n");
  }
  // Partition by the orders on the first n-1 points; each partition is
  // counted independently and the partial censuses are merged.
  EnumCensus census;
  census.n = n;
  if (n == 0) {
    record(census, SmallOrder{});
    return census;
  }
  for_each_order(n - 1, [&](const SmallOrder& base) {
    EnumCensus part;
    SmallOrder o = base;
    extend(o, n, [&](const SmallOrder& full) { record(part, full); });
    census += part;
  });
  return census;
}

OrderCountEstimate estimate_order_count(int n, std::uint64_t samples, std::uint64_t seed) {
  if (n < 1 || n > 8) throw ValidationError("sampling estimator supports 1 <= n <= 8");
  if (samples == 0) throw ValidationError("sample count must be positive");
  std::mt19937_64 rng(seed);
  OrderCountEstimate est;
  est.n = n;
  est.samples = samples;
  const int pairs = n * (n - 1);
  for (std::uint64_t s = 0; s < samples; ++s) {
    SmallOrder o;
    o.n = n;
    std::uint64_t bits = rng();
    int used = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        if (used == 64) {
          bits = rng();
          used = 0;
        }
        if (bits & 1u) o.succ[i] |= bit(j);
        bits >>= 1;
        ++used;
      }
    }
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      for (int j = 0; j < n && ok; ++j) {
        if (!(o.succ[i] >> j & 1u)) continue;
        if (o.succ[j] >> i & 1u) ok = false;
        if (o.succ[j] & ~o.succ[i]) ok = false;
      }
    }
    if (ok) ++est.hits;
  }
  const double frac = static_cast<double>(est.hits) / static_cast<double>(samples);
  const double space = std::ldexp(1.0, pairs);
  est.estimate = frac * space;
  est.std_error = std::sqrt(frac * (1.0 - frac) / static_cast<double>(samples)) * space;
  return est;
}

LowerBoundCheck check_lower_bound(const EnumCensus& census) {
  LowerBoundCheck out;
  const int n = census.n;
  out.exponent = (n * n) / 4;
  out.bound = std::uint64_t{1} << out.exponent;
  out.bipartite_family = std::uint64_t{1} << ((n / 2) * ((n + 1) / 2));
  for (const auto& [h, c] : census.by_height)
    if (h <= 2) out.height_at_most_two += c;
  out.holds = census.total >= out.bound;
  return out;
}

std::vector<CurvePoint> empirical_entropy_curve(const EnumCensus& census) {
  std::vector<CurvePoint> curve;
  const double n2 = static_cast<double>(census.n) * census.n;
  if (census.n == 0) return curve;
  for (const auto& [m, count] : census.by_relations) {
    if (count == 0) continue;
    curve.push_back({m, m / n2, std::log2(static_cast<double>(count)) / n2, count});
  }
  return curve;
}

std::vector<CurvePoint> empirical_entropy_curve(int n) {
  return empirical_entropy_curve(enumerate_orders(n));
}

double count_kpartite(std::span<const int> layer_sizes) {
  if (layer_sizes.empty()) throw ValidationError("at least one layer is required");
  for (std::size_t i = 0; i < layer_sizes.size(); ++i) {
    if (layer_sizes[i] <= 0) {
      throw ValidationError("layer " + std::to_string(i + 1) + " is empty");
    }
  }
  double exponent = 0.0;
  for (std::size_t i = 0; i + 1 < layer_sizes.size(); ++i)
    exponent += static_cast<double>(layer_sizes[i]) * layer_sizes[i + 1];
  return exponent;
}

}  // namespace causent
