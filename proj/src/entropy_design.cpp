#include "causent/entropy_design.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "causent/error.hpp"

namespace causent {

namespace {

constexpr double kEighth = 0.125;
constexpr double kThreeSixteenths = 0.1875;
constexpr double kDensityEps = 1e-12;

double binary_entropy_bits(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double adjacent(std::span<const double> l) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < l.size(); ++i) s += l[i] * l[i + 1];
  return s;
}

double cross(std::span<const double> l) {
  double sum = 0.0, sq = 0.0;
  for (double v : l) {
    sum += v;
    sq += v * v;
  }
  return 0.5 * (sum * sum - sq);
}

// Objective for fractions that may not be normalized yet; -1 marks an
// infeasible point.
struct Evaluation {
  double objective = -1.0;
  double p = 0.0;
};

Evaluation evaluate(std::span<const double> lambdas, double d) {
  const auto p = solve_adjacent_density(lambdas, d);
  if (!p) return {};
  return {design_objective(lambdas, *p), *p};
}

struct Candidate {
  std::vector<double> lambdas;
  Evaluation eval;
};

// Orientation with lambda_1 >= lambda_k; reversing the layer order leaves
// the objective and the density unchanged.
void orient(std::vector<double>& l) {
  std::vector<double> rev(l.rbegin(), l.rend());
  if (std::lexicographical_compare(l.begin(), l.end(), rev.begin(), rev.end())) l = std::move(rev);
}

double binomial(int n, int r) {
  if (r < 0 || r > n) return 0.0;
  double c = 1.0;
  for (int i = 1; i <= r; ++i) c = c * (n - r + i) / i;
  return c;
}

int grid_for(int k, const OptimizerOptions& opt) {
  int res = opt.grid_resolution;
  while (res > k && binomial(res - 1, k - 1) > static_cast<double>(opt.grid_budget)) --res;
  return std::max(res, k);
}

void collect_grid(int k, int res, double d, std::size_t keep, std::vector<Candidate>& best) {
  std::vector<int> parts(k, 1);
  std::vector<double> lam(k);
  auto consider = [&]() {
    for (int i = 0; i < k; ++i) lam[i] = static_cast<double>(parts[i]) / res;
    const Evaluation e = evaluate(lam, d);
    if (e.objective < 0.0) return;
    if (best.size() == keep && e.objective <= best.back().eval.objective) return;
    Candidate c{lam, e};
    auto pos = std::upper_bound(best.begin(), best.end(), c, [](const Candidate& a, const Candidate& b) {
      return a.eval.objective > b.eval.objective;
    });
    best.insert(pos, std::move(c));
    if (best.size() > keep) best.pop_back();
  };
  // Compositions of res into k positive parts.
  auto rec = [&](auto&& self, int idx, int left) -> void {
    if (idx == k - 1) {
      parts[idx] = left;
      consider();
      return;
    }
    for (int v = 1; v <= left - (k - 1 - idx); ++v) {
      parts[idx] = v;
      self(self, idx + 1, left - v);
    }
  };
  rec(rec, 0, res);
}

// Pairwise mass-transfer pattern search on the simplex.
Candidate refine(Candidate c, double d, double initial_step, double tolerance) {
  const int k = static_cast<int>(c.lambdas.size());
  std::vector<double> trial(k);
  for (double step = initial_step; step >= tolerance; step *= 0.5) {
    bool improved = true;
    int sweeps = 0;
    while (improved && sweeps++ < 10000) {
      improved = false;
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
          if (i == j || c.lambdas[j] - step <= 0.0) continue;
          trial = c.lambdas;
          trial[i] += step;
          trial[j] -= step;
          const Evaluation e = evaluate(trial, d);
          if (e.objective > c.eval.objective + 1e-16) {
            c.lambdas = trial;
            c.eval = e;
            improved = true;
          }
        }
      }
    }
  }
  return c;
}

void check_density(double d) {
  if (!(d > 0.0 && d < 0.5)) {
    throw DomainError("density d must lie in (0, 1/2), got " + std::to_string(d));
  }
}

}  // namespace

double binary_entropy(double x, EntropyBase base) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("binary entropy argument must lie in [0, 1], got " + std::to_string(x));
  }
  const double bits = binary_entropy_bits(x);
  return base == EntropyBase::bits ? bits : bits * std::log(2.0);
}

std::string_view to_string(EntropyRegime regime) {
  switch (regime) {
    case EntropyRegime::two_layer: return "two_layer";
    case EntropyRegime::three_layer: return "three_layer";
    case EntropyRegime::numeric: return "numeric";
  }
  return "numeric";
}

int default_k_max(double d) {
  check_density(d);
  // The optimal layer count grows like 2 / (1 - 2d).
  const int typical = static_cast<int>(std::ceil(2.0 / (1.0 - 2.0 * d)));
  return std::max(8, typical + 6);
}

EntropyPoint structural_entropy(double d) {
  check_density(d);
  if (d <= kEighth) return {d, 0.25 * binary_entropy_bits(4.0 * d), EntropyRegime::two_layer};
  if (d <= kThreeSixteenths) return {d, 0.25, EntropyRegime::three_layer};
  return {d, optimize_design(d, default_k_max(d)).objective, EntropyRegime::numeric};
}

double LayeredDesign::adjacent_mass() const { return adjacent(lambdas); }

double LayeredDesign::skip_mass() const { return cross(lambdas) - adjacent(lambdas); }

double LayeredDesign::density() const {
  return cross(lambdas) - (1.0 - p) * adjacent(lambdas);
}

std::optional<double> solve_adjacent_density(std::span<const double> lambdas, double d) {
  // Comparable pairs: every skip pair plus a fraction p of adjacent pairs,
  // so d = skip + p * adjacent.
  const double adj = adjacent(lambdas);
  if (adj <= 0.0) return std::nullopt;
  const double p = (d - (cross(lambdas) - adj)) / adj;
  if (p <= 0.0 || p > 1.0 + kDensityEps) return std::nullopt;
  return std::min(p, 1.0);
}

double design_objective(std::span<const double> lambdas, double p) {
  return binary_entropy_bits(p) * adjacent(lambdas);
}

LayeredDesign optimize_design(double d, int k_max, const OptimizerOptions& options) {
  check_density(d);
  if (k_max < 2) throw ValidationError("k_max must be at least 2");
  if (options.grid_resolution < 2) throw ValidationError("grid resolution must be at least 2");

  const double degenerate = 1.0 / options.grid_resolution;
  std::optional<Candidate> best;
  std::size_t evaluated_k = 0;

  for (int k = 2; k <= k_max; ++k) {
    const int res = grid_for(k, options);
    std::vector<Candidate> grid;
    collect_grid(k, res, d, options.refine_starts, grid);
    if (grid.empty()) continue;
    ++evaluated_k;

    std::optional<Candidate> best_k;
    for (auto& start : grid) {
      Candidate c = refine(start, d, 1.0 / res, options.refine_tolerance);
      double sum = 0.0;
      for (double v : c.lambdas) sum += v;
      for (double& v : c.lambdas) v /= sum;
      c.eval = evaluate(c.lambdas, d);
      if (c.eval.objective < 0.0) continue;
      // A vanishing layer means the design is really a (k-1)-layer one,
      // which the smaller k already covers.
      if (*std::min_element(c.lambdas.begin(), c.lambdas.end()) < degenerate) continue;
      orient(c.lambdas);
      if (!best_k || c.eval.objective > best_k->eval.objective + options.tie_tolerance ||
          (std::abs(c.eval.objective - best_k->eval.objective) <= options.tie_tolerance &&
           c.lambdas < best_k->lambdas)) {
        best_k = std::move(c);
      }
    }
    if (!best_k) continue;
    if (!best || best_k->eval.objective > best->eval.objective + options.tie_tolerance) {
      best = std::move(best_k);
    }
  }
  if (!best) {
    throw InfeasibleError("no k-layer design with k <= " + std::to_string(k_max) +
                          " reaches density " + std::to_string(d) +
                          " with p in (0, 1] (" + std::to_string(evaluated_k) +
                          " layer counts had feasible grid points); the largest reachable "
                          "density is about " + std::to_string(0.5 - 0.5 / k_max));
  }
  LayeredDesign out;
  out.k = static_cast<int>(best->lambdas.size());
  out.lambdas = best->lambdas;
  out.p = best->eval.p;
  out.objective = best->eval.objective;
  return out;
}

double DharConstruction::relation_fraction() const {
  const double n = order.size();
  return static_cast<double>(order.relation_count()) / (n * n);
}

DharConstruction dhar_construction(double d, int n) {
  if (!(d >= kEighth - kDensityEps && d <= kThreeSixteenths + kDensityEps)) {
    throw DomainError("three-layer construction needs d in [1/8, 3/16], got " + std::to_string(d));
  }
  if (n < 2) throw ValidationError("construction needs at least 2 points");
  DharConstruction out;
  out.x = 0.25 - std::sqrt(std::max(0.0, kThreeSixteenths - d));
  const int n2 = static_cast<int>(std::lround(0.5 * n));
  int n1 = static_cast<int>(std::lround((0.5 - out.x) * n));
  n1 = std::clamp(n1, 1, n - n2);
  const int n3 = n - n1 - n2;
  out.layer_sizes = n3 > 0 ? std::vector<int>{n1, n2, n3} : std::vector<int>{n1, n2};

  const int k = static_cast<int>(out.layer_sizes.size());
  std::vector<int> first(k, 0);
  for (int i = 1; i < k; ++i) first[i] = first[i - 1] + out.layer_sizes[i - 1];
  out.partition.k = k;
  out.partition.layer.resize(n);
  for (int i = 0; i < k; ++i)
    for (int v = 0; v < out.layer_sizes[i]; ++v) out.partition.layer[first[i] + v] = i + 1;

  std::vector<Edge> relations;
  for (int i = 0; i + 1 < k; ++i) {
    for (int a = 0; a < out.layer_sizes[i]; ++a)
      for (int b = 0; b < out.layer_sizes[i + 1]; ++b)
        if ((a + b) % 2 == 0) relations.emplace_back(first[i] + a, first[i + 1] + b);
  }
  if (k == 3) {
    for (int a = 0; a < n1; ++a)
      for (int c = 0; c < n3; ++c) relations.emplace_back(first[0] + a, first[2] + c);
  }
  out.order = StrictOrder::from_relations(n, relations);
  out.dag = transitive_reduction(out.order);
  return out;
}

double density_bipartite(double rows, double cols, double relations) {
  if (!(rows > 0.0) || !(cols > 0.0)) throw ValidationError("bipartite dimensions must be positive");
  if (relations < 0.0) throw ValidationError("relation count must be non-negative");
  return relations / (rows * cols);
}

double density_square(double n_units, double relations) {
  if (!(n_units > 0.0)) throw ValidationError("unit count must be positive");
  if (relations < 0.0) throw ValidationError("relation count must be non-negative");
  return relations / (n_units * n_units);
}

double estimate_density(const DensityInput& input) {
  if (input.bipartite_dims) {
    return density_bipartite(input.bipartite_dims->first, input.bipartite_dims->second,
                             input.relations);
  }
  return density_square(input.n_units, input.relations);
}

DensitySample sample_density(const StrictOrder& order, std::size_t samples, std::uint64_t seed) {
  if (order.size() == 0) throw ValidationError("order has no points");
  if (samples == 0) throw ValidationError("sample count must be positive");
  std::mt19937_64 rng(seed);
  const auto n = static_cast<std::uint64_t>(order.size());
  DensitySample out;
  out.samples = samples;
  for (std::size_t s = 0; s < samples; ++s) {
    const auto a = static_cast<int>(rng() % n);
    const auto b = static_cast<int>(rng() % n);
    if (order.less(a, b)) ++out.hits;
  }
  out.d = static_cast<double>(out.hits) / static_cast<double>(samples);
  out.std_error = std::sqrt(out.d * (1.0 - out.d) / static_cast<double>(samples));
  return out;
}

}  // namespace causent
