#pragma once

// Structural entropy of orders parameterized by comparable-pair density d,
// the three-layer construction on [1/8, 3/16], density estimation, and the
// maximum-entropy k-layer design search. Entropies are in bits per n^2.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "causent/order.hpp"

namespace causent {

enum class EntropyBase { bits, nats };

double binary_entropy(double x, EntropyBase base = EntropyBase::bits);

enum class EntropyRegime { two_layer, three_layer, numeric };

std::string_view to_string(EntropyRegime regime);

struct EntropyPoint {
  double d = 0.0;
  double c = 0.0;
  EntropyRegime regime = EntropyRegime::numeric;
};

// Closed form on (0, 3/16]; above that the value comes from optimize_design
// with default_k_max(d) layers.
EntropyPoint structural_entropy(double d);

struct LayeredDesign {
  int k = 0;
  std::vector<double> lambdas;
  double p = 0.0;
  double objective = 0.0;

  // sum of lambda_i * lambda_{i+1}
  double adjacent_mass() const;
  // sum over non-adjacent layer pairs i < j - 1
  double skip_mass() const;
  // 1/2 - 1/2 sum lambda^2 - (1 - p) * adjacent_mass
  double density() const;
  // p below 1/2: the branch excluded by the original p >= 1/2 constraint
  bool uses_low_p_branch() const { return p < 0.5; }
};

// Adjacent-layer density p that meets comparable-pair density d for the
// given layer fractions, if it lies in (0, 1].
std::optional<double> solve_adjacent_density(std::span<const double> lambdas, double d);

// H(p) * sum lambda_i lambda_{i+1}, in bits.
double design_objective(std::span<const double> lambdas, double p);

struct OptimizerOptions {
  int grid_resolution = 200;         // simplex step 1/grid_resolution
  std::size_t grid_budget = 400000;  // max grid points per k; coarser grid for large k
  std::size_t refine_starts = 12;    // best grid points refined per k
  double refine_tolerance = 1e-9;    // final transfer step
  double tie_tolerance = 1e-9;
};

// Maximizes design_objective over k in [2, k_max] and layer fractions, with p
// fixed by the density constraint. Throws InfeasibleError when no candidate
// admits p in (0, 1].
LayeredDesign optimize_design(double d, int k_max = 8, const OptimizerOptions& options = {});

// Layer budget that covers the optimal k for densities close to 1/2, where
// any k-layer design needs d < 1/2 - 1/(2k); never below 8.
int default_k_max(double d);

struct DharConstruction {
  double x = 0.0;
  std::vector<int> layer_sizes;  // 3 entries, or 2 when the third layer is empty
  StrictOrder order;
  HasseDag dag;
  KPartition partition;

  double relation_fraction() const;
};

// Three antichains of sizes (1/2 - x)n, n/2, xn with x = 1/4 - sqrt(3/16 - d):
// half of each adjacent block related in a checkerboard pattern, every
// first-to-third layer pair related.
DharConstruction dhar_construction(double d, int n);

// relations / (rows * cols)
double density_bipartite(double rows, double cols, double relations);
// relations / n^2
double density_square(double n_units, double relations);

struct DensityInput {
  double n_units = 0.0;
  double relations = 0.0;
  std::optional<std::pair<double, double>> bipartite_dims;  // (rows, cols)
};

double estimate_density(const DensityInput& input);

struct DensitySample {
  double d = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  std::size_t hits = 0;
};

// Estimates the comparable-pair density of an order from uniformly sampled
// ordered pairs (i, j), counting i < j relations against n^2.
DensitySample sample_density(const StrictOrder& order, std::size_t samples, std::uint64_t seed);

}  // namespace causent
