#pragma once

// Discrete Bayesian networks, exact joint tables, edge-centric interventions
// and forward sampling.

#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "causent/order.hpp"

namespace causent {

inline constexpr std::size_t kDefaultStateCap = std::size_t{1} << 24;

// Dense distribution over `scope`, row-major: the first scope variable is
// the most significant digit.
struct JointTable {
  std::vector<int> scope;
  std::vector<int> cards;
  std::vector<double> probs;

  std::size_t size() const { return probs.size(); }
  // Decodes a flat index into one value per scope variable.
  std::vector<int> state(std::size_t index) const;
  std::size_t index(std::span<const int> values) const;
};

// Validates entries >= 0 and total 1 within 1e-10.
void check_joint(const JointTable& table);

struct NetNode {
  std::string name;
  int card = 2;
  std::vector<int> parents;              // ascending node indices
  std::vector<std::vector<double>> cpt;  // one row per parent configuration
};

class DiscreteNet {
 public:
  DiscreteNet() = default;
  // Validates cards, parent references, acyclicity and CPT shape. Rows must
  // sum to 1 within row_tolerance; values read from rounded files need a
  // looser tolerance than the default.
  explicit DiscreteNet(std::vector<NetNode> nodes, double row_tolerance = 1e-12);

  int size() const { return static_cast<int>(nodes_.size()); }
  const NetNode& node(int i) const { return nodes_[i]; }
  const std::vector<NetNode>& nodes() const { return nodes_; }
  const std::vector<int>& topological_order() const { return topo_; }
  int index_of(const std::string& name) const;
  bool has_edge(int parent, int child) const;
  std::vector<Edge> edges() const;

  // Row of node i's CPT for the given full assignment.
  std::size_t parent_config(int i, std::span<const int> assignment) const;
  double cond_prob(int i, std::span<const int> assignment) const;
  double row_tolerance() const { return row_tol_; }

 private:
  std::vector<NetNode> nodes_;
  double row_tol_ = 1e-12;
  std::vector<int> topo_;
};

// Set of (parent, child) edges.
using EdgeSet = std::set<Edge>;

// Throws ValidationError naming the first edge missing from the net.
void check_edges(const DiscreteNet& net, const EdgeSet& s);

// Targets of s: children of at least one edge, ascending.
std::vector<int> targets(const EdgeSet& s);

JointTable joint(const DiscreteNet& net, std::size_t state_cap = kDefaultStateCap);

// Sums out the complement of vars; the result's scope follows vars' order.
JointTable marginal(const JointTable& table, std::span<const int> vars);

// Observational single-node marginals P(X_i), indexed by node.
using MarginalSnapshot = std::vector<std::vector<double>>;

MarginalSnapshot node_marginals(const DiscreteNet& net, std::size_t state_cap = kDefaultStateCap);

// For each target, drops the severed parents and averages the CPT against
// the product of their snapshot marginals. Edges absent from the net are
// treated as already severed.
DiscreteNet apply_intervention(const DiscreteNet& net, const EdgeSet& s,
                               const MarginalSnapshot& marginals);

// apply_intervention with marginals from the pre-intervention joint; every
// edge of s must exist in the net.
DiscreteNet intervene(const DiscreteNet& net, const EdgeSet& s,
                      std::size_t state_cap = kDefaultStateCap);

// m x n matrix of values, row-major.
struct SampleMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<int> values;

  int at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

inline constexpr std::size_t kSampleChunk = 4096;

// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw.
double unit_uniform(std::uint64_t bits);
// Seed of chunk c derived from the user seed.
std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t chunk);

// Ancestral sampling; rows are drawn in chunks of kSampleChunk, each from
// its own generator seeded by chunk_seed.
SampleMatrix sample(const DiscreteNet& net, std::size_t m, std::uint64_t seed);

// Draws m flat state indices from a table.
std::vector<std::size_t> sample_indices(const JointTable& table, std::size_t m, std::uint64_t seed);

}  // namespace causent
