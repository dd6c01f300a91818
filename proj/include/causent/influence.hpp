#pragma once

// Causal influence of an edge set: the divergence between the observational
// joint and the edge-intervened joint, with per-target local terms.

#include <map>
#include <string_view>

#include "causent/discrete_net.hpp"
#include "causent/divergence.hpp"
#include "causent/order.hpp"

namespace causent {

enum class DecompositionKind {
  exact_sum,    // total equals the sum of per-target terms (KL)
  upper_bound,  // total never exceeds the sum (H^2, TV)
  local_terms,  // per-target terms reported without a guarantee
};

std::string_view to_string(DecompositionKind kind);

struct InfluenceResult {
  double total = 0.0;
  std::map<int, double> per_target;
  std::map<int, double> per_layer;  // filled by the k-partite entry points
  DecompositionKind kind = DecompositionKind::exact_sum;
  std::size_t edge_count = 0;
  double aci = 0.0;  // total / |S|, 0 for an empty S

  double term_sum() const;
};

DecompositionKind decomposition_kind(const DivergenceSpec& spec);

// Local term for one target i:
//   KL, TV: D(P_{X_i, Pa_i} || P(pa_i) P_S(x_i | unsevered parents))
//   other families: D(P_{X_i, Pa_i} || P_S restricted to {X_i} and Pa_i)
InfluenceResult causal_influence(const DiscreteNet& net, const EdgeSet& s, const DivergenceSpec& spec,
                                 std::size_t state_cap = kDefaultStateCap);

struct LocalizabilityReport {
  double local_value = 0.0;  // from the child's CPT and its parents' joint marginal
  double full_value = 0.0;   // from the full joints
  double gap = 0.0;
  bool localizable = false;  // gap <= 1e-9
};

LocalizabilityReport localizability_check(const DiscreteNet& net, Edge edge, const DivergenceSpec& spec,
                                          std::size_t state_cap = kDefaultStateCap);

// Every net edge must go from a lower to a higher layer.
void check_net_partition(const DiscreteNet& net, const KPartition& part);

// causal_influence grouped by the target's layer; aci = total / |S|.
InfluenceResult kpartite_aci(const DiscreteNet& net, const KPartition& part, const EdgeSet& s,
                             const DivergenceSpec& spec, std::size_t state_cap = kDefaultStateCap);

struct SubadditivityAudit {
  bool alpha_bound_holds = false;  // total - epsilon <= alpha * sum of local terms
  double total = 0.0;
  double bound_sum = 0.0;
  double alpha = 1.0;
  double epsilon = 0.0;
  ClosenessReport closeness;  // of (P, P_S)
};

SubadditivityAudit subadditivity_audit(const DiscreteNet& net, const EdgeSet& s, const DivergenceSpec& spec,
                                       double epsilon, double alpha = 1.0,
                                       std::size_t state_cap = kDefaultStateCap);

}  // namespace causent
