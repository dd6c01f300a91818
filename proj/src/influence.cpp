#include "causent/influence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "causent/error.hpp"

namespace causent {

namespace {

constexpr double kSlack = 1e-9;

std::vector<int> family_scope(const DiscreteNet& net, int i) {
  std::vector<int> vars = net.node(i).parents;
  vars.push_back(i);
  std::sort(vars.begin(), vars.end());
  return vars;
}

// P(pa_i) * P_S(x_i | unsevered parents) over family_scope(i).
JointTable mixed_reference(const DiscreteNet& net, const DiscreteNet& cut, const JointTable& fam, int i) {
  JointTable q = fam;
  const auto& parents = net.node(i).parents;
  const int self = static_cast<int>(std::find(fam.scope.begin(), fam.scope.end(), i) - fam.scope.begin());
  std::vector<int> pa_vars;
  for (int v : fam.scope)
    if (v != i) pa_vars.push_back(v);
  const JointTable pa = marginal(fam, pa_vars);

  std::vector<int> assignment(net.size(), 0);
  for (std::size_t idx = 0; idx < fam.size(); ++idx) {
    const std::vector<int> st = fam.state(idx);
    std::vector<int> pa_state;
    for (std::size_t k = 0; k < st.size(); ++k) {
      assignment[fam.scope[k]] = st[k];
      if (static_cast<int>(k) != self) pa_state.push_back(st[k]);
    }
    const double ppa = parents.empty() ? 1.0 : pa.probs[pa.index(pa_state)];
    q.probs[idx] = ppa * cut.cond_prob(i, assignment);
  }
  return q;
}

}  // namespace

std::string_view to_string(DecompositionKind kind) {
  switch (kind) {
    case DecompositionKind::exact_sum: return "exact_sum";
    case DecompositionKind::upper_bound: return "upper_bound";
    case DecompositionKind::local_terms: return "local_terms";
  }
  return "local_terms";
}

double InfluenceResult::term_sum() const {
  double s = 0.0;
  for (const auto& [t, v] : per_target) s += v;
  return s;
}

DecompositionKind decomposition_kind(const DivergenceSpec& spec) {
  switch (spec.family()) {
    case Family::kl: return DecompositionKind::exact_sum;
    case Family::hellinger_sq:
    case Family::total_variation: return DecompositionKind::upper_bound;
    default: return DecompositionKind::local_terms;
  }
}

InfluenceResult causal_influence(const DiscreteNet& net, const EdgeSet& s, const DivergenceSpec& spec,
                                 std::size_t state_cap) {
  check_edges(net, s);
  InfluenceResult r;
  r.kind = decomposition_kind(spec);
  r.edge_count = s.size();
  if (s.empty()) return r;

  const JointTable p = joint(net, state_cap);
  const DiscreteNet cut = apply_intervention(net, s, node_marginals(net, state_cap));
  const JointTable ps = joint(cut, state_cap);
  r.total = phi_divergence(spec, p, ps);

  const bool mixed = spec.family() == Family::kl || spec.family() == Family::total_variation;
  for (int t : targets(s)) {
    const std::vector<int> vars = family_scope(net, t);
    const JointTable fam = marginal(p, vars);
    const JointTable ref = mixed ? mixed_reference(net, cut, fam, t) : marginal(ps, vars);
    r.per_target[t] = phi_divergence(spec, fam, ref);
  }
  r.aci = r.total / static_cast<double>(s.size());
  return r;
}

LocalizabilityReport localizability_check(const DiscreteNet& net, Edge edge, const DivergenceSpec& spec,
                                          std::size_t state_cap) {
  const EdgeSet s{edge};
  check_edges(net, s);
  LocalizabilityReport rep;
  rep.full_value = causal_influence(net, s, spec, state_cap).total;

  // Only the child's CPT and the joint marginal of its parents.
  const int child = edge.second;
  const JointTable p = joint(net, state_cap);
  const std::vector<int>& parents = net.node(child).parents;
  const JointTable pa = marginal(p, parents);
  const int cut_pos = static_cast<int>(std::find(parents.begin(), parents.end(), edge.first) - parents.begin());
  const int cut_vars[] = {edge.first};
  const JointTable cut_marg = marginal(pa, cut_vars);
  const NetNode& nd = net.node(child);

  std::vector<double> local_p, local_q;
  for (std::size_t row = 0; row < pa.size(); ++row) {
    const std::vector<int> st = pa.state(row);
    for (int x = 0; x < nd.card; ++x) {
      double averaged = 0.0;
      std::vector<int> alt = st;
      for (int v = 0; v < net.node(edge.first).card; ++v) {
        alt[cut_pos] = v;
        averaged += cut_marg.probs[v] * nd.cpt[pa.index(alt)][x];
      }
      local_p.push_back(pa.probs[row] * nd.cpt[row][x]);
      local_q.push_back(pa.probs[row] * averaged);
    }
  }
  rep.local_value = phi_divergence(spec, local_p, local_q);
  if (std::isinf(rep.local_value) && std::isinf(rep.full_value)) {
    rep.gap = 0.0;
  } else {
    rep.gap = std::abs(rep.local_value - rep.full_value);
  }
  rep.localizable = rep.gap <= kSlack;
  return rep;
}

void check_net_partition(const DiscreteNet& net, const KPartition& part) {
  if (static_cast<int>(part.layer.size()) != net.size()) {
    throw ValidationError("partition covers " + std::to_string(part.layer.size()) + " nodes, network has " +
                          std::to_string(net.size()));
  }
  for (int l : part.layer) {
    if (l < 1 || l > part.k) throw ValidationError("partition layer out of range 1.." + std::to_string(part.k));
  }
  for (auto [a, b] : net.edges()) {
    if (part.layer[a] >= part.layer[b]) {
      throw ValidationError("edge " + net.node(a).name + "->" + net.node(b).name + " goes from layer " +
                            std::to_string(part.layer[a]) + " to layer " + std::to_string(part.layer[b]));
    }
  }
}

InfluenceResult kpartite_aci(const DiscreteNet& net, const KPartition& part, const EdgeSet& s,
                             const DivergenceSpec& spec, std::size_t state_cap) {
  check_net_partition(net, part);
  InfluenceResult r = causal_influence(net, s, spec, state_cap);
  for (const auto& [t, v] : r.per_target) r.per_layer[part.layer[t]] += v;
  return r;
}

SubadditivityAudit subadditivity_audit(const DiscreteNet& net, const EdgeSet& s, const DivergenceSpec& spec,
                                       double epsilon, double alpha, std::size_t state_cap) {
  if (!(epsilon >= 0.0)) throw ValidationError("epsilon must be non-negative");
  if (!(alpha > 0.0)) throw ValidationError("alpha must be positive");
  SubadditivityAudit a;
  a.alpha = alpha;
  a.epsilon = epsilon;
  const InfluenceResult r = causal_influence(net, s, spec, state_cap);
  a.total = r.total;
  a.bound_sum = r.term_sum();
  a.alpha_bound_holds = a.total - epsilon <= alpha * a.bound_sum + kSlack;
  const JointTable p = joint(net, state_cap);
  const JointTable ps = s.empty() ? p : joint(intervene(net, s, state_cap), state_cap);
  a.closeness = closeness(p.probs, ps.probs, epsilon);
  return a;
}

}  // namespace causent
