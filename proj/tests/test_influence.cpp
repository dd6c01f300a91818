#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "causent/error.hpp"
#include "causent/influence.hpp"
#include "oracles/oracles.hpp"

namespace causent {
namespace {

DiscreteNet chain_zxy() {
  return DiscreteNet({{"Z", 2, {}, {{0.3, 0.7}}},
                      {"X", 2, {0}, {{0.8, 0.2}, {0.1, 0.9}}},
                      {"Y", 2, {1}, {{0.65, 0.35}, {0.2, 0.8}}}});
}

// Two causes U1, U2 in layer 1 and two outcomes in layer 2.
DiscreteNet bipartite() {
  return DiscreteNet({{"U1", 2, {}, {{0.4, 0.6}}},
                      {"U2", 2, {}, {{0.7, 0.3}}},
                      {"V1", 2, {0, 1}, {{0.9, 0.1}, {0.5, 0.5}, {0.3, 0.7}, {0.05, 0.95}}},
                      {"V2", 2, {1}, {{0.2, 0.8}, {0.75, 0.25}}}});
}

TEST(CausalInfluence, XorKlIsEntropy) {
  for (double a : {0.1, 0.25, 0.5, 0.9}) {
    const auto r = causal_influence(oracle::xor_net(a), EdgeSet{{1, 2}}, DivergenceSpec::kl());
    EXPECT_NEAR(r.total, oracle::entropy_nats(a), 1e-12) << a;
    EXPECT_EQ(r.kind, DecompositionKind::exact_sum);
    EXPECT_NEAR(r.per_target.at(2), r.total, 1e-12);
  }
  EXPECT_NEAR(causal_influence(oracle::xor_net(0.5), EdgeSet{{1, 2}}, DivergenceSpec::kl()).total, std::log(2.0),
              1e-12);
}

TEST(CausalInfluence, XorTvHalf) {
  // P puts 1/2 on (0,0,0) and (1,1,0); P_S spreads 1/4 over (z, z, y) for both y.
  const auto r = causal_influence(oracle::xor_net(0.5), EdgeSet{{1, 2}}, DivergenceSpec::total_variation());
  EXPECT_NEAR(r.total, 0.5, 1e-15);
  const auto net = oracle::xor_net(0.5);
  EXPECT_NEAR(r.total, oracle::tv(oracle::joint_probs(net), oracle::post_intervention_probs(net, EdgeSet{{1, 2}})),
              1e-15);
  EXPECT_EQ(r.kind, DecompositionKind::upper_bound);
}

TEST(CausalInfluence, EmptySetIsZero) {
  std::mt19937_64 rng(1);
  const auto net = oracle::random_net(rng, 4, 0.7);
  for (const auto& spec : {DivergenceSpec::kl(), DivergenceSpec::hellinger_sq(), DivergenceSpec::power(2.0)}) {
    const auto r = causal_influence(net, {}, spec);
    EXPECT_EQ(r.total, 0.0);
    EXPECT_TRUE(r.per_target.empty());
    EXPECT_EQ(r.aci, 0.0);
  }
}

TEST(CausalInfluence, TotalMatchesOracleDivergence) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 200; ++t) {
    const auto net = oracle::random_net(rng, 2 + t % 4, 0.6);
    const auto s = oracle::random_subset(rng, net.edges());
    const auto p = oracle::joint_probs(net);
    const auto q = oracle::post_intervention_probs(net, s);
    EXPECT_NEAR(causal_influence(net, s, DivergenceSpec::kl()).total, oracle::kl(p, q), 1e-10);
    EXPECT_NEAR(causal_influence(net, s, DivergenceSpec::hellinger_sq()).total, oracle::hellinger_sq(p, q), 1e-12);
    const auto tv = causal_influence(net, s, DivergenceSpec::total_variation());
    EXPECT_NEAR(tv.total, oracle::tv(p, q), 1e-12);
    if (!s.empty()) EXPECT_NEAR(tv.aci, tv.total / s.size(), 1e-15);
  }
}

TEST(CausalInfluence, KlDecompositionExact) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 300; ++t) {
    const auto net = oracle::random_net(rng, 2 + t % 4, 0.6);
    const auto s = oracle::random_subset(rng, net.edges());
    const auto r = causal_influence(net, s, DivergenceSpec::kl());
    EXPECT_NEAR(r.total, r.term_sum(), 1e-9);
    EXPECT_EQ(r.per_target.size(), targets(s).size());
  }
}

TEST(CausalInfluence, SubadditiveBounds) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 300; ++t) {
    const auto net = oracle::random_net(rng, 2 + t % 4, 0.6);
    const auto s = oracle::random_subset(rng, net.edges());
    for (const auto& spec : {DivergenceSpec::hellinger_sq(), DivergenceSpec::total_variation()}) {
      const auto r = causal_influence(net, s, spec);
      EXPECT_LE(r.total, r.term_sum() + 1e-9) << spec.name();
    }
  }
}

TEST(CausalInfluence, ZeroIffJointsEqual) {
  // Independent parents whose severing is a no-op: Y depends on X only and X is a root.
  const DiscreteNet net({{"X", 2, {}, {{0.3, 0.7}}}, {"Y", 2, {0}, {{0.9, 0.1}, {0.2, 0.8}}}});
  const auto r = causal_influence(net, EdgeSet{{0, 1}}, DivergenceSpec::kl());
  EXPECT_GT(r.total, 0.0);
  const DiscreteNet flat({{"X", 2, {}, {{0.3, 0.7}}}, {"Y", 2, {0}, {{0.6, 0.4}, {0.6, 0.4}}}});
  EXPECT_NEAR(causal_influence(flat, EdgeSet{{0, 1}}, DivergenceSpec::kl()).total, 0.0, 1e-15);
  const auto a = joint(flat).probs, b = joint(intervene(flat, EdgeSet{{0, 1}})).probs;
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-15);
}

TEST(CausalInfluence, OtherFamiliesReportLocalTerms) {
  const auto r = causal_influence(chain_zxy(), EdgeSet{{0, 1}, {1, 2}}, DivergenceSpec::chi_sq());
  EXPECT_EQ(r.kind, DecompositionKind::local_terms);
  EXPECT_EQ(r.per_target.size(), 2u);
  EXPECT_EQ(decomposition_kind(DivergenceSpec::kl()), DecompositionKind::exact_sum);
  EXPECT_EQ(decomposition_kind(DivergenceSpec::hellinger_sq()), DecompositionKind::upper_bound);
}

TEST(CausalInfluence, MissingEdgeRejected) {
  EXPECT_THROW(causal_influence(chain_zxy(), EdgeSet{{0, 2}}, DivergenceSpec::kl()), ValidationError);
}

TEST(Localizability, KlOnSingleEdges) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const auto net = oracle::random_net(rng, 4, 0.7);
    for (const auto& e : net.edges()) EXPECT_TRUE(localizability_check(net, e, DivergenceSpec::kl()).localizable);
  }
}

TEST(Localizability, XorEdge) {
  const double a = 0.25;
  const auto r = localizability_check(oracle::xor_net(a), {1, 2}, DivergenceSpec::kl());
  EXPECT_TRUE(r.localizable);
  EXPECT_NEAR(r.local_value, oracle::entropy_nats(a), 1e-12);
  EXPECT_NEAR(r.full_value, oracle::entropy_nats(a), 1e-12);
}

// A single severed edge only changes the child's mechanism, so the divergence
// of the full joints equals the divergence on (child, parents) for any phi,
// including when the child has descendants.
TEST(Localizability, TvOnChainWithDescendantIsLocal) {
  const auto r = localizability_check(chain_zxy(), {0, 1}, DivergenceSpec::total_variation());
  EXPECT_TRUE(r.localizable);
  EXPECT_NEAR(r.gap, 0.0, 1e-12);
  const auto p = oracle::joint_probs(chain_zxy());
  const auto q = oracle::post_intervention_probs(chain_zxy(), EdgeSet{{0, 1}});
  EXPECT_NEAR(r.full_value, oracle::tv(p, q), 1e-12);
}

TEST(KPartiteAci, BipartiteAllEdgesKl) {
  const auto net = bipartite();
  const KPartition part{2, {1, 1, 2, 2}};
  const auto edges = net.edges();
  const EdgeSet all(edges.begin(), edges.end());
  const auto r = kpartite_aci(net, part, all, DivergenceSpec::kl());
  const auto c = causal_influence(net, all, DivergenceSpec::kl());
  EXPECT_NEAR(r.aci, c.term_sum() / all.size(), 1e-12);
  EXPECT_NEAR(r.per_layer.at(2), c.term_sum(), 1e-12);
}

TEST(KPartiteAci, EmptySetIsZero) {
  const auto r = kpartite_aci(bipartite(), {2, {1, 1, 2, 2}}, {}, DivergenceSpec::kl());
  EXPECT_EQ(r.aci, 0.0);
}

TEST(KPartiteAci, SingleEdgeMatchesCausalInfluence) {
  const DiscreteNet net({{"A", 2, {}, {{0.5, 0.5}}},
                         {"B", 2, {0}, {{0.7, 0.3}, {0.2, 0.8}}},
                         {"C", 2, {0, 1}, {{0.9, 0.1}, {0.6, 0.4}, {0.3, 0.7}, {0.15, 0.85}}}});
  // A in layer 1, B in layer 2, C in layer 3; A < C is the skip relation.
  const KPartition part{3, {1, 2, 3}};
  const auto r = kpartite_aci(net, part, EdgeSet{{1, 2}}, DivergenceSpec::kl());
  const auto c = causal_influence(net, EdgeSet{{1, 2}}, DivergenceSpec::kl());
  EXPECT_NEAR(r.aci, c.total, 1e-12);
  EXPECT_NEAR(r.per_layer.at(3), c.total, 1e-12);
}

TEST(KPartiteAci, PartitionViolationNamesEdge) {
  try {
    kpartite_aci(bipartite(), {2, {1, 2, 2, 2}}, {}, DivergenceSpec::kl());
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("U2->V1"), std::string::npos) << e.what();
  }
}

TEST(SubadditivityAudit, Cases) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 100; ++t) {
    const auto net = oracle::random_net(rng, 4, 0.6);
    const auto s = oracle::random_subset(rng, net.edges());
    const auto kl = subadditivity_audit(net, s, DivergenceSpec::kl(), 0.0);
    EXPECT_TRUE(kl.alpha_bound_holds);
    EXPECT_NEAR(kl.total, kl.bound_sum, 1e-9);
    EXPECT_TRUE(subadditivity_audit(net, s, DivergenceSpec::hellinger_sq(), 0.0).alpha_bound_holds);
  }
  const auto none = subadditivity_audit(chain_zxy(), {}, DivergenceSpec::hellinger_sq(), 0.0);
  EXPECT_TRUE(none.alpha_bound_holds);
  EXPECT_TRUE(subadditivity_audit(chain_zxy(), {}, DivergenceSpec::hellinger_sq(), 0.01).closeness.two_sided);
  EXPECT_THROW(subadditivity_audit(chain_zxy(), {}, DivergenceSpec::kl(), -1.0), ValidationError);
}

}  // namespace
}  // namespace causent
