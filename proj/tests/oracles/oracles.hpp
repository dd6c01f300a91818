#pragma once

// Independent reference computations used to freeze expected values. None of
// these call into the library's algorithms beyond reading model structs.

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <vector>

#include "causent/discrete_net.hpp"

namespace oracle {

struct OrderCounts {
  std::uint64_t total = 0;
  std::map<int, std::uint64_t> by_relations;
};

// Filters every subset of the n(n-1) ordered pairs for antisymmetry and
// transitivity.
inline OrderCounts brute_force_orders(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b) pairs.emplace_back(a, b);
  OrderCounts out;
  const std::uint64_t subsets = std::uint64_t{1} << pairs.size();
  std::vector<char> rel(static_cast<std::size_t>(n * n));
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    std::fill(rel.begin(), rel.end(), 0);
    int count = 0;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if (mask >> k & 1) {
        rel[pairs[k].first * n + pairs[k].second] = 1;
        ++count;
      }
    }
    bool ok = true;
    for (int a = 0; a < n && ok; ++a)
      for (int b = 0; b < n && ok; ++b) {
        if (!rel[a * n + b]) continue;
        if (rel[b * n + a]) ok = false;
        for (int c = 0; c < n && ok; ++c)
          if (rel[b * n + c] && !rel[a * n + c]) ok = false;
      }
    if (ok) {
      ++out.total;
      ++out.by_relations[count];
    }
  }
  return out;
}

// Orders grown one point at a time: the new point's down-set and up-set must
// be a down-closed and up-closed pair of disjoint sets in the old order with
// every down element below every up element.
inline OrderCounts extension_orders(int n) {
  OrderCounts out;
  std::vector<std::vector<char>> current{std::vector<char>{}};
  for (int m = 0; m < n; ++m) {
    std::vector<std::vector<char>> next;
    for (const auto& rel : current) {
      const std::uint64_t lim = std::uint64_t{1} << m;
      for (std::uint64_t down = 0; down < lim; ++down) {
        for (std::uint64_t up = 0; up < lim; ++up) {
          if (down & up) continue;
          bool ok = true;
          for (int a = 0; a < m && ok; ++a) {
            for (int b = 0; b < m && ok; ++b) {
              if (!rel[a * m + b]) continue;
              if ((down >> b & 1) && !(down >> a & 1)) ok = false;
              if ((up >> a & 1) && !(up >> b & 1)) ok = false;
            }
            for (int b = 0; b < m && ok; ++b)
              if ((down >> a & 1) && (up >> b & 1) && !rel[a * m + b]) ok = false;
          }
          if (!ok) continue;
          const int k = m + 1;
          std::vector<char> grown(static_cast<std::size_t>(k * k), 0);
          for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) grown[a * k + b] = rel[a * m + b];
          for (int a = 0; a < m; ++a) {
            if (down >> a & 1) grown[a * k + m] = 1;
            if (up >> a & 1) grown[m * k + a] = 1;
          }
          next.push_back(std::move(grown));
        }
      }
    }
    current = std::move(next);
  }
  for (const auto& rel : current) {
    int count = 0;
    for (char c : rel) count += c;
    ++out.total;
    ++out.by_relations[count];
  }
  return out;
}

inline int row_of(const causent::NetNode& nd, const std::vector<causent::NetNode>& nodes, const std::vector<int>& x,
                  const std::vector<int>& override_vals = {}) {
  int row = 0;
  for (std::size_t k = 0; k < nd.parents.size(); ++k) {
    const int p = nd.parents[k];
    const int v = override_vals.empty() ? x[p] : override_vals[k];
    row = row * nodes[p].card + v;
  }
  return row;
}

inline std::vector<std::vector<int>> all_states(const std::vector<int>& cards) {
  std::vector<std::vector<int>> out{{}};
  for (int c : cards) {
    std::vector<std::vector<int>> next;
    for (const auto& s : out)
      for (int v = 0; v < c; ++v) {
        auto t = s;
        t.push_back(v);
        next.push_back(std::move(t));
      }
    out = std::move(next);
  }
  return out;
}

// Product-form joint, first node most significant.
inline std::vector<double> joint_probs(const causent::DiscreteNet& net) {
  std::vector<int> cards;
  for (const auto& nd : net.nodes()) cards.push_back(nd.card);
  std::vector<double> out;
  for (const auto& x : all_states(cards)) {
    double p = 1.0;
    for (int i = 0; i < net.size(); ++i) {
      const auto& nd = net.node(i);
      p *= nd.cpt[row_of(nd, net.nodes(), x)][x[i]];
    }
    out.push_back(p);
  }
  return out;
}

// P_S(x) = prod_i sum over the severed parents' values of
// P(x_i | kept parents, severed values) * prod P(severed value), with the
// severed marginals read off the observational joint.
inline std::vector<double> post_intervention_probs(const causent::DiscreteNet& net, const causent::EdgeSet& s) {
  std::vector<int> cards;
  for (const auto& nd : net.nodes()) cards.push_back(nd.card);
  const auto states = all_states(cards);
  const std::vector<double> pj = joint_probs(net);
  std::vector<std::vector<double>> marg(static_cast<std::size_t>(net.size()));
  for (int i = 0; i < net.size(); ++i) marg[i].assign(static_cast<std::size_t>(cards[i]), 0.0);
  for (std::size_t k = 0; k < states.size(); ++k)
    for (int i = 0; i < net.size(); ++i) marg[i][states[k][i]] += pj[k];

  std::vector<double> out;
  for (const auto& x : states) {
    double p = 1.0;
    for (int i = 0; i < net.size(); ++i) {
      const auto& nd = net.node(i);
      std::vector<int> severed;
      for (std::size_t k = 0; k < nd.parents.size(); ++k)
        if (s.count({nd.parents[k], i})) severed.push_back(static_cast<int>(k));
      std::vector<int> sev_cards;
      for (int k : severed) sev_cards.push_back(cards[nd.parents[k]]);
      double term = 0.0;
      for (const auto& sv : all_states(sev_cards)) {
        std::vector<int> vals;
        for (int par : nd.parents) vals.push_back(x[par]);
        double w = 1.0;
        for (std::size_t k = 0; k < severed.size(); ++k) {
          vals[severed[k]] = sv[k];
          w *= marg[nd.parents[severed[k]]][sv[k]];
        }
        term += w * nd.cpt[row_of(nd, net.nodes(), x, vals)][x[i]];
      }
      p *= term;
    }
    out.push_back(p);
  }
  return out;
}

inline double kl(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return std::numeric_limits<double>::infinity();
    s += p[i] * std::log(p[i] / q[i]);
  }
  return s;
}

inline double hellinger_sq(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::pow(std::sqrt(p[i]) - std::sqrt(q[i]), 2);
  return 0.5 * s;
}

inline double tv(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

inline double chi_sq(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += (p[i] - q[i]) * (p[i] - q[i]) / q[i];
  return s;
}

// Cressie-Read with generic lambda away from 0 and -1.
inline double cressie_read(double lambda, const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += p[i] * (std::pow(p[i] / q[i], lambda) - 1.0);
  return s / (lambda * (lambda + 1.0));
}

inline double entropy_nats(double a) {
  double h = 0.0;
  for (double v : {a, 1.0 - a})
    if (v > 0) h -= v * std::log(v);
  return h;
}

inline double entropy_bits(double x) { return entropy_nats(x) / std::log(2.0); }

inline std::vector<double> random_dist(std::mt19937_64& rng, std::size_t dim, bool allow_zero = false) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(dim);
  double sum = 0.0;
  for (double& x : v) {
    x = allow_zero && u(rng) < 0.15 ? 0.0 : -std::log(1.0 - u(rng)) + 1e-3;
    sum += x;
  }
  if (sum == 0.0) {
    v[0] = 1.0;
    return v;
  }
  for (double& x : v) x /= sum;
  return v;
}

// Random binary DAG on n nodes in index order; each forward pair is an edge
// with probability edge_p. CPT rows are drawn from a flat Dirichlet.
inline causent::DiscreteNet random_net(std::mt19937_64& rng, int n, double edge_p = 0.5, int card = 2) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<causent::NetNode> nodes;
  for (int i = 0; i < n; ++i) {
    causent::NetNode nd;
    nd.name = "X" + std::to_string(i + 1);
    nd.card = card;
    for (int j = 0; j < i; ++j)
      if (u(rng) < edge_p) nd.parents.push_back(j);
    const std::size_t rows = static_cast<std::size_t>(std::pow(card, nd.parents.size()));
    for (std::size_t r = 0; r < rows; ++r) nd.cpt.push_back(random_dist(rng, static_cast<std::size_t>(card)));
    nodes.push_back(std::move(nd));
  }
  return causent::DiscreteNet(std::move(nodes));
}

inline causent::EdgeSet random_subset(std::mt19937_64& rng, const std::vector<causent::Edge>& edges) {
  std::bernoulli_distribution coin(0.5);
  causent::EdgeSet s;
  for (const auto& e : edges)
    if (coin(rng)) s.insert(e);
  return s;
}

// Z -> X copies Z, {Z, X} -> Y is X xor Z; node order Z, X, Y.
inline causent::DiscreteNet xor_net(double a) {
  std::vector<causent::NetNode> nodes(3);
  nodes[0] = {"Z", 2, {}, {{a, 1.0 - a}}};
  nodes[1] = {"X", 2, {0}, {{1.0, 0.0}, {0.0, 1.0}}};
  nodes[2] = {"Y", 2, {0, 1}, {{1.0, 0.0}, {0.0, 1.0}, {0.0, 1.0}, {1.0, 0.0}}};
  return causent::DiscreteNet(std::move(nodes));
}

}  // namespace oracle
