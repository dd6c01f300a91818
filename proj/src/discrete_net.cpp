#include "causent/discrete_net.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "causent/error.hpp"

namespace causent {

namespace {

constexpr double kJointTol = 1e-10;

std::size_t checked_product(std::span<const int> cards, std::size_t cap) {
  std::size_t total = 1;
  for (int c : cards) {
    if (total > cap / static_cast<std::size_t>(c)) {
      throw CapacityError("joint state space exceeds the cap of " + std::to_string(cap) +
                          " entries");
    }
    total *= static_cast<std::size_t>(c);
  }
  return total;
}

std::size_t draw(std::span<const double> probs, double u) {
  double acc = 0.0;
  for (std::size_t v = 0; v + 1 < probs.size(); ++v) {
    acc += probs[v];
    if (u < acc) return v;
  }
  return probs.size() - 1;
}

}  // namespace

std::vector<int> JointTable::state(std::size_t index) const {
  std::vector<int> out(scope.size());
  for (std::size_t k = scope.size(); k-- > 0;) {
    out[k] = static_cast<int>(index % static_cast<std::size_t>(cards[k]));
    index /= static_cast<std::size_t>(cards[k]);
  }
  return out;
}

std::size_t JointTable::index(std::span<const int> values) const {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < scope.size(); ++k) idx = idx * cards[k] + values[k];
  return idx;
}

void check_joint(const JointTable& table) {
  double total = 0.0;
  for (double p : table.probs) {
    if (!(p >= 0.0)) throw ValidationError("joint table has a negative or NaN entry");
    total += p;
  }
  if (std::abs(total - 1.0) > kJointTol) {
    throw ValidationError("joint table sums to " + std::to_string(total) + ", not 1");
  }
}

DiscreteNet::DiscreteNet(std::vector<NetNode> nodes, double row_tolerance)
    : nodes_(std::move(nodes)), row_tol_(row_tolerance) {
  const int n = size();
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    const NetNode& nd = nodes_[i];
    const std::string who = "node '" + nd.name + "'";
    if (nd.card < 1) throw ValidationError(who + " has alphabet size < 1");
    for (std::size_t k = 0; k < nd.parents.size(); ++k) {
      const int p = nd.parents[k];
      if (p < 0 || p >= n) throw ValidationError(who + " has an unknown parent");
      if (p == i) throw ValidationError(who + " is its own parent");
      if (k > 0 && nd.parents[k - 1] >= p) {
        throw ValidationError(who + " parents must be listed in ascending node order");
      }
      edges.emplace_back(p, i);
    }
    std::size_t rows = 1;
    for (int p : nd.parents) rows *= static_cast<std::size_t>(nodes_[p].card);
    if (nd.cpt.size() != rows) {
      throw ValidationError(who + " CPT has " + std::to_string(nd.cpt.size()) + " rows, expected " +
                            std::to_string(rows));
    }
    for (std::size_t r = 0; r < rows; ++r) {
      const auto& row = nd.cpt[r];
      if (row.size() != static_cast<std::size_t>(nd.card)) {
        throw ValidationError(who + " CPT row " + std::to_string(r) + " has wrong length");
      }
      double sum = 0.0;
      for (double v : row) {
        if (!(v >= 0.0)) throw ValidationError(who + " CPT row " + std::to_string(r) + " has a negative entry");
        sum += v;
      }
      if (std::abs(sum - 1.0) > row_tol_) {
        throw ValidationError(who + " CPT row " + std::to_string(r) + " sums to " + std::to_string(sum));
      }
    }
  }
  // Kahn order; transitive_closure reports the cycle if there is one.
  std::vector<int> indeg(n, 0);
  std::vector<std::vector<int>> children(n);
  for (auto [a, b] : edges) {
    ++indeg[b];
    children[a].push_back(b);
  }
  std::vector<int> ready;
  for (int i = n - 1; i >= 0; --i)
    if (indeg[i] == 0) ready.push_back(i);
  while (!ready.empty()) {
    const int v = ready.back();
    ready.pop_back();
    topo_.push_back(v);
    for (int c : children[v])
      if (--indeg[c] == 0) ready.push_back(c);
  }
  if (static_cast<int>(topo_.size()) != n) (void)transitive_closure(n, edges);
}

int DiscreteNet::index_of(const std::string& name) const {
  for (int i = 0; i < size(); ++i)
    if (nodes_[i].name == name) return i;
  throw ValidationError("unknown node '" + name + "'");
}

bool DiscreteNet::has_edge(int parent, int child) const {
  if (child < 0 || child >= size()) return false;
  const auto& ps = nodes_[child].parents;
  return std::binary_search(ps.begin(), ps.end(), parent);
}

std::vector<Edge> DiscreteNet::edges() const {
  std::vector<Edge> out;
  for (int i = 0; i < size(); ++i)
    for (int p : nodes_[i].parents) out.emplace_back(p, i);
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t DiscreteNet::parent_config(int i, std::span<const int> assignment) const {
  std::size_t row = 0;
  for (int p : nodes_[i].parents) row = row * nodes_[p].card + assignment[p];
  return row;
}

double DiscreteNet::cond_prob(int i, std::span<const int> assignment) const {
  return nodes_[i].cpt[parent_config(i, assignment)][assignment[i]];
}

void check_edges(const DiscreteNet& net, const EdgeSet& s) {
  for (auto [a, b] : s) {
    if (!net.has_edge(a, b)) {
      const auto name = [&](int v) {
        return v >= 0 && v < net.size() ? net.node(v).name : std::to_string(v);
      };
      throw ValidationError("edge " + name(a) + "->" + name(b) + " is not in the network");
    }
  }
}

std::vector<int> targets(const EdgeSet& s) {
  std::vector<int> out;
  for (auto [a, b] : s) out.push_back(b);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

JointTable joint(const DiscreteNet& net, std::size_t state_cap) {
  JointTable t;
  const int n = net.size();
  for (int i = 0; i < n; ++i) {
    t.scope.push_back(i);
    t.cards.push_back(net.node(i).card);
  }
  const std::size_t total = checked_product(t.cards, state_cap);
  t.probs.assign(total, 0.0);
  std::vector<int> x(n, 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    double p = 1.0;
    for (int i = 0; i < n && p > 0.0; ++i) p *= net.cond_prob(i, x);
    t.probs[idx] = p;
    for (int k = n - 1; k >= 0; --k) {
      if (++x[k] < t.cards[k]) break;
      x[k] = 0;
    }
  }
  return t;
}

JointTable marginal(const JointTable& table, std::span<const int> vars) {
  std::vector<int> pos;
  for (int v : vars) {
    auto it = std::find(table.scope.begin(), table.scope.end(), v);
    if (it == table.scope.end()) throw ValidationError("variable " + std::to_string(v) + " is not in the table scope");
    const int k = static_cast<int>(it - table.scope.begin());
    if (std::find(pos.begin(), pos.end(), k) != pos.end()) {
      throw ValidationError("variable " + std::to_string(v) + " listed twice");
    }
    pos.push_back(k);
  }
  JointTable out;
  out.scope.assign(vars.begin(), vars.end());
  for (int k : pos) out.cards.push_back(table.cards[k]);
  std::size_t total = 1;
  for (int c : out.cards) total *= static_cast<std::size_t>(c);
  out.probs.assign(total, 0.0);

  const std::size_t m = table.scope.size();
  std::vector<int> x(m, 0);
  for (std::size_t idx = 0; idx < table.probs.size(); ++idx) {
    std::size_t o = 0;
    for (std::size_t j = 0; j < pos.size(); ++j) o = o * out.cards[j] + x[pos[j]];
    out.probs[o] += table.probs[idx];
    for (std::size_t k = m; k-- > 0;) {
      if (++x[k] < table.cards[k]) break;
      x[k] = 0;
    }
  }
  double sum = 0.0;
  for (double p : out.probs) sum += p;
  if (sum > 0.0)
    for (double& p : out.probs) p /= sum;
  return out;
}

MarginalSnapshot node_marginals(const DiscreteNet& net, std::size_t state_cap) {
  const JointTable j = joint(net, state_cap);
  MarginalSnapshot out(net.size());
  for (int i = 0; i < net.size(); ++i) {
    const int v[] = {i};
    out[i] = marginal(j, v).probs;
  }
  return out;
}

DiscreteNet apply_intervention(const DiscreteNet& net, const EdgeSet& s,
                               const MarginalSnapshot& marginals) {
  if (static_cast<int>(marginals.size()) != net.size()) {
    throw ValidationError("marginal snapshot does not match the network size");
  }
  std::vector<NetNode> nodes = net.nodes();
  for (int t : targets(s)) {
    const NetNode& old = net.node(t);
    std::vector<int> kept, cut;
    for (int p : old.parents) (s.count({p, t}) ? cut : kept).push_back(p);
    if (cut.empty()) continue;

    std::size_t kept_rows = 1;
    for (int p : kept) kept_rows *= static_cast<std::size_t>(net.node(p).card);
    NetNode nd = old;
    nd.parents = kept;
    nd.cpt.assign(kept_rows, std::vector<double>(old.card, 0.0));

    // Walk every configuration of the old parents.
    const std::size_t np = old.parents.size();
    std::vector<int> cfg(np, 0);
    for (std::size_t row = 0; row < old.cpt.size(); ++row) {
      double w = 1.0;
      std::size_t kept_row = 0;
      for (std::size_t k = 0; k < np; ++k) {
        const int p = old.parents[k];
        if (s.count({p, t})) {
          w *= marginals[p][cfg[k]];
        } else {
          kept_row = kept_row * net.node(p).card + cfg[k];
        }
      }
      for (int v = 0; v < old.card; ++v) nd.cpt[kept_row][v] += w * old.cpt[row][v];
      for (std::size_t k = np; k-- > 0;) {
        if (++cfg[k] < net.node(old.parents[k]).card) break;
        cfg[k] = 0;
      }
    }
    for (auto& r : nd.cpt) {
      double sum = 0.0;
      for (double v : r) sum += v;
      for (double& v : r) v /= sum;
    }
    nodes[t] = std::move(nd);
  }
  return DiscreteNet(std::move(nodes), net.row_tolerance());
}

DiscreteNet intervene(const DiscreteNet& net, const EdgeSet& s, std::size_t state_cap) {
  check_edges(net, s);
  if (s.empty()) return net;
  return apply_intervention(net, s, node_marginals(net, state_cap));
}

double unit_uniform(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t chunk) {
  // splitmix64 finalizer over the combined value
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (chunk + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

SampleMatrix sample(const DiscreteNet& net, std::size_t m, std::uint64_t seed) {
  if (m == 0) throw ValidationError("sample size must be at least 1");
  SampleMatrix out;
  out.rows = m;
  out.cols = static_cast<std::size_t>(net.size());
  out.values.assign(m * out.cols, 0);
  std::vector<int> x(out.cols);
  for (std::size_t start = 0, chunk = 0; start < m; start += kSampleChunk, ++chunk) {
    std::mt19937_64 rng(chunk_seed(seed, chunk));
    const std::size_t end = std::min(m, start + kSampleChunk);
    for (std::size_t r = start; r < end; ++r) {
      for (int i : net.topological_order()) {
        const auto& row = net.node(i).cpt[net.parent_config(i, x)];
        x[i] = static_cast<int>(draw(row, unit_uniform(rng())));
      }
      std::copy(x.begin(), x.end(), out.values.begin() + static_cast<std::ptrdiff_t>(r * out.cols));
    }
  }
  return out;
}

std::vector<std::size_t> sample_indices(const JointTable& table, std::size_t m, std::uint64_t seed) {
  std::vector<double> cdf(table.probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < cdf.size(); ++i) cdf[i] = (acc += table.probs[i]);
  std::vector<std::size_t> out(m);
  for (std::size_t start = 0, chunk = 0; start < m; start += kSampleChunk, ++chunk) {
    std::mt19937_64 rng(chunk_seed(seed, chunk));
    const std::size_t end = std::min(m, start + kSampleChunk);
    for (std::size_t r = start; r < end; ++r) {
      const double u = unit_uniform(rng()) * acc;
      auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      out[r] = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
    }
  }
  return out;
}

}  // namespace causent
