#include "causent/order.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>

#include "causent/error.hpp"

namespace causent {

namespace {

std::string pt(int i) { return std::to_string(i + 1); }

void check_endpoints(int n, std::span<const Edge> edges) {
  if (n < 0) throw ValidationError("point count must be non-negative");
  for (const auto& [a, b] : edges) {
    if (a < 0 || a >= n || b < 0 || b >= n) {
      throw ValidationError("edge (" + std::to_string(a + 1) + "," +
                            std::to_string(b + 1) + ") has an endpoint outside [1," +
                            std::to_string(n) + "]");
    }
  }
}

std::vector<std::vector<int>> adjacency(int n, std::span<const Edge> edges) {
  std::vector<std::vector<int>> adj(n);
  for (const auto& [a, b] : edges) adj[a].push_back(b);
  for (auto& succ : adj) {
    std::sort(succ.begin(), succ.end());
    succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
  }
  return adj;
}

// Tarjan SCC; returns component id per vertex.
std::vector<int> strongly_connected(const std::vector<std::vector<int>>& adj) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1), stack;
  std::vector<bool> on_stack(n, false);
  int counter = 0, comps = 0;
  // iterative DFS frames: (vertex, next child position)
  std::vector<std::pair<int, std::size_t>> frames;
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    frames.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      if (pos < adj[v].size()) {
        const int w = adj[v][pos++];
        if (index[w] == -1) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = comps;
        } while (w != v);
        ++comps;
      }
      const int done = v;
      frames.pop_back();
      if (!frames.empty()) {
        const int parent = frames.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
    }
  }
  return comp;
}

}  // namespace

// BitMatrix

BitMatrix::BitMatrix(int n)
    : n_(n),
      words_((n + 63) / 64),
      data_(static_cast<std::size_t>(n) * static_cast<std::size_t>((n + 63) / 64), 0) {}

void BitMatrix::or_row(int dst, int src) {
  auto d = row(dst);
  auto s = row(src);
  for (int w = 0; w < words_; ++w) d[w] |= s[w];
}

std::size_t BitMatrix::count() const {
  std::size_t c = 0;
  for (auto w : data_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

std::size_t BitMatrix::row_count(int i) const {
  std::size_t c = 0;
  for (auto w : row(i)) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

BitMatrix BitMatrix::transposed() const {
  BitMatrix t(n_);
  for (int i = 0; i < n_; ++i) {
    auto r = row(i);
    for (int w = 0; w < words_; ++w) {
      std::uint64_t bits = r[w];
      while (bits) {
        const int j = w * 64 + std::countr_zero(bits);
        bits &= bits - 1;
        t.set(j, i);
      }
    }
  }
  return t;
}

// StrictOrder

StrictOrder StrictOrder::from_relations(int n, std::span<const Edge> relations) {
  check_endpoints(n, relations);
  BitMatrix m(n);
  for (const auto& [a, b] : relations) {
    if (a == b) throw ValidationError("reflexive pair (" + pt(a) + "," + pt(a) + ") in a strict order");
    m.set(a, b);
  }
  return from_closure(std::move(m));
}

StrictOrder StrictOrder::from_closure(BitMatrix m) {
  const int n = m.size();
  for (int i = 0; i < n; ++i) {
    if (m.test(i, i)) throw ValidationError("point " + pt(i) + " is related to itself");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (m.test(i, j) && m.test(j, i)) {
        throw ValidationError("pairs (" + pt(i) + "," + pt(j) + ") and (" + pt(j) +
                              "," + pt(i) + ") violate antisymmetry");
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    auto ri = m.row(i);
    for (int j = 0; j < n; ++j) {
      if (!m.test(i, j)) continue;
      auto rj = m.row(j);
      for (int w = 0; w < m.words_per_row(); ++w) {
        const std::uint64_t missing = rj[w] & ~ri[w];
        if (missing) {
          const int k = w * 64 + std::countr_zero(missing);
          throw ValidationError("relation is not transitive: " + pt(i) + "<" + pt(j) +
                                " and " + pt(j) + "<" + pt(k) + " but not " + pt(i) +
                                "<" + pt(k));
        }
      }
    }
  }
  return StrictOrder(Trusted{}, std::move(m));
}

std::vector<Edge> StrictOrder::relations() const {
  std::vector<Edge> out;
  out.reserve(relation_count());
  for (int i = 0; i < size(); ++i)
    for (int j = 0; j < size(); ++j)
      if (less(i, j)) out.emplace_back(i, j);
  return out;
}

// HasseDag

HasseDag HasseDag::from_covers(int n, std::vector<Edge> covers) {
  std::sort(covers.begin(), covers.end());
  covers.erase(std::unique(covers.begin(), covers.end()), covers.end());
  const StrictOrder closure = transitive_closure(n, covers);
  HasseDag reduced = transitive_reduction(closure);
  if (reduced.covers() != covers) {
    for (const auto& e : covers) {
      if (!std::binary_search(reduced.covers().begin(), reduced.covers().end(), e)) {
        throw ValidationError("edge (" + pt(e.first) + "," + pt(e.second) +
                              ") is a shortcut: a longer path connects its endpoints");
      }
    }
  }
  return HasseDag(n, std::move(covers));
}

std::vector<int> smallest_cycle(int n, std::span<const Edge> edges) {
  check_endpoints(n, edges);
  const auto adj = adjacency(n, edges);
  const auto comp = strongly_connected(adj);
  std::vector<int> comp_size(n, 0);
  for (int v = 0; v < n; ++v) ++comp_size[comp[v]];

  int start = -1;
  for (int v = 0; v < n && start < 0; ++v) {
    if (comp_size[comp[v]] > 1) start = v;
    if (std::binary_search(adj[v].begin(), adj[v].end(), v)) start = v;
  }
  if (start < 0) return {};
  if (std::binary_search(adj[start].begin(), adj[start].end(), start)) return {start};

  const int c = comp[start];
  std::vector<bool> visited(n, false);
  visited[start] = true;
  std::vector<int> path{start};

  // Can `from` reach `start` through unvisited vertices of the component?
  auto reaches_start = [&](int from) {
    std::vector<bool> seen(visited);
    std::vector<int> queue{from};
    seen[from] = true;
    for (std::size_t q = 0; q < queue.size(); ++q) {
      for (int w : adj[queue[q]]) {
        if (w == start) return true;
        if (comp[w] != c || seen[w]) continue;
        seen[w] = true;
        queue.push_back(w);
      }
    }
    return false;
  };

  int cur = start;
  while (true) {
    if (cur != start && std::binary_search(adj[cur].begin(), adj[cur].end(), start)) {
      return path;
    }
    int next = -1;
    for (int u : adj[cur]) {
      if (u == start || visited[u] || comp[u] != c) continue;
      if (reaches_start(u)) {
        next = u;
        break;
      }
    }
    // Unreachable: the component guarantees a completion exists.
    if (next < 0) return path;
    visited[next] = true;
    path.push_back(next);
    cur = next;
  }
}

StrictOrder transitive_closure(int n, std::span<const Edge> edges) {
  check_endpoints(n, edges);
  const auto adj = adjacency(n, edges);
  std::vector<int> indeg(n, 0);
  for (int v = 0; v < n; ++v)
    for (int w : adj[v]) ++indeg[w];
  std::vector<int> topo;
  topo.reserve(n);
  for (int v = 0; v < n; ++v)
    if (indeg[v] == 0) topo.push_back(v);
  for (std::size_t q = 0; q < topo.size(); ++q) {
    for (int w : adj[topo[q]])
      if (--indeg[w] == 0) topo.push_back(w);
  }
  if (static_cast<int>(topo.size()) != n) {
    auto cycle = smallest_cycle(n, edges);
    std::string msg = "graph has a directed cycle:";
    for (int v : cycle) msg += " " + pt(v);
    msg += " " + pt(cycle.front());
    throw CycleError(msg, std::move(cycle));
  }
  BitMatrix m(n);
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    const int v = *it;
    for (int w : adj[v]) {
      m.set(v, w);
      m.or_row(v, w);
    }
  }
  return StrictOrder(StrictOrder::Trusted{}, std::move(m));
}

StrictOrder transitive_closure(const HasseDag& dag) {
  return transitive_closure(dag.size(), dag.covers());
}

HasseDag transitive_reduction(const StrictOrder& order) {
  const BitMatrix& m = order.closure();
  const int n = m.size();
  const int words = m.words_per_row();
  std::vector<Edge> covers;
  std::vector<std::uint64_t> implied(words);
  for (int a = 0; a < n; ++a) {
    std::fill(implied.begin(), implied.end(), 0);
    auto ra = m.row(a);
    for (int w = 0; w < words; ++w) {
      std::uint64_t bits = ra[w];
      while (bits) {
        const int z = w * 64 + std::countr_zero(bits);
        bits &= bits - 1;
        auto rz = m.row(z);
        for (int u = 0; u < words; ++u) implied[u] |= rz[u];
      }
    }
    for (int w = 0; w < words; ++w) {
      std::uint64_t bits = ra[w] & ~implied[w];
      while (bits) {
        covers.emplace_back(a, w * 64 + std::countr_zero(bits));
        bits &= bits - 1;
      }
    }
  }
  return HasseDag(n, std::move(covers));
}

// Levels

std::vector<std::vector<int>> LevelAssignment::level_sets() const {
  std::vector<std::vector<int>> sets(height);
  for (int v = 0; v < static_cast<int>(levels.size()); ++v) sets[levels[v] - 1].push_back(v);
  return sets;
}

LevelAssignment compute_levels(const StrictOrder& order) {
  const int n = order.size();
  const BitMatrix pred = order.closure().transposed();
  const int words = pred.words_per_row();
  std::vector<std::uint64_t> remaining(words, 0);
  for (int v = 0; v < n; ++v) remaining[v >> 6] |= std::uint64_t{1} << (v & 63);

  LevelAssignment out;
  out.levels.assign(n, 0);
  int left = n;
  while (left > 0) {
    ++out.height;
    std::vector<int> minimal;
    for (int v = 0; v < n; ++v) {
      if (out.levels[v] != 0) continue;
      auto pv = pred.row(v);
      bool has_pred = false;
      for (int w = 0; w < words && !has_pred; ++w) has_pred = (pv[w] & remaining[w]) != 0;
      if (!has_pred) minimal.push_back(v);
    }
    for (int v : minimal) {
      out.levels[v] = out.height;
      remaining[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
    }
    left -= static_cast<int>(minimal.size());
  }
  return out;
}

MirskyResult mirsky_check(const StrictOrder& order) {
  const auto levels = compute_levels(order);
  return {levels.height, levels.level_sets()};
}

int longest_chain_bruteforce(const StrictOrder& order) {
  const int n = order.size();
  int best = 0;
  std::vector<int> chain;
  auto extend = [&](auto&& self, int last) -> void {
    best = std::max(best, static_cast<int>(chain.size()));
    for (int v = 0; v < n; ++v) {
      if (order.less(last, v)) {
        chain.push_back(v);
        self(self, v);
        chain.pop_back();
      }
    }
  };
  for (int v = 0; v < n; ++v) {
    chain.assign(1, v);
    extend(extend, v);
  }
  return best;
}

bool is_antichain(const StrictOrder& order, std::span<const int> points) {
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (order.comparable(points[i], points[j])) return false;
  return true;
}

KPartitionReport validate_kpartition(const StrictOrder& order, const KPartition& part,
                                     std::size_t max_reported) {
  const int n = order.size();
  if (static_cast<int>(part.layer.size()) != n) {
    throw ValidationError("partition assigns " + std::to_string(part.layer.size()) +
                          " points but the order has " + std::to_string(n));
  }
  for (int v = 0; v < n; ++v) {
    if (part.layer[v] < 1 || part.layer[v] > part.k) {
      throw ValidationError("point " + pt(v) + " has layer " + std::to_string(part.layer[v]) +
                            " outside 1.." + std::to_string(part.k));
    }
  }
  KPartitionReport report;
  auto record = [&](int a, int b, int condition) {
    report.valid = false;
    ++report.violation_count;
    if (report.violations.size() < max_reported) report.violations.push_back({a, b, condition});
  };
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      const int la = part.layer[a], lb = part.layer[b];
      if (order.less(a, b) && la >= lb) record(a, b, 1);
      if (la < lb - 1 && !order.less(a, b)) record(a, b, 2);
    }
  }
  return report;
}

}  // namespace causent
