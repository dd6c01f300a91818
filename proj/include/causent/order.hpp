#pragma once

// Strict partial orders on [n], their Hasse diagrams, level structure and
// k-partitioned layouts. Points are 0-indexed here; the I/O layer shifts to
// 1-indexed.

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace causent {

using Edge = std::pair<int, int>;

// Square boolean matrix stored as packed 64-bit rows.
class BitMatrix {
 public:
  BitMatrix() = default;
  explicit BitMatrix(int n);

  int size() const { return n_; }
  int words_per_row() const { return words_; }

  bool test(int i, int j) const {
    return (data_[index(i, j)] >> (j & 63)) & 1u;
  }
  void set(int i, int j) { data_[index(i, j)] |= std::uint64_t{1} << (j & 63); }
  void reset(int i, int j) {
    data_[index(i, j)] &= ~(std::uint64_t{1} << (j & 63));
  }

  std::span<const std::uint64_t> row(int i) const {
    return {data_.data() + static_cast<std::size_t>(i) * words_,
            static_cast<std::size_t>(words_)};
  }
  std::span<std::uint64_t> row(int i) {
    return {data_.data() + static_cast<std::size_t>(i) * words_,
            static_cast<std::size_t>(words_)};
  }

  // row(dst) |= row(src)
  void or_row(int dst, int src);

  std::size_t count() const;
  std::size_t row_count(int i) const;
  BitMatrix transposed() const;

  bool operator==(const BitMatrix&) const = default;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * words_ + (j >> 6);
  }

  int n_ = 0;
  int words_ = 0;
  std::vector<std::uint64_t> data_;
};

// Irreflexive, antisymmetric, transitive relation; closure.test(a, b) means
// a < b.
class StrictOrder {
 public:
  StrictOrder() = default;
  explicit StrictOrder(int n) : closure_(n) {}

  // Validates all three order axioms; the relation set must already be
  // transitively closed. Throws ValidationError naming the first violation.
  static StrictOrder from_relations(int n, std::span<const Edge> relations);
  static StrictOrder from_closure(BitMatrix closure);

  int size() const { return closure_.size(); }
  bool less(int a, int b) const { return closure_.test(a, b); }
  bool comparable(int a, int b) const { return less(a, b) || less(b, a); }
  std::size_t relation_count() const { return closure_.count(); }
  std::vector<Edge> relations() const;  // sorted (a, b) with a < b
  const BitMatrix& closure() const { return closure_; }

  bool operator==(const StrictOrder&) const = default;

 private:
  struct Trusted {};
  StrictOrder(Trusted, BitMatrix closure) : closure_(std::move(closure)) {}
  friend StrictOrder transitive_closure(int n, std::span<const Edge> edges);

  BitMatrix closure_;
};

// Cover graph of a strict order: acyclic, no shortcut edges.
class HasseDag {
 public:
  HasseDag() = default;

  // Validates acyclicity and the absence of shortcut edges.
  static HasseDag from_covers(int n, std::vector<Edge> covers);

  int size() const { return n_; }
  const std::vector<Edge>& covers() const { return covers_; }

  bool operator==(const HasseDag&) const = default;

 private:
  HasseDag(int n, std::vector<Edge> covers) : n_(n), covers_(std::move(covers)) {}
  friend HasseDag transitive_reduction(const StrictOrder& order);

  int n_ = 0;
  std::vector<Edge> covers_;  // sorted
};

// Reachability closure of an arbitrary digraph. Throws CycleError with the
// lexicographically smallest cycle when the graph is not acyclic, and
// ValidationError for out-of-range endpoints.
StrictOrder transitive_closure(int n, std::span<const Edge> edges);
StrictOrder transitive_closure(const HasseDag& dag);

HasseDag transitive_reduction(const StrictOrder& order);

// Lexicographically smallest simple cycle, or empty if the graph is acyclic.
std::vector<int> smallest_cycle(int n, std::span<const Edge> edges);

struct LevelAssignment {
  std::vector<int> levels;  // per point, 1-based
  int height = 0;

  // Points at each level in ascending order; index 0 holds level 1.
  std::vector<std::vector<int>> level_sets() const;
};

// Iterated removal of minimal elements.
LevelAssignment compute_levels(const StrictOrder& order);

struct MirskyResult {
  int height = 0;
  std::vector<std::vector<int>> antichains;
};

MirskyResult mirsky_check(const StrictOrder& order);

// Longest chain length by exhaustive DFS; independent of compute_levels.
int longest_chain_bruteforce(const StrictOrder& order);

bool is_antichain(const StrictOrder& order, std::span<const int> points);

// Layer index in 1..k for every point.
struct KPartition {
  int k = 0;
  std::vector<int> layer;
};

struct KPartitionViolation {
  int a = 0;
  int b = 0;
  int condition = 0;  // 1: relation not pointing to a higher layer, 2: skip pair missing
  bool operator==(const KPartitionViolation&) const = default;
};

struct KPartitionReport {
  bool valid = true;
  std::size_t violation_count = 0;
  std::vector<KPartitionViolation> violations;  // first max_reported, in (a, b) order
};

KPartitionReport validate_kpartition(const StrictOrder& order,
                                     const KPartition& part,
                                     std::size_t max_reported = 64);

}  // namespace causent
