#pragma once

// Linear Gaussian SEMs X = A X + eps: observational and edge-intervened
// covariances and closed-form Gaussian divergences.

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "causent/discrete_net.hpp"
#include "causent/influence.hpp"
#include "causent/order.hpp"

namespace causent {

struct GaussianDist {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  int dim() const { return static_cast<int>(mean.size()); }
};

// Symmetric within 1e-10 and positive definite.
void check_gaussian(const GaussianDist& g);

class LinearSem {
 public:
  LinearSem() = default;
  // A(i, j) is the coefficient of X_j in the equation of X_i. `order` is a
  // topological order (0-based); A must be strictly lower triangular once
  // permuted by it. With a partition, nonzero coefficients must join
  // distinct layers, lower to higher.
  LinearSem(Eigen::MatrixXd a, Eigen::VectorXd noise_vars, Eigen::VectorXd noise_means = {},
            std::vector<int> order = {}, std::optional<KPartition> partition = std::nullopt);

  int size() const { return static_cast<int>(a_.rows()); }
  const Eigen::MatrixXd& coefficients() const { return a_; }
  const Eigen::VectorXd& noise_vars() const { return noise_vars_; }
  const Eigen::VectorXd& noise_means() const { return noise_means_; }
  const std::vector<int>& order() const { return order_; }
  const std::optional<KPartition>& partition() const { return partition_; }

  // Nonzero coefficients as (parent, child) pairs.
  std::vector<Edge> edges() const;

 private:
  Eigen::MatrixXd a_;
  Eigen::VectorXd noise_vars_;
  Eigen::VectorXd noise_means_;
  std::vector<int> order_;
  std::optional<KPartition> partition_;
};

void check_sem_edges(const LinearSem& sem, const EdgeSet& s);

GaussianDist observational_cov(const LinearSem& sem);

// Severed coefficients move into the noise: X = A_kept X + eps' where each
// target draws its own independent copy of the severed parents, so
// Cov(eps') = Cov(eps) + diag(A_cut diag(Sigma) A_cut^T).
// The severed parents' means A_cut mu join the noise mean.
GaussianDist intervened_cov(const LinearSem& sem, const EdgeSet& s);

double gaussian_hellinger_sq(const GaussianDist& p, const GaussianDist& q);
// KL(p || q) in nats.
double gaussian_kl(const GaussianDist& p, const GaussianDist& q);

enum class SemFamily { kl, hellinger_sq };
enum class SemGrouping { per_target, per_edge };

// Sum of group influences over |S|; each group (all cut edges into one
// target, or one edge) is evaluated against its own intervened covariance.
// per_target is keyed by target node, per_layer by the target's layer.
InfluenceResult sem_kpartite_aci(const LinearSem& sem, const EdgeSet& s, SemFamily family,
                                 SemGrouping grouping = SemGrouping::per_target);

}  // namespace causent
