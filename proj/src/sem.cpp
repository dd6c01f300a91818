#include "causent/sem.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "causent/error.hpp"

namespace causent {

namespace {

constexpr double kSymTol = 1e-10;

double log_det_spd(const Eigen::MatrixXd& m, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) throw ValidationError(std::string(what) + " is not positive definite");
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

void check_pair(const GaussianDist& p, const GaussianDist& q) {
  check_gaussian(p);
  check_gaussian(q);
  if (p.dim() != q.dim()) throw ValidationError("Gaussians have different dimensions");
}

Eigen::MatrixXd solve_covariance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& noise_cov) {
  const int n = static_cast<int>(a.rows());
  const Eigen::MatrixXd ima = Eigen::MatrixXd::Identity(n, n) - a;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(ima);
  const Eigen::MatrixXd inv = lu.solve(Eigen::MatrixXd::Identity(n, n));
  Eigen::MatrixXd cov = inv * noise_cov * inv.transpose();
  return 0.5 * (cov + cov.transpose());
}

Eigen::VectorXd solve_mean(const Eigen::MatrixXd& a, const Eigen::VectorXd& noise_mean) {
  const int n = static_cast<int>(a.rows());
  return (Eigen::MatrixXd::Identity(n, n) - a).partialPivLu().solve(noise_mean);
}

}  // namespace

void check_gaussian(const GaussianDist& g) {
  const int n = g.dim();
  if (g.cov.rows() != n || g.cov.cols() != n) throw ValidationError("covariance shape does not match the mean");
  if ((g.cov - g.cov.transpose()).cwiseAbs().maxCoeff() > kSymTol) {
    throw ValidationError("covariance is not symmetric");
  }
  if (n > 0) (void)log_det_spd(g.cov, "covariance");
}

LinearSem::LinearSem(Eigen::MatrixXd a, Eigen::VectorXd noise_vars, Eigen::VectorXd noise_means,
                     std::vector<int> order, std::optional<KPartition> partition)
    : a_(std::move(a)),
      noise_vars_(std::move(noise_vars)),
      noise_means_(std::move(noise_means)),
      order_(std::move(order)),
      partition_(std::move(partition)) {
  const int n = static_cast<int>(a_.rows());
  if (a_.cols() != n) throw ValidationError("coefficient matrix must be square");
  if (noise_vars_.size() != n) throw ValidationError("noise variance count does not match the matrix size");
  for (int i = 0; i < n; ++i) {
    if (!(noise_vars_[i] > 0.0)) throw ValidationError("noise variance of variable " + std::to_string(i + 1) + " must be positive");
  }
  if (noise_means_.size() == 0) noise_means_ = Eigen::VectorXd::Zero(n);
  if (noise_means_.size() != n) throw ValidationError("noise mean count does not match the matrix size");
  if (order_.empty()) {
    order_.resize(n);
    for (int i = 0; i < n; ++i) order_[i] = i;
  }
  if (static_cast<int>(order_.size()) != n) throw ValidationError("order must list every variable once");
  std::vector<int> pos(n, -1);
  for (int k = 0; k < n; ++k) {
    const int v = order_[k];
    if (v < 0 || v >= n || pos[v] != -1) throw ValidationError("order must list every variable once");
    pos[v] = k;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (a_(i, j) == 0.0) continue;
      if (pos[j] >= pos[i]) {
        throw ValidationError("coefficient A[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) +
                              "] is not strictly lower triangular under the declared order");
      }
    }
  }
  if (partition_) {
    if (static_cast<int>(partition_->layer.size()) != n) throw ValidationError("partition size does not match the model");
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (a_(i, j) != 0.0 && partition_->layer[i] == partition_->layer[j]) {
          throw ValidationError("coefficient A[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) +
                                "] joins two variables of layer " + std::to_string(partition_->layer[i]));
        }
      }
    }
  }
}

std::vector<Edge> LinearSem::edges() const {
  std::vector<Edge> out;
  for (int j = 0; j < size(); ++j)
    for (int i = 0; i < size(); ++i)
      if (a_(i, j) != 0.0) out.emplace_back(j, i);
  return out;
}

void check_sem_edges(const LinearSem& sem, const EdgeSet& s) {
  for (auto [j, i] : s) {
    if (j < 0 || i < 0 || j >= sem.size() || i >= sem.size() || sem.coefficients()(i, j) == 0.0) {
      throw ValidationError("edge " + std::to_string(j + 1) + "->" + std::to_string(i + 1) +
                            " has no coefficient in the model");
    }
  }
}

GaussianDist observational_cov(const LinearSem& sem) {
  GaussianDist g;
  g.cov = solve_covariance(sem.coefficients(), sem.noise_vars().asDiagonal());
  g.mean = solve_mean(sem.coefficients(), sem.noise_means());
  return g;
}

GaussianDist intervened_cov(const LinearSem& sem, const EdgeSet& s) {
  check_sem_edges(sem, s);
  const GaussianDist obs = observational_cov(sem);
  const int n = sem.size();
  Eigen::MatrixXd cut = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd kept = sem.coefficients();
  for (auto [j, i] : s) {
    cut(i, j) = kept(i, j);
    kept(i, j) = 0.0;
  }
  // Each target averages over its own copy of the severed parents, so the
  // added noise is independent across targets: only the diagonal of
  // A_S diag(Sigma) A_S^T enters.
  const Eigen::VectorXd var_diag = obs.cov.diagonal();
  const Eigen::VectorXd added = cut.cwiseAbs2() * var_diag;
  const Eigen::MatrixXd noise = Eigen::MatrixXd((sem.noise_vars() + added).asDiagonal());
  GaussianDist g;
  g.cov = solve_covariance(kept, noise);
  g.mean = solve_mean(kept, sem.noise_means() + cut * obs.mean);
  return g;
}

double gaussian_hellinger_sq(const GaussianDist& p, const GaussianDist& q) {
  check_pair(p, q);
  if (p.dim() == 0) return 0.0;
  const Eigen::MatrixXd avg = 0.5 * (p.cov + q.cov);
  const Eigen::VectorXd delta = p.mean - q.mean;
  const double lp = log_det_spd(p.cov, "covariance");
  const double lq = log_det_spd(q.cov, "covariance");
  const double la = log_det_spd(avg, "average covariance");
  const double maha = delta.dot(avg.llt().solve(delta));
  const double log_bc = 0.25 * lp + 0.25 * lq - 0.5 * la - 0.125 * maha;
  return std::clamp(-std::expm1(log_bc), 0.0, 1.0) + 0.0;
}

double gaussian_kl(const GaussianDist& p, const GaussianDist& q) {
  check_pair(p, q);
  const int n = p.dim();
  if (n == 0) return 0.0;
  const Eigen::LLT<Eigen::MatrixXd> lq(q.cov);
  const Eigen::VectorXd delta = p.mean - q.mean;
  const double trace = lq.solve(p.cov).trace();
  const double maha = delta.dot(lq.solve(delta));
  const double kl = 0.5 * (log_det_spd(q.cov, "covariance") - log_det_spd(p.cov, "covariance") - n + trace + maha);
  return std::max(kl, 0.0);
}

InfluenceResult sem_kpartite_aci(const LinearSem& sem, const EdgeSet& s, SemFamily family, SemGrouping grouping) {
  if (!sem.partition()) throw ValidationError("k-partite ACI needs a model partition");
  check_sem_edges(sem, s);
  InfluenceResult r;
  r.edge_count = s.size();
  r.kind = family == SemFamily::kl && grouping == SemGrouping::per_target ? DecompositionKind::exact_sum
                                                                          : DecompositionKind::local_terms;
  if (s.empty()) return r;

  std::vector<EdgeSet> groups;
  if (grouping == SemGrouping::per_edge) {
    for (const Edge& e : s) groups.push_back({e});
  } else {
    for (int t : targets(s)) {
      EdgeSet g;
      for (const Edge& e : s)
        if (e.second == t) g.insert(e);
      groups.push_back(std::move(g));
    }
  }
  const GaussianDist obs = observational_cov(sem);
  const KPartition& part = *sem.partition();
  for (const EdgeSet& g : groups) {
    const GaussianDist cut = intervened_cov(sem, g);
    const double v = family == SemFamily::kl ? gaussian_kl(obs, cut) : gaussian_hellinger_sq(obs, cut);
    const int t = g.begin()->second;
    r.per_target[t] += v;
    r.per_layer[part.layer[t]] += v;
    r.total += v;
  }
  r.aci = r.total / static_cast<double>(s.size());
  return r;
}

}  // namespace causent
