#pragma once

// phi-divergences D(P || Q) = sum q phi(p / q) in nats, with the
// power and directed families and epsilon-closeness.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "causent/discrete_net.hpp"

namespace causent {

enum class Family { kl, hellinger_sq, total_variation, chi_sq, power, directed, custom };

class DivergenceSpec {
 public:
  static DivergenceSpec kl();
  static DivergenceSpec hellinger_sq();
  static DivergenceSpec total_variation();
  static DivergenceSpec chi_sq();
  // lambda = 0 and lambda = -1 use the limit generators.
  static DivergenceSpec power(double lambda);
  // beta > 0 and beta != 1, so that the generator is convex.
  static DivergenceSpec directed(double beta);
  // slope_at_infinity is lim phi(t) / t as t grows; phi(0) is taken from phi.
  static DivergenceSpec custom(std::function<double(double)> phi, double slope_at_infinity,
                               std::string name = "custom");

  Family family() const { return family_; }
  double parameter() const { return param_; }
  std::string name() const;

  double phi(double t) const;
  double phi_at_zero() const;
  double slope_at_infinity() const;
  // q * phi(p / q) with the zero conventions.
  double term(double p, double q) const;

 private:
  DivergenceSpec(Family f, double param) : family_(f), param_(param) {}

  Family family_ = Family::kl;
  double param_ = 0.0;
  std::function<double(double)> custom_phi_;
  double custom_slope_ = 0.0;
  std::string custom_name_;
};

// Parses kl, h2, tv, chi2, power, directed; the parameter feeds power and
// directed.
DivergenceSpec parse_family(std::string_view name, double parameter);

double phi_divergence(const DivergenceSpec& spec, std::span<const double> p, std::span<const double> q);
double phi_divergence(const DivergenceSpec& spec, const JointTable& p, const JointTable& q);

// Cressie-Read I^lambda(p || q).
double power_divergence(double lambda, std::span<const double> p, std::span<const double> q);

// (sum p^beta q^(1-beta) - 1) / (2^(beta-1) - 1), beta != 1.
double directed_divergence(double beta, std::span<const double> p, std::span<const double> q);

// (t^(lambda+1) - t - lambda (t - 1)) / (lambda (lambda + 1)), with the
// limit forms at lambda = 0 and -1.
double power_phi(double lambda, double t);

// Conventional statistic name for a power-divergence index, if any.
std::optional<std::string> power_divergence_label(double lambda);

struct InequalityChain {
  double tv = 0.0;
  double hellinger_dist = 0.0;    // sqrt of squared Hellinger
  double sqrt2_hellinger = 0.0;
  double sqrt_kl = 0.0;
  bool holds = false;             // tv <= sqrt2_hellinger <= sqrt_kl
};

InequalityChain inequality_chain(std::span<const double> p, std::span<const double> q);

struct ClosenessReport {
  double epsilon = 0.0;
  bool one_sided = false;
  bool two_sided = false;
  std::size_t worst_index = 0;  // state whose ratio is furthest from 1
  double worst_ratio = 1.0;
  double max_ratio = 1.0;
  double min_ratio = 1.0;
};

// Ratios p_i / q_i over states where either is positive.
ClosenessReport closeness(std::span<const double> p, std::span<const double> q, double epsilon);

}  // namespace causent
