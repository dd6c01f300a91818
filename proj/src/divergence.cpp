#include "causent/divergence.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "causent/error.hpp"

namespace causent {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kChainTol = 1e-12;

void check_pair(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw ValidationError("distributions have different sizes");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] >= 0.0) || !(q[i] >= 0.0)) {
      throw ValidationError("distribution entry " + std::to_string(i) + " is negative or NaN");
    }
  }
}

void check_scopes(const JointTable& p, const JointTable& q) {
  if (p.scope != q.scope || p.cards != q.cards) throw ValidationError("tables have different scopes");
}

std::string format_param(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// p ((p/q)^lambda - 1) with the zero conventions.
double power_term(double lambda, double p, double q) {
  if (p == 0.0) {
    if (q == 0.0 || lambda > -1.0) return 0.0;
    return kInf;
  }
  if (q == 0.0) return lambda > 0.0 ? kInf : -p;
  return p * std::expm1(lambda * std::log(p / q));
}

}  // namespace

DivergenceSpec DivergenceSpec::kl() { return {Family::kl, 0.0}; }
DivergenceSpec DivergenceSpec::hellinger_sq() { return {Family::hellinger_sq, 0.0}; }
DivergenceSpec DivergenceSpec::total_variation() { return {Family::total_variation, 0.0}; }
DivergenceSpec DivergenceSpec::chi_sq() { return {Family::chi_sq, 0.0}; }

DivergenceSpec DivergenceSpec::power(double lambda) {
  if (!std::isfinite(lambda)) throw ValidationError("power divergence index must be finite");
  return {Family::power, lambda};
}

DivergenceSpec DivergenceSpec::directed(double beta) {
  if (!(beta > 0.0) || beta == 1.0 || !std::isfinite(beta)) {
    throw ValidationError("directed divergence needs beta > 0 and beta != 1; beta = 1 is the KL limit");
  }
  return {Family::directed, beta};
}

DivergenceSpec DivergenceSpec::custom(std::function<double(double)> phi, double slope_at_infinity,
                                      std::string name) {
  if (!phi) throw ValidationError("custom divergence needs a generator");
  if (std::abs(phi(1.0)) > 1e-12) throw ValidationError("custom generator must satisfy phi(1) = 0");
  DivergenceSpec s(Family::custom, 0.0);
  s.custom_phi_ = std::move(phi);
  s.custom_slope_ = slope_at_infinity;
  s.custom_name_ = std::move(name);
  return s;
}

std::string DivergenceSpec::name() const {
  switch (family_) {
    case Family::kl: return "kl";
    case Family::hellinger_sq: return "h2";
    case Family::total_variation: return "tv";
    case Family::chi_sq: return "chi2";
    case Family::power: return "power(" + format_param(param_) + ")";
    case Family::directed: return "directed(" + format_param(param_) + ")";
    case Family::custom: return custom_name_;
  }
  return "";
}

double DivergenceSpec::phi(double t) const {
  if (t < 0.0) throw DomainError("generator argument must be non-negative");
  switch (family_) {
    case Family::kl: return t == 0.0 ? 0.0 : t * std::log(t);
    case Family::hellinger_sq: {
      const double r = std::sqrt(t) - 1.0;
      return 0.5 * r * r;
    }
    case Family::total_variation: return 0.5 * std::abs(t - 1.0);
    case Family::chi_sq: return (t - 1.0) * (t - 1.0);
    case Family::power: return power_phi(param_, t);
    case Family::directed: return (std::pow(t, param_) - 1.0) / (std::exp2(param_ - 1.0) - 1.0);
    case Family::custom: return custom_phi_(t);
  }
  return 0.0;
}

double DivergenceSpec::phi_at_zero() const { return phi(0.0); }

double DivergenceSpec::slope_at_infinity() const {
  switch (family_) {
    case Family::kl:
    case Family::chi_sq: return kInf;
    case Family::hellinger_sq:
    case Family::total_variation: return 0.5;
    case Family::power: return param_ > 0.0 ? kInf : (param_ == 0.0 ? kInf : -1.0 / param_);
    case Family::directed: return param_ > 1.0 ? kInf : 0.0;
    case Family::custom: return custom_slope_;
  }
  return kInf;
}

double DivergenceSpec::term(double p, double q) const {
  if (p == 0.0 && q == 0.0) return 0.0;
  if (q == 0.0) {
    const double s = slope_at_infinity();
    return std::isinf(s) ? kInf : p * s;
  }
  switch (family_) {
    case Family::kl: return p == 0.0 ? 0.0 : p * std::log(p / q);
    case Family::hellinger_sq: {
      const double r = std::sqrt(p) - std::sqrt(q);
      return 0.5 * r * r;
    }
    case Family::total_variation: return 0.5 * std::abs(p - q);
    case Family::chi_sq: return (p - q) * (p - q) / q;
    default: break;
  }
  if (p == 0.0) {
    const double z = phi_at_zero();
    return std::isinf(z) ? kInf : q * z;
  }
  return q * phi(p / q);
}

DivergenceSpec parse_family(std::string_view name, double parameter) {
  if (name == "kl") return DivergenceSpec::kl();
  if (name == "h2" || name == "hellinger") return DivergenceSpec::hellinger_sq();
  if (name == "tv") return DivergenceSpec::total_variation();
  if (name == "chi2") return DivergenceSpec::chi_sq();
  if (name == "power") return DivergenceSpec::power(parameter);
  if (name == "directed") return DivergenceSpec::directed(parameter);
  throw ValidationError("unknown divergence family '" + std::string(name) +
                        "' (expected kl, h2, tv, chi2, power or directed)");
}

double phi_divergence(const DivergenceSpec& spec, std::span<const double> p, std::span<const double> q) {
  check_pair(p, q);
  if (spec.family() == Family::power) return power_divergence(spec.parameter(), p, q);
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    total += spec.term(p[i], q[i]);
    if (std::isinf(total)) return kInf;
  }
  return std::max(total, 0.0);
}

double phi_divergence(const DivergenceSpec& spec, const JointTable& p, const JointTable& q) {
  check_scopes(p, q);
  return phi_divergence(spec, p.probs, q.probs);
}

double power_divergence(double lambda, std::span<const double> p, std::span<const double> q) {
  check_pair(p, q);
  double total = 0.0;
  if (lambda == 0.0) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] == 0.0) continue;
      if (q[i] == 0.0) return kInf;
      total += p[i] * std::log(p[i] / q[i]);
    }
    return std::max(total, 0.0);
  }
  if (lambda == -1.0) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (q[i] == 0.0) continue;
      if (p[i] == 0.0) return kInf;
      total += q[i] * std::log(q[i] / p[i]);
    }
    return std::max(total, 0.0);
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    total += power_term(lambda, p[i], q[i]);
    if (std::isinf(total)) return kInf;
  }
  return std::max(total / (lambda * (lambda + 1.0)), 0.0);
}

double directed_divergence(double beta, std::span<const double> p, std::span<const double> q) {
  if (beta == 1.0) throw ValidationError("directed divergence is undefined at beta = 1; use KL");
  check_pair(p, q);
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0 && q[i] == 0.0) continue;
    s += std::pow(p[i], beta) * std::pow(q[i], 1.0 - beta);
  }
  const double denom = std::exp2(beta - 1.0) - 1.0;
  if (std::isinf(s)) return denom > 0.0 ? kInf : -kInf;
  return (s - 1.0) / denom;
}

double power_phi(double lambda, double t) {
  if (t < 0.0) throw DomainError("generator argument must be non-negative");
  if (lambda == 0.0) return t == 0.0 ? 1.0 : t * std::log(t) - t + 1.0;
  if (lambda == -1.0) return t == 0.0 ? kInf : -std::log(t) + t - 1.0;
  if (t == 0.0) return lambda > -1.0 ? 1.0 / (lambda + 1.0) : kInf;
  return (std::pow(t, lambda + 1.0) - t - lambda * (t - 1.0)) / (lambda * (lambda + 1.0));
}

std::optional<std::string> power_divergence_label(double lambda) {
  // Labels follow the conventional table, which puts the likelihood-ratio
  // statistic at -1 even though Sum p ln(p/q) is the lambda -> 0 limit.
  if (lambda == 1.0) return "chi2-test (Pearson)";
  if (lambda == -2.0) return "Neyman-modified chi2-test";
  if (lambda == -1.0) return "loglikelihood ratio statistic";
  if (lambda == -0.5) return "Freeman-Tukey statistic";
  return std::nullopt;
}

InequalityChain inequality_chain(std::span<const double> p, std::span<const double> q) {
  InequalityChain c;
  c.tv = phi_divergence(DivergenceSpec::total_variation(), p, q);
  c.hellinger_dist = std::sqrt(phi_divergence(DivergenceSpec::hellinger_sq(), p, q));
  c.sqrt2_hellinger = std::sqrt(2.0) * c.hellinger_dist;
  c.sqrt_kl = std::sqrt(phi_divergence(DivergenceSpec::kl(), p, q));
  c.holds = c.tv <= c.sqrt2_hellinger + kChainTol && c.sqrt2_hellinger <= c.sqrt_kl + kChainTol;
  return c;
}

ClosenessReport closeness(std::span<const double> p, std::span<const double> q, double epsilon) {
  check_pair(p, q);
  if (!(epsilon >= 0.0)) throw ValidationError("epsilon must be non-negative");
  ClosenessReport r;
  r.epsilon = epsilon;
  double worst_gap = 0.0;
  bool first = true;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0 && q[i] == 0.0) continue;
    const double ratio = q[i] == 0.0 ? kInf : p[i] / q[i];
    if (first) {
      r.max_ratio = r.min_ratio = ratio;
      first = false;
    }
    r.max_ratio = std::max(r.max_ratio, ratio);
    r.min_ratio = std::min(r.min_ratio, ratio);
    const double gap = std::abs(ratio - 1.0);
    if (gap > worst_gap) {
      worst_gap = gap;
      r.worst_index = i;
      r.worst_ratio = ratio;
    }
  }
  r.one_sided = r.max_ratio < 1.0 + epsilon;
  r.two_sided = r.one_sided && r.min_ratio > 1.0 - epsilon;
  return r;
}

}  // namespace causent
