#include "banditkit/exp_family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace banditkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// x * log(x / y) with 0 log 0 = 0.
double xlogxy(double x, double y) {
  if (x == 0.0) return 0.0;
  return x * std::log(x / y);
}

double bernoulli_kl(double p, double q) {
  if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0)) {
    throw std::domain_error("bernoulli kl: arguments must lie in [0, 1]");
  }
  if (p == q) return 0.0;
  if (q == 0.0 || q == 1.0) return kInf;
  const double value = xlogxy(p, q) + xlogxy(1.0 - p, 1.0 - q);
  return value > 0.0 ? value : 0.0;
}

}  // namespace

std::string_view to_string(Family family) {
  return family == Family::Bernoulli ? "bernoulli" : "gaussian";
}

Family family_from_string(std::string_view name) {
  if (name == "bernoulli") return Family::Bernoulli;
  if (name == "gaussian") return Family::Gaussian;
  throw std::invalid_argument("unknown arm family '" + std::string(name) +
                              "' (expected bernoulli or gaussian)");
}

ArmDistribution ArmDistribution::bernoulli(double mean) {
  ArmDistribution arm{Family::Bernoulli, mean, 0.0};
  arm.validate();
  return arm;
}

ArmDistribution ArmDistribution::gaussian(double mean, double sigma2) {
  ArmDistribution arm{Family::Gaussian, mean, sigma2};
  arm.validate();
  return arm;
}

void ArmDistribution::validate() const {
  if (!std::isfinite(mean)) {
    throw std::invalid_argument("arm mean must be finite");
  }
  if (kind == Family::Bernoulli) {
    if (!(mean > 0.0 && mean < 1.0)) {
      throw std::invalid_argument("bernoulli arm mean must lie in (0, 1)");
    }
  } else if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw std::invalid_argument("gaussian arm needs a finite sigma2 > 0");
  }
}

double default_variance(Family kind, double sigma2) {
  return kind == Family::Bernoulli ? 0.25 : sigma2;
}

FamilyBounds default_bounds(const std::vector<ArmDistribution>& arms) {
  if (arms.empty()) throw std::invalid_argument("model has no arms");
  const Family kind = arms.front().kind;
  if (kind == Family::Bernoulli) return {0.0, 1.0, 0.25};
  auto [lo, hi] = std::minmax_element(
      arms.begin(), arms.end(),
      [](const auto& a, const auto& b) { return a.mean < b.mean; });
  FamilyBounds bounds{lo->mean, hi->mean, arms.front().sigma2};
  if (!(bounds.mu_minus < bounds.mu_plus)) {
    const double sigma = std::sqrt(arms.front().sigma2);
    bounds.mu_minus -= sigma;
    bounds.mu_plus += sigma;
  }
  return bounds;
}

BanditModel::BanditModel(std::string id, std::vector<ArmDistribution> arms)
    : id_(std::move(id)), arms_(std::move(arms)) {
  bounds_ = default_bounds(arms_);
  validate();
}

BanditModel::BanditModel(std::string id, std::vector<ArmDistribution> arms,
                         FamilyBounds bounds)
    : id_(std::move(id)), arms_(std::move(arms)), bounds_(bounds) {
  validate();
}

BanditModel BanditModel::bernoulli(std::string id,
                                   const std::vector<double>& means) {
  std::vector<ArmDistribution> arms;
  arms.reserve(means.size());
  for (double m : means) arms.push_back(ArmDistribution::bernoulli(m));
  return BanditModel(std::move(id), std::move(arms));
}

BanditModel BanditModel::gaussian(std::string id,
                                  const std::vector<double>& means,
                                  double sigma2) {
  std::vector<ArmDistribution> arms;
  arms.reserve(means.size());
  for (double m : means) arms.push_back(ArmDistribution::gaussian(m, sigma2));
  return BanditModel(std::move(id), std::move(arms));
}

std::vector<double> BanditModel::means() const {
  std::vector<double> out;
  out.reserve(arms_.size());
  for (const auto& arm : arms_) out.push_back(arm.mean);
  return out;
}

void BanditModel::validate() const {
  if (arms_.size() < 2) {
    throw std::invalid_argument("a bandit model needs at least two arms");
  }
  const auto& first = arms_.front();
  for (const auto& arm : arms_) {
    arm.validate();
    if (arm.kind != first.kind) {
      throw std::invalid_argument("all arms of a model must share a family");
    }
    if (arm.kind == Family::Gaussian && arm.sigma2 != first.sigma2) {
      throw std::invalid_argument("gaussian arms must share sigma2");
    }
    if (arm.mean < bounds_.mu_minus || arm.mean > bounds_.mu_plus) {
      throw std::invalid_argument("arm mean outside [mu_minus, mu_plus]");
    }
  }
  if (!(bounds_.mu_minus < bounds_.mu_plus) || !(bounds_.variance > 0.0)) {
    throw std::invalid_argument(
        "family bounds need mu_minus < mu_plus and V > 0");
  }
}

double kl_div(Family kind, double mu, double mu_prime, double sigma2) {
  if (kind == Family::Bernoulli) return bernoulli_kl(mu, mu_prime);
  if (!(sigma2 > 0.0)) {
    throw std::domain_error("gaussian kl needs sigma2 > 0");
  }
  const double d = mu - mu_prime;
  return d * d / (2.0 * sigma2);
}

double kl_plus(Family kind, double mu, double mu_prime, double sigma2) {
  const double value = kl_div(kind, mu, mu_prime, sigma2);
  return mu <= mu_prime ? value : 0.0;
}

double sample(const ArmDistribution& arm, Rng& rng) {
  if (arm.kind == Family::Bernoulli) {
    return rng.uniform() < arm.mean ? 1.0 : 0.0;
  }
  return arm.mean + std::sqrt(arm.sigma2) * rng.normal();
}

ModelStats model_stats(const BanditModel& model) {
  ModelStats stats;
  const auto means = model.means();
  stats.best_mean = *std::max_element(means.begin(), means.end());
  stats.gaps.reserve(means.size());
  for (double m : means) stats.gaps.push_back(stats.best_mean - m);
  return stats;
}

}  // namespace banditkit
