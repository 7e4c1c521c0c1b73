#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "banditkit/rng.hpp"

namespace banditkit {

enum class Family { Bernoulli, Gaussian };

std::string_view to_string(Family family);
Family family_from_string(std::string_view name);

/// Mean-parametrized reward law. Gaussian arms carry their known variance.
struct ArmDistribution {
  Family kind = Family::Bernoulli;
  double mean = 0.5;
  double sigma2 = 0.0;  // Gaussian only

  static ArmDistribution bernoulli(double mean);
  static ArmDistribution gaussian(double mean, double sigma2);

  /// Throws std::invalid_argument if the parameters leave the family.
  void validate() const;
};

/// Mean range [mu_minus, mu_plus] and variance bound V of a model's family.
struct FamilyBounds {
  double mu_minus = 0.0;
  double mu_plus = 1.0;
  double variance = 0.25;
};

/// Variance bound giving kl(m, m') >= (m - m')^2 / (2V): 1/4 for Bernoulli,
/// sigma^2 for Gaussian.
double default_variance(Family kind, double sigma2 = 0.0);

struct ModelStats {
  double best_mean = 0.0;
  std::vector<double> gaps;
};

class BanditModel {
 public:
  /// Uses default family bounds. Throws std::invalid_argument on K < 2,
  /// mixed families, mixed Gaussian variances or invalid arms.
  BanditModel(std::string id, std::vector<ArmDistribution> arms);
  BanditModel(std::string id, std::vector<ArmDistribution> arms,
              FamilyBounds bounds);

  static BanditModel bernoulli(std::string id, const std::vector<double>& means);
  static BanditModel gaussian(std::string id, const std::vector<double>& means,
                              double sigma2);

  const std::string& id() const { return id_; }
  const std::vector<ArmDistribution>& arms() const { return arms_; }
  const FamilyBounds& bounds() const { return bounds_; }
  std::size_t num_arms() const { return arms_.size(); }
  Family family() const { return arms_.front().kind; }
  double sigma2() const { return arms_.front().sigma2; }
  std::vector<double> means() const;

 private:
  void validate() const;

  std::string id_;
  std::vector<ArmDistribution> arms_;
  FamilyBounds bounds_;
};

/// Default bounds: Bernoulli (0, 1, 1/4); Gaussian uses the hull of the arm
/// means (widened by sigma when degenerate) and V = sigma^2.
FamilyBounds default_bounds(const std::vector<ArmDistribution>& arms);

/// kl(mu, mu') between two members of the family.
///
/// Bernoulli: mu may sit on {0, 1} (0 log 0 = 0); mu' on {0, 1} yields
/// +infinity unless mu == mu'. Throws std::domain_error for arguments
/// outside [0, 1] or a non-positive Gaussian variance.
double kl_div(Family kind, double mu, double mu_prime, double sigma2 = 0.0);

/// kl(mu, mu') if mu <= mu', else 0.
double kl_plus(Family kind, double mu, double mu_prime, double sigma2 = 0.0);

inline double kl_div(const ArmDistribution& family_of, double mu,
                     double mu_prime) {
  return kl_div(family_of.kind, mu, mu_prime, family_of.sigma2);
}

/// One reward draw. Advances `rng`.
double sample(const ArmDistribution& arm, Rng& rng);

ModelStats model_stats(const BanditModel& model);

}  // namespace banditkit
