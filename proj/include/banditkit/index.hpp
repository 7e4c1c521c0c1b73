#pragma once

#include <cstdint>

#include "banditkit/exp_family.hpp"

namespace banditkit {

/// Horizon T and arm count K consumed by the kl-UCB++ exploration function.
struct ExplorationSchedule {
  std::int64_t horizon = 0;
  std::int64_t num_arms = 0;

  ExplorationSchedule() = default;
  /// Throws std::invalid_argument unless K >= 2 and T >= K.
  ExplorationSchedule(std::int64_t horizon, std::int64_t num_arms);
};

/// log_+(x) = max(log x, 0).
double log_plus(double x);

/// g(n) = log_+( T/(Kn) * (log_+^2(T/(Kn)) + 1) ).
/// Zero whenever n >= T/K. Throws std::invalid_argument for n < 1.
double exploration_g(std::int64_t n, const ExplorationSchedule& schedule);

/// Bisection settings for invert_kl_upper.
inline constexpr double kIndexTolerance = 1e-10;
inline constexpr int kIndexMaxIterations = 100;
inline constexpr double kBernoulliUpperBracket = 1.0 - 1e-15;

/// sup { mu >= mu_hat : kl(mu_hat, mu) <= threshold }, by bisection on the
/// increasing map mu -> kl(mu_hat, mu). The returned point is always
/// feasible. Bernoulli searches [mu_hat, 1 - 1e-15]; mu_hat == 1 returns 1.
/// Gaussian expands the bracket by doubling before bisecting.
///
/// Throws std::invalid_argument for a negative or non-finite threshold or a
/// mu_hat outside the family's empirical range.
double invert_kl_upper(Family kind, double mu_hat, double threshold,
                       double sigma2 = 0.0);

/// Upper confidence index U = sup { mu : kl(mu_hat, mu) <= g(n)/n }.
/// Gaussian uses the closed form mu_hat + sqrt(2 sigma^2 g(n)/n).
double ucb_index(Family kind, double mu_hat, std::int64_t n,
                 const ExplorationSchedule& schedule, double sigma2 = 0.0);

}  // namespace banditkit
