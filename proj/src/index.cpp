#include "banditkit/index.hpp"

#include <cmath>
#include <stdexcept>

namespace banditkit {

ExplorationSchedule::ExplorationSchedule(std::int64_t horizon,
                                         std::int64_t num_arms)
    : horizon(horizon), num_arms(num_arms) {
  if (num_arms < 2) {
    throw std::invalid_argument("exploration schedule needs K >= 2");
  }
  if (horizon < num_arms) {
    throw std::invalid_argument("exploration schedule needs T >= K");
  }
}

double log_plus(double x) { return x > 1.0 ? std::log(x) : 0.0; }

double exploration_g(std::int64_t n, const ExplorationSchedule& schedule) {
  if (n < 1) throw std::invalid_argument("exploration_g needs n >= 1");
  // x = T/(Kn) = 1 + excess/(Kn); log1p keeps the kink at x = 1 exact.
  const double kn = static_cast<double>(schedule.num_arms) *
                    static_cast<double>(n);
  const double excess = static_cast<double>(schedule.horizon) - kn;
  if (excess <= 0.0) return 0.0;
  const double log_x = std::log1p(excess / kn);
  // log(x (log^2 x + 1)) = log x + log1p(log^2 x), both terms >= 0 here.
  return log_x + std::log1p(log_x * log_x);
}

namespace {

double bisect_upper(Family kind, double mu_hat, double threshold,
                    double sigma2, double lo, double hi) {
  for (int it = 0; it < kIndexMaxIterations && hi - lo > kIndexTolerance;
       ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (kl_div(kind, mu_hat, mid, sigma2) <= threshold) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace

double invert_kl_upper(Family kind, double mu_hat, double threshold,
                       double sigma2) {
  if (!std::isfinite(threshold) || threshold < 0.0) {
    throw std::invalid_argument(
        "invert_kl_upper: threshold must be finite and >= 0");
  }
  if (!std::isfinite(mu_hat)) {
    throw std::invalid_argument("invert_kl_upper: mu_hat must be finite");
  }
  if (threshold == 0.0) return mu_hat;

  if (kind == Family::Bernoulli) {
    if (!(mu_hat >= 0.0 && mu_hat <= 1.0)) {
      throw std::invalid_argument(
          "invert_kl_upper: bernoulli mu_hat must lie in [0, 1]");
    }
    if (mu_hat >= kBernoulliUpperBracket) return mu_hat;
    if (kl_div(kind, mu_hat, kBernoulliUpperBracket) <= threshold) {
      return kBernoulliUpperBracket;
    }
    return bisect_upper(kind, mu_hat, threshold, 0.0, mu_hat,
                        kBernoulliUpperBracket);
  }

  if (!(sigma2 > 0.0)) {
    throw std::invalid_argument("invert_kl_upper: gaussian needs sigma2 > 0");
  }
  double width = std::sqrt(sigma2);
  while (kl_div(kind, mu_hat, mu_hat + width, sigma2) <= threshold) {
    width *= 2.0;
  }
  return bisect_upper(kind, mu_hat, threshold, sigma2, mu_hat,
                      mu_hat + width);
}

double ucb_index(Family kind, double mu_hat, std::int64_t n,
                 const ExplorationSchedule& schedule, double sigma2) {
  const double threshold =
      exploration_g(n, schedule) / static_cast<double>(n);
  if (kind == Family::Gaussian) {
    if (!(sigma2 > 0.0)) {
      throw std::invalid_argument("ucb_index: gaussian needs sigma2 > 0");
    }
    if (!std::isfinite(mu_hat)) {
      throw std::invalid_argument("ucb_index: mu_hat must be finite");
    }
    return mu_hat + std::sqrt(2.0 * sigma2 * threshold);
  }
  return invert_kl_upper(kind, mu_hat, threshold, sigma2);
}

}  // namespace banditkit
