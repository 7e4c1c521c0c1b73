#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "banditkit/exp_family.hpp"
#include "banditkit/index.hpp"

using namespace banditkit;

namespace {

// Largest point of a uniform grid on [mu_hat, 1) with kl <= threshold.
double grid_scan_upper(double mu_hat, double threshold, int points) {
  double best = mu_hat;
  const double step = (1.0 - mu_hat) / points;
  for (int i = 0; i < points; ++i) {
    const double mu = mu_hat + step * i;
    if (kl_div(Family::Bernoulli, mu_hat, mu) <= threshold) best = mu;
  }
  return best;
}

}  // namespace

TEST_CASE("exploration_g examples") {
  CHECK(exploration_g(100, ExplorationSchedule(1000, 10)) == 0.0);
  CHECK(exploration_g(1, ExplorationSchedule(10, 10)) == 0.0);
  // mpmath: log(100 (log^2 100 + 1))
  CHECK(exploration_g(1, ExplorationSchedule(1000, 10)) ==
        doctest::Approx(7.7056044182850098).epsilon(1e-13));
  CHECK_THROWS_AS(exploration_g(0, ExplorationSchedule(1000, 10)),
                  std::invalid_argument);
  CHECK_THROWS_AS(ExplorationSchedule(5, 10), std::invalid_argument);
  CHECK_THROWS_AS(ExplorationSchedule(5, 1), std::invalid_argument);
}

TEST_CASE("exploration_g is non-negative, non-increasing, zero past T/K") {
  for (auto [t, k] : {std::pair{1000, 10}, std::pair{1001, 10},
                      std::pair{97, 3}, std::pair{100000, 2},
                      std::pair{12, 12}}) {
    const ExplorationSchedule s(t, k);
    double prev = exploration_g(1, s);
    for (std::int64_t n = 1; n <= 2 * t / k + 2; ++n) {
      const double g = exploration_g(n, s);
      CHECK(g >= 0.0);
      CHECK(g <= prev);
      if (static_cast<double>(n) >= static_cast<double>(t) / k) CHECK(g == 0.0);
      else CHECK(g > 0.0);
      prev = g;
    }
  }
}

TEST_CASE("exploration_g near the log_+ kink") {
  // T/(Kn) = 1 + 1/(Kn): g ~ x + x^2 for x = log1p(1/(Kn)).
  const ExplorationSchedule s(1'000'001, 10);
  const double x = std::log1p(1.0 / 1'000'000.0);
  CHECK(exploration_g(100'000, s) ==
        doctest::Approx(x + std::log1p(x * x)).epsilon(1e-12));
}

TEST_CASE("invert_kl_upper examples") {
  CHECK(invert_kl_upper(Family::Bernoulli, 0.37, 0.0) == 0.37);
  CHECK(invert_kl_upper(Family::Gaussian, -1.5, 0.0, 2.0) == -1.5);
  // kl(0, mu) = -log(1 - mu) = 1  =>  mu = 1 - 1/e
  CHECK(std::abs(invert_kl_upper(Family::Bernoulli, 0.0, 1.0) -
                 (1.0 - std::exp(-1.0))) < 1e-8);
  CHECK(std::abs(invert_kl_upper(Family::Gaussian, 0.0, 2.0, 1.0) - 2.0) < 1e-10);
  for (double t : {1e-6, 0.01, 0.3, 5.0, 100.0}) {
    for (double s2 : {0.01, 1.0, 9.0}) {
      CHECK(std::abs(invert_kl_upper(Family::Gaussian, 0.4, t, s2) -
                     (0.4 + std::sqrt(2.0 * s2 * t))) < 1e-10);
    }
  }
  const double oracle = grid_scan_upper(0.3, 0.05, 1'000'000);
  CHECK(std::abs(invert_kl_upper(Family::Bernoulli, 0.3, 0.05) - oracle) < 2e-6);

  CHECK(invert_kl_upper(Family::Bernoulli, 1.0, 0.5) == 1.0);
  CHECK(invert_kl_upper(Family::Bernoulli, 0.5, 1e6) == kBernoulliUpperBracket);
  CHECK_THROWS_AS(invert_kl_upper(Family::Bernoulli, 0.5, -1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(invert_kl_upper(Family::Bernoulli, 0.5, INFINITY),
                  std::invalid_argument);
  CHECK_THROWS_AS(invert_kl_upper(Family::Bernoulli, 1.5, 0.1),
                  std::invalid_argument);
}

TEST_CASE("ucb_index examples") {
  const ExplorationSchedule s(1000, 10);
  CHECK(ucb_index(Family::Bernoulli, 0.5, 100, s) == 0.5);
  const double thr = exploration_g(3, s) / 3.0;
  CHECK(ucb_index(Family::Gaussian, 0.0, 3, s, 1.0) ==
        doctest::Approx(std::sqrt(2.0 * thr)).epsilon(1e-15));
  CHECK(std::abs(ucb_index(Family::Bernoulli, 0.0, 3, s) -
                 (1.0 - std::exp(-thr))) < 1e-9);
  CHECK_THROWS_AS(ucb_index(Family::Bernoulli, -0.1, 3, s),
                  std::invalid_argument);
}

TEST_CASE("ucb_index properties on random inputs") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 400; ++trial) {
    const std::int64_t k = 2 + static_cast<std::int64_t>(unif(gen) * 8);
    const std::int64_t t = k * (1 + static_cast<std::int64_t>(unif(gen) * 5000));
    const ExplorationSchedule s(t, k);
    const double mu_hat = trial % 10 == 0 ? 0.0 : unif(gen);
    double prev = 2.0;
    for (std::int64_t n : {1, 2, 3, 5, 8, 20, 50, 200, 1000, 5000}) {
      const double u = ucb_index(Family::Bernoulli, mu_hat, n, s);
      const double budget = exploration_g(n, s) / static_cast<double>(n);
      CHECK(u >= mu_hat);
      CHECK(u <= prev);
      CHECK(kl_div(Family::Bernoulli, mu_hat, u) <= budget + 1e-9);
      if (u + 1e-6 < 1.0) {
        CHECK(kl_div(Family::Bernoulli, mu_hat, u + 1e-6) > budget);
      }
      if (budget == 0.0) CHECK(u == mu_hat);
      prev = u;

      const double ug = ucb_index(Family::Gaussian, mu_hat, n, s, 0.5);
      CHECK(std::abs(invert_kl_upper(Family::Gaussian, mu_hat, budget, 0.5) -
                     ug) < 1e-10);
    }
  }
}
