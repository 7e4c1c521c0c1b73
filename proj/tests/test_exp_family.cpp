#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "banditkit/exp_family.hpp"
#include "banditkit/rng.hpp"

using namespace banditkit;

namespace {

std::vector<double> interior_grid(double lo, double hi, int n = 200) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(lo + (hi - lo) * (i + 0.5) / n);
  return g;
}

}  // namespace

TEST_CASE("kl_div examples") {
  CHECK(kl_div(Family::Bernoulli, 0.5, 0.5) == 0.0);
  CHECK(kl_div(Family::Gaussian, 0.0, 2.0, 1.0) == doctest::Approx(2.0));
  // mpmath: 0.1 ln(1/9) + 0.9 ln 9
  CHECK(kl_div(Family::Bernoulli, 0.1, 0.9) ==
        doctest::Approx(1.7577796618689755).epsilon(1e-12));
}

TEST_CASE("bernoulli boundary conventions") {
  CHECK(kl_div(Family::Bernoulli, 0.0, 0.3) ==
        doctest::Approx(-std::log(0.7)).epsilon(1e-14));
  CHECK(kl_div(Family::Bernoulli, 1.0, 0.3) ==
        doctest::Approx(-std::log(0.3)).epsilon(1e-14));
  CHECK(std::isinf(kl_div(Family::Bernoulli, 0.3, 1.0)));
  CHECK(std::isinf(kl_div(Family::Bernoulli, 0.3, 0.0)));
  CHECK(std::isinf(kl_div(Family::Bernoulli, 0.0, 1.0)));
  CHECK(kl_div(Family::Bernoulli, 1.0, 1.0) == 0.0);
  CHECK_THROWS_AS(kl_div(Family::Bernoulli, 1.2, 0.5), std::domain_error);
  CHECK_THROWS_AS(kl_div(Family::Bernoulli, 0.5, -0.1), std::domain_error);
  CHECK_THROWS_AS(kl_div(Family::Gaussian, 0.0, 1.0, 0.0), std::domain_error);
}

TEST_CASE("kl_plus examples and definition") {
  CHECK(kl_plus(Family::Bernoulli, 0.9, 0.1) == 0.0);
  CHECK(kl_plus(Family::Gaussian, 0.0, 2.0, 1.0) == doctest::Approx(2.0));
  CHECK(kl_plus(Family::Bernoulli, 0.1, 0.9) ==
        doctest::Approx(1.7577796618689755).epsilon(1e-12));
  for (double p : interior_grid(0.0, 1.0, 40)) {
    for (double q : interior_grid(0.0, 1.0, 40)) {
      const double expected = p <= q ? kl_div(Family::Bernoulli, p, q) : 0.0;
      CHECK(kl_plus(Family::Bernoulli, p, q) == expected);
    }
  }
}

TEST_CASE("kl vanishes on the diagonal and is unimodal in its second argument") {
  const auto grid = interior_grid(0.0, 1.0);
  for (double mu : grid) {
    CHECK(kl_div(Family::Bernoulli, mu, mu) == 0.0);
    CHECK(kl_div(Family::Gaussian, mu, mu, 2.0) == 0.0);
  }
  for (double mu : grid) {
    double prev = 0.0;
    for (double q : grid) {
      if (q <= mu) continue;
      const double v = kl_div(Family::Bernoulli, mu, q);
      CHECK(v > prev);
      prev = v;
    }
    prev = 0.0;
    for (auto it = grid.rbegin(); it != grid.rend(); ++it) {
      if (*it >= mu) continue;
      const double v = kl_div(Family::Bernoulli, mu, *it);
      CHECK(v > prev);
      prev = v;
    }
  }
  const auto g = interior_grid(-3.0, 3.0);
  for (double mu : g) {
    double prev = 0.0;
    for (double q : g) {
      if (q <= mu) continue;
      const double v = kl_div(Family::Gaussian, mu, q, 0.7);
      CHECK(v > prev);
      prev = v;
    }
  }
}

TEST_CASE("pinsker-like lower bound with default variance") {
  const auto grid = interior_grid(0.0, 1.0);
  for (double p : grid) {
    for (double q : grid) {
      const double quad = (p - q) * (p - q) / (2.0 * 0.25);
      CHECK(kl_div(Family::Bernoulli, p, q) - quad >= -1e-12);
    }
  }
}

TEST_CASE("sampling: moments and determinism") {
  {
    Rng rng(11);
    const auto arm = ArmDistribution::bernoulli(0.9);
    double sum = 0.0;
    for (int i = 0; i < 100'000; ++i) {
      const double y = sample(arm, rng);
      REQUIRE((y == 0.0 || y == 1.0));
      sum += y;
    }
    CHECK(std::abs(sum / 1e5 - 0.9) < 0.01);
  }
  {
    Rng rng(12);
    const auto arm = ArmDistribution::gaussian(0.0, 1.0);
    double s = 0.0, ss = 0.0;
    for (int i = 0; i < 100'000; ++i) {
      const double y = sample(arm, rng);
      s += y;
      ss += y * y;
    }
    const double mean = s / 1e5;
    CHECK(std::abs(ss / 1e5 - mean * mean - 1.0) < 0.05);
  }
  {
    const auto arm = ArmDistribution::gaussian(0.3, 2.0);
    Rng a(99), b(99);
    for (int i = 0; i < 100; ++i) CHECK(sample(arm, a) == sample(arm, b));
    const auto bern = ArmDistribution::bernoulli(0.4);
    Rng c(5), d(5);
    for (int i = 0; i < 100; ++i) CHECK(sample(bern, c) == sample(bern, d));
  }
}

TEST_CASE("model_stats examples") {
  auto s = model_stats(BanditModel::bernoulli("m", {0.5, 0.5}));
  CHECK(s.best_mean == 0.5);
  CHECK(s.gaps == std::vector<double>{0.0, 0.0});

  s = model_stats(BanditModel::bernoulli("m", {0.9, 0.8}));
  CHECK(s.best_mean == 0.9);
  CHECK(s.gaps[0] == 0.0);
  CHECK(s.gaps[1] == doctest::Approx(0.1));

  s = model_stats(BanditModel::bernoulli("m", {0.1, 0.3, 0.2}));
  CHECK(s.best_mean == 0.3);
  CHECK(s.gaps[0] == doctest::Approx(0.2));
  CHECK(s.gaps[1] == 0.0);
  CHECK(s.gaps[2] == doctest::Approx(0.1));
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(BanditModel::bernoulli("m", {0.5}), std::invalid_argument);
  CHECK_THROWS_AS(BanditModel::bernoulli("m", {0.5, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(BanditModel::gaussian("m", {0.0, 1.0}, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(BanditModel("m", {ArmDistribution::bernoulli(0.5),
                                    ArmDistribution::gaussian(0.5, 1.0)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(BanditModel("m", {ArmDistribution::gaussian(0.5, 1.0),
                                    ArmDistribution::gaussian(0.5, 2.0)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(BanditModel("m", {ArmDistribution::bernoulli(0.5),
                                    ArmDistribution::bernoulli(0.6)},
                              FamilyBounds{0.0, 0.55, 0.25}),
                  std::invalid_argument);

  const auto b = BanditModel::bernoulli("b", {0.2, 0.7});
  CHECK(b.bounds().variance == 0.25);
  CHECK(b.bounds().mu_minus == 0.0);
  CHECK(b.bounds().mu_plus == 1.0);

  const auto g = BanditModel::gaussian("g", {1.0, 1.0}, 4.0);
  CHECK(g.bounds().variance == 4.0);
  CHECK(g.bounds().mu_minus == -1.0);
  CHECK(g.bounds().mu_plus == 3.0);
}
