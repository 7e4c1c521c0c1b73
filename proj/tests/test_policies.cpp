#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "banditkit/policies.hpp"
#include "banditkit/rng.hpp"

using namespace banditkit;

namespace {

PolicyState state_with(std::int64_t horizon, const std::vector<double>& means,
                       const std::vector<std::int64_t>& counts,
                       Family kind = Family::Bernoulli, double sigma2 = 0.0) {
  PolicyState s(ExplorationSchedule(horizon, static_cast<std::int64_t>(means.size())),
                kind, sigma2);
  for (std::size_t a = 0; a < means.size(); ++a) {
    s.pull_counts[a] = counts[a];
    s.empirical_sums[a] = means[a] * static_cast<double>(counts[a]);
    s.round += counts[a];
  }
  return s;
}

}  // namespace

TEST_CASE("klucb++ initialization order") {
  KlUcbPlusPlus policy;
  policy.reset(ExplorationSchedule(100, 3), Family::Bernoulli, 0.0);
  CHECK(policy.select() == 0);
  policy.update(0, 0.0);
  CHECK(policy.select() == 1);
  policy.update(1, 0.0);
  CHECK(policy.select() == 2);
  policy.update(2, 0.0);
  CHECK(policy.state().round == 3);
  for (auto n : policy.state().pull_counts) CHECK(n == 1);
}

TEST_CASE("klucb++ argmax and tie-break") {
  CHECK(klucbpp_select(state_with(100, {0.9, 0.1}, {1, 1})) == 0);
  CHECK(klucbpp_select(state_with(100, {0.1, 0.9}, {1, 1})) == 1);
  CHECK(klucbpp_select(state_with(100, {0.4, 0.4}, {5, 5})) == 0);
  const std::vector<double> near_tie{1.0, 1.0 + 5e-13};
  CHECK(argmax_lowest(near_tie) == 0);
  const std::vector<double> clear{1.0, 1.0 + 1e-9};
  CHECK(argmax_lowest(clear) == 1);
}

TEST_CASE("policy_update examples") {
  PolicyState s(ExplorationSchedule(10, 3), Family::Bernoulli);
  policy_update(s, 0, 1.0);
  CHECK(s.pull_counts == std::vector<std::int64_t>{1, 0, 0});
  CHECK(s.empirical_mean(0) == 1.0);
  policy_update(s, 0, 0.0);
  CHECK(s.empirical_mean(0) == 0.5);
  CHECK_THROWS_AS(policy_update(s, 3, 1.0), std::out_of_range);

  PolicyState t(ExplorationSchedule(10, 4), Family::Bernoulli);
  for (std::size_t a = 0; a < 4; ++a) policy_update(t, a, 1.0);
  CHECK(t.round == 4);
  for (auto n : t.pull_counts) CHECK(n == 1);
}

TEST_CASE("baseline examples") {
  auto s = state_with(100, {1.0, 0.0}, {1, 1});
  CHECK(baseline_select(Baseline::Ucb1, s) == 0);

  // N_a >= T/K: MOSS bonus vanishes.
  auto m = state_with(100, {0.3, 0.6}, {50, 60});
  CHECK(baseline_index(Baseline::Moss, m, 0) == doctest::Approx(0.3));
  CHECK(baseline_index(Baseline::Moss, m, 1) == doctest::Approx(0.6));

  // mpmath: log 3 + 3 log(max(e, log 3)) = log 3 + 3
  CHECK(klucb_threshold(3, 1) == doctest::Approx(4.0986122886681098).epsilon(1e-14));
  CHECK(klucb_threshold(100, 4) ==
        doctest::Approx((std::log(100.0) + 3.0 * std::log(std::log(100.0))) / 4.0));
  auto k = state_with(3, {0.2, 0.5, 0.5}, {1, 1, 1});
  CHECK(baseline_index(Baseline::KlUcb, k, 0) ==
        doctest::Approx(invert_kl_upper(Family::Bernoulli, 0.2, 4.0986122886681098)));
  CHECK(baseline_select(Baseline::KlUcb, k) == 1);
  CHECK(baseline_select(Baseline::Ucb1, state_with(100, {0.2, 0.5}, {0, 0})) == 0);
}

TEST_CASE("policy name parsing") {
  CHECK(policy_kind_from_string("klucb++") == PolicyKind::KlUcbPlusPlus);
  CHECK(policy_kind_from_string("moss") == PolicyKind::Moss);
  CHECK(to_string(PolicyKind::KlUcb) == "klucb");
  CHECK_THROWS_AS(policy_kind_from_string("thompson"), std::invalid_argument);
}

TEST_CASE("label symmetry of the klucb++ argmax") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 2 + trial % 6;
    std::vector<double> means(k);
    std::vector<std::int64_t> counts(k);
    for (std::size_t a = 0; a < k; ++a) {
      means[a] = unif(gen);
      counts[a] = 1 + static_cast<std::int64_t>(unif(gen) * 50);
    }
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), gen);
    std::vector<double> pm(k);
    std::vector<std::int64_t> pc(k);
    for (std::size_t a = 0; a < k; ++a) {
      pm[a] = means[perm[a]];
      pc[a] = counts[perm[a]];
    }
    const auto s = state_with(5000, means, counts);
    const auto ps = state_with(5000, pm, pc);
    // Arms whose indices tie (e.g. both at the bracket top) may swap.
    auto index = [&](std::size_t a) {
      return ucb_index(Family::Bernoulli, s.empirical_mean(a), counts[a],
                       s.schedule);
    };
    const std::size_t chosen = klucbpp_select(s);
    const std::size_t permuted = perm[klucbpp_select(ps)];
    CHECK(index(permuted) == doctest::Approx(index(chosen)).epsilon(1e-12));
  }
}

TEST_CASE("dominant arm has the larger index at equal counts") {
  for (double gap : {0.01, 0.1, 0.4}) {
    for (std::int64_t n : {1, 10, 100}) {
      const auto s = state_with(10'000, {0.5 + gap / 2, 0.5 - gap / 2}, {n, n});
      CHECK(ucb_index(s.kind, s.empirical_mean(0), n, s.schedule) >=
            ucb_index(s.kind, s.empirical_mean(1), n, s.schedule));
    }
  }
}

TEST_CASE("cached klucb++ agrees with the stateless rule") {
  for (Family family : {Family::Bernoulli, Family::Gaussian}) {
    const std::int64_t horizon = 3000;
    const std::vector<double> means{0.5, 0.45, 0.4, 0.55};
    KlUcbPlusPlus policy;
    policy.reset(ExplorationSchedule(horizon, 4), family, 0.25);
    Rng rng(31);
    for (std::int64_t t = 0; t < horizon; ++t) {
      const std::size_t arm = policy.select();
      REQUIRE(arm == klucbpp_select(policy.state()));
      const double reward =
          family == Family::Bernoulli
              ? (rng.uniform() < means[arm] ? 1.0 : 0.0)
              : means[arm] + 0.5 * rng.normal();
      policy.update(arm, reward);
    }
    const auto& counts = policy.state().pull_counts;
    CHECK(std::accumulate(counts.begin(), counts.end(), std::int64_t{0}) == horizon);
  }
}

TEST_CASE("make_policy covers every kind") {
  for (PolicyKind k : {PolicyKind::KlUcbPlusPlus, PolicyKind::Ucb1,
                       PolicyKind::Moss, PolicyKind::KlUcb}) {
    auto p = make_policy(k);
    CHECK(p->kind() == k);
    p->reset(ExplorationSchedule(50, 2), Family::Bernoulli, 0.0);
    for (int t = 0; t < 50; ++t) p->update(p->select(), t % 3 == 0 ? 1.0 : 0.0);
    CHECK(p->state().round == 50);
    CHECK(p->state().pull_counts[0] >= 1);
    CHECK(p->state().pull_counts[1] >= 1);
  }
}
