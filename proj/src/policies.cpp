#include "banditkit/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace banditkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double upper_bound(const PolicyState& state, double mu_hat,
                   double threshold) {
  if (state.kind == Family::Gaussian) {
    return mu_hat + std::sqrt(2.0 * state.sigma2 * threshold);
  }
  return invert_kl_upper(state.kind, mu_hat, threshold, state.sigma2);
}

template <typename IndexFn>
std::size_t select_with(const PolicyState& state, IndexFn&& index_of) {
  const auto k = static_cast<std::int64_t>(state.num_arms());
  if (state.round < k) return static_cast<std::size_t>(state.round);
  std::vector<double> indices(state.num_arms());
  for (std::size_t a = 0; a < indices.size(); ++a) {
    indices[a] = state.pull_counts[a] == 0 ? kInf : index_of(a);
  }
  return argmax_lowest(indices);
}

}  // namespace

PolicyState::PolicyState(const ExplorationSchedule& schedule, Family kind,
                         double sigma2)
    : pull_counts(static_cast<std::size_t>(schedule.num_arms), 0),
      empirical_sums(static_cast<std::size_t>(schedule.num_arms), 0.0),
      round(0),
      schedule(schedule),
      kind(kind),
      sigma2(sigma2) {}

double PolicyState::empirical_mean(std::size_t arm) const {
  return empirical_sums.at(arm) / static_cast<double>(pull_counts.at(arm));
}

std::size_t argmax_lowest(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t a = 1; a < values.size(); ++a) {
    if (values[a] > values[best] + kTieTolerance) best = a;
  }
  return best;
}

void policy_update(PolicyState& state, std::size_t arm, double reward) {
  if (arm >= state.num_arms()) {
    throw std::out_of_range("policy_update: arm " + std::to_string(arm) +
                            " out of range");
  }
  ++state.pull_counts[arm];
  state.empirical_sums[arm] += reward;
  ++state.round;
}

std::size_t klucbpp_select(const PolicyState& state) {
  return select_with(state, [&](std::size_t a) {
    return ucb_index(state.kind, state.empirical_mean(a),
                     state.pull_counts[a], state.schedule, state.sigma2);
  });
}

double klucb_threshold(std::int64_t t, std::int64_t n) {
  const double log_t = std::log(static_cast<double>(t));
  return (log_t + 3.0 * std::log(std::max(std::numbers::e, log_t))) /
         static_cast<double>(n);
}

double baseline_index(Baseline rule, const PolicyState& state,
                      std::size_t arm) {
  const double mu = state.empirical_mean(arm);
  const auto n = state.pull_counts[arm];
  const double nd = static_cast<double>(n);
  const double v = state.variance_bound();
  switch (rule) {
    case Baseline::Ucb1:
      return mu + std::sqrt(2.0 * v * std::log(static_cast<double>(
                                          state.round)) / nd);
    case Baseline::Moss: {
      const double ratio = static_cast<double>(state.schedule.horizon) /
                           (static_cast<double>(state.schedule.num_arms) * nd);
      return mu + std::sqrt(v * log_plus(ratio) / nd);
    }
    case Baseline::KlUcb:
      return upper_bound(state, mu, klucb_threshold(state.round, n));
  }
  throw std::logic_error("unknown baseline");
}

std::size_t baseline_select(Baseline rule, const PolicyState& state) {
  return select_with(
      state, [&](std::size_t a) { return baseline_index(rule, state, a); });
}

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::KlUcbPlusPlus: return "klucb++";
    case PolicyKind::Ucb1: return "ucb1";
    case PolicyKind::Moss: return "moss";
    case PolicyKind::KlUcb: return "klucb";
  }
  return "unknown";
}

PolicyKind policy_kind_from_string(std::string_view name) {
  if (name == "klucb++" || name == "klucbpp") return PolicyKind::KlUcbPlusPlus;
  if (name == "ucb1") return PolicyKind::Ucb1;
  if (name == "moss") return PolicyKind::Moss;
  if (name == "klucb") return PolicyKind::KlUcb;
  throw std::invalid_argument("unknown policy '" + std::string(name) +
                              "' (expected klucb++, ucb1, moss or klucb)");
}

void Policy::reset(const ExplorationSchedule& schedule, Family family,
                   double sigma2) {
  state_ = PolicyState(schedule, family, sigma2);
}

void Policy::update(std::size_t arm, double reward) {
  policy_update(state_, arm, reward);
}

void KlUcbPlusPlus::reset(const ExplorationSchedule& schedule, Family family,
                          double sigma2) {
  Policy::reset(schedule, family, sigma2);
  indices_.assign(state_.num_arms(), kInf);
}

std::size_t KlUcbPlusPlus::select() const {
  const auto k = static_cast<std::int64_t>(state_.num_arms());
  if (state_.round < k) return static_cast<std::size_t>(state_.round);
  return argmax_lowest(indices_);
}

void KlUcbPlusPlus::update(std::size_t arm, double reward) {
  Policy::update(arm, reward);
  indices_[arm] =
      ucb_index(state_.kind, state_.empirical_mean(arm),
                state_.pull_counts[arm], state_.schedule, state_.sigma2);
}

PolicyKind BaselinePolicy::kind() const {
  switch (rule_) {
    case Baseline::Ucb1: return PolicyKind::Ucb1;
    case Baseline::Moss: return PolicyKind::Moss;
    case Baseline::KlUcb: return PolicyKind::KlUcb;
  }
  return PolicyKind::Ucb1;
}

std::unique_ptr<Policy> make_policy(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::KlUcbPlusPlus: return std::make_unique<KlUcbPlusPlus>();
    case PolicyKind::Ucb1:
      return std::make_unique<BaselinePolicy>(Baseline::Ucb1);
    case PolicyKind::Moss:
      return std::make_unique<BaselinePolicy>(Baseline::Moss);
    case PolicyKind::KlUcb:
      return std::make_unique<BaselinePolicy>(Baseline::KlUcb);
  }
  throw std::invalid_argument("unknown policy kind");
}

}  // namespace banditkit
