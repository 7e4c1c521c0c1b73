#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "banditkit/exp_family.hpp"
#include "banditkit/index.hpp"

namespace banditkit {

/// Mutable per-episode statistics shared by every policy.
struct PolicyState {
  std::vector<std::int64_t> pull_counts;
  std::vector<double> empirical_sums;
  std::int64_t round = 0;
  ExplorationSchedule schedule;
  Family kind = Family::Bernoulli;
  double sigma2 = 0.0;

  PolicyState() = default;
  PolicyState(const ExplorationSchedule& schedule, Family kind,
              double sigma2 = 0.0);

  std::size_t num_arms() const { return pull_counts.size(); }
  /// Empirical mean; requires pull_counts[arm] > 0.
  double empirical_mean(std::size_t arm) const;
  /// V used by the sub-Gaussian baselines.
  double variance_bound() const { return default_variance(kind, sigma2); }
};

/// Indices closer than this are treated as tied; ties go to the lowest arm.
inline constexpr double kTieTolerance = 1e-12;

/// Lowest-index argmax with kTieTolerance.
std::size_t argmax_lowest(std::span<const double> values);

/// Records one reward. Throws std::out_of_range for an invalid arm.
void policy_update(PolicyState& state, std::size_t arm, double reward);

/// kl-UCB++ decision: round-robin while round < K, then the argmax of
/// ucb_index(mu_hat_a, N_a).
std::size_t klucbpp_select(const PolicyState& state);

enum class Baseline { Ucb1, Moss, KlUcb };

/// Exploration budget of kl-UCB: (log t + 3 log(max(e, log t))) / n.
double klucb_threshold(std::int64_t t, std::int64_t n);

/// Index of one arm under a baseline rule. Requires pull_counts[arm] > 0.
///   UCB1:  mu + sqrt(2 V log t / N)
///   MOSS:  mu + sqrt(V max(0, log(T / (K N))) / N)
///   klUCB: sup { m : kl(mu, m) <= klucb_threshold(t, N) }
double baseline_index(Baseline rule, const PolicyState& state, std::size_t arm);

std::size_t baseline_select(Baseline rule, const PolicyState& state);

enum class PolicyKind { KlUcbPlusPlus, Ucb1, Moss, KlUcb };

std::string_view to_string(PolicyKind kind);
/// Accepts "klucb++" (alias "klucbpp"), "ucb1", "moss", "klucb".
PolicyKind policy_kind_from_string(std::string_view name);

/// Sequential decision contract: reset, then alternate select and update.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual PolicyKind kind() const = 0;
  virtual void reset(const ExplorationSchedule& schedule, Family family,
                     double sigma2);
  /// Pure given the current state.
  virtual std::size_t select() const = 0;
  virtual void update(std::size_t arm, double reward);

  const PolicyState& state() const { return state_; }

 protected:
  PolicyState state_;
};

/// kl-UCB++ with per-arm index caching: an arm's index only depends on its
/// own (mu_hat, N), so update() refreshes just the pulled arm.
class KlUcbPlusPlus final : public Policy {
 public:
  PolicyKind kind() const override { return PolicyKind::KlUcbPlusPlus; }
  void reset(const ExplorationSchedule& schedule, Family family,
             double sigma2) override;
  std::size_t select() const override;
  void update(std::size_t arm, double reward) override;

 private:
  std::vector<double> indices_;
};

class BaselinePolicy final : public Policy {
 public:
  explicit BaselinePolicy(Baseline rule) : rule_(rule) {}

  PolicyKind kind() const override;
  std::size_t select() const override {
    return baseline_select(rule_, state_);
  }

 private:
  Baseline rule_;
};

std::unique_ptr<Policy> make_policy(PolicyKind kind);

}  // namespace banditkit
