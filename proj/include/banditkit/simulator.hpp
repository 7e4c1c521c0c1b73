#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "banditkit/exp_family.hpp"
#include "banditkit/policies.hpp"

namespace banditkit {

struct Checkpoint {
  std::int64_t t = 0;
  double cumulative_regret = 0.0;

  bool operator==(const Checkpoint&) const = default;
};

/// Whether run_episode records the full action sequence.
enum class ActionLog {
  Auto,  // only when T <= kAutoActionLogLimit
  Always,
  Never,
};

inline constexpr std::int64_t kAutoActionLogLimit = 10'000;

struct RunTrace {
  std::string policy_name;
  std::string model_id;
  std::int64_t horizon = 0;
  std::uint64_t seed = 0;
  std::vector<std::int64_t> final_pull_counts;
  std::vector<Checkpoint> checkpoints;  // ends at t = horizon
  std::optional<std::vector<std::uint32_t>> actions;

  double final_regret() const { return checkpoints.back().cumulative_regret; }

  bool operator==(const RunTrace&) const = default;
};

/// Rounds ceil(T^(k/20)) for k = 1..20 plus T, sorted and deduplicated.
std::vector<std::int64_t> checkpoint_rounds(std::int64_t horizon);

/// Gap-weighted pull count sum_a gap(a) N_a.
double pseudo_regret(const std::vector<double>& gaps,
                     const std::vector<std::int64_t>& pull_counts);

/// Runs select -> sample -> update for T rounds. Deterministic in
/// (policy, model, horizon, seed). Throws std::invalid_argument if T < K.
RunTrace run_episode(PolicyKind policy, const BanditModel& model,
                     std::int64_t horizon, std::uint64_t seed,
                     ActionLog action_log = ActionLog::Auto);

/// One (model, policy, horizon) combination of a sweep.
struct CellStats {
  std::size_t cell_index = 0;
  std::string policy_name;
  std::string model_id;
  std::size_t num_arms = 0;
  std::int64_t horizon = 0;
  std::int64_t replications = 0;
  double mean_regret = 0.0;
  double stderr_regret = 0.0;
  std::vector<double> mean_pulls;

  bool operator==(const CellStats&) const = default;
};

struct AggregateStats {
  std::vector<CellStats> cells;

  bool operator==(const AggregateStats&) const = default;
};

/// Mean and standard error of the final regret plus mean pull counts, summed
/// in replication order. `traces` must be non-empty and share one cell.
CellStats aggregate_traces(const std::vector<RunTrace>& traces);

struct ExperimentConfig {
  std::vector<BanditModel> models;
  std::vector<PolicyKind> policies;
  std::vector<std::int64_t> horizons;
  std::int64_t replications = 1;
  std::uint64_t master_seed = 0;
  ActionLog action_log = ActionLog::Never;
  bool keep_traces = true;
  unsigned threads = 0;  // 0: resolve_thread_count()

  /// Throws std::invalid_argument on empty lists, replications < 1, or a
  /// horizon below the largest arm count.
  void validate() const;
};

struct CellKey {
  std::size_t model = 0;
  std::size_t policy = 0;
  std::size_t horizon = 0;
};

/// Cells are enumerated model-major, then policy, then horizon.
std::vector<CellKey> enumerate_cells(const ExperimentConfig& config);

struct ExperimentResult {
  AggregateStats aggregate;
  std::vector<std::vector<RunTrace>> traces;  // [cell][replication], if kept
};

/// Replication r of cell c uses derive_seed(master_seed, c, r), so output
/// does not depend on thread count or scheduling.
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace banditkit
