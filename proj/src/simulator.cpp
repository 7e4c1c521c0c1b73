#include "banditkit/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "banditkit/parallel.hpp"
#include "banditkit/rng.hpp"

namespace banditkit {

std::vector<std::int64_t> checkpoint_rounds(std::int64_t horizon) {
  std::vector<std::int64_t> rounds;
  rounds.reserve(21);
  const long double t = static_cast<long double>(horizon);
  for (int k = 1; k <= 20; ++k) {
    // The epsilon absorbs pow() error at exact powers such as 10^4^(1/4).
    const long double x = std::pow(t, static_cast<long double>(k) / 20.0L);
    auto r = static_cast<std::int64_t>(std::ceil(x - 1e-9L));
    rounds.push_back(std::clamp<std::int64_t>(r, 1, horizon));
  }
  rounds.push_back(horizon);
  std::sort(rounds.begin(), rounds.end());
  rounds.erase(std::unique(rounds.begin(), rounds.end()), rounds.end());
  return rounds;
}

double pseudo_regret(const std::vector<double>& gaps,
                     const std::vector<std::int64_t>& pull_counts) {
  double total = 0.0;
  for (std::size_t a = 0; a < gaps.size(); ++a) {
    total += gaps[a] * static_cast<double>(pull_counts[a]);
  }
  return total;
}

RunTrace run_episode(PolicyKind policy_kind, const BanditModel& model,
                     std::int64_t horizon, std::uint64_t seed,
                     ActionLog action_log) {
  const auto k = static_cast<std::int64_t>(model.num_arms());
  if (horizon < k) {
    throw std::invalid_argument("run_episode: horizon must be >= K");
  }
  const ModelStats stats = model_stats(model);
  auto policy = make_policy(policy_kind);
  policy->reset(ExplorationSchedule(horizon, k), model.family(),
                model.sigma2());

  RunTrace trace;
  trace.policy_name = std::string(to_string(policy_kind));
  trace.model_id = model.id();
  trace.horizon = horizon;
  trace.seed = seed;
  const bool log_actions =
      action_log == ActionLog::Always ||
      (action_log == ActionLog::Auto && horizon <= kAutoActionLogLimit);
  if (log_actions) {
    trace.actions.emplace();
    trace.actions->reserve(static_cast<std::size_t>(horizon));
  }

  const auto rounds = checkpoint_rounds(horizon);
  trace.checkpoints.reserve(rounds.size());
  auto next_checkpoint = rounds.begin();

  Rng rng(seed);
  const auto& arms = model.arms();
  for (std::int64_t t = 1; t <= horizon; ++t) {
    const std::size_t arm = policy->select();
    policy->update(arm, sample(arms[arm], rng));
    if (log_actions) trace.actions->push_back(static_cast<std::uint32_t>(arm));
    if (t == *next_checkpoint) {
      trace.checkpoints.push_back(
          {t, pseudo_regret(stats.gaps, policy->state().pull_counts)});
      ++next_checkpoint;
    }
  }
  trace.final_pull_counts = policy->state().pull_counts;
  return trace;
}

CellStats aggregate_traces(const std::vector<RunTrace>& traces) {
  if (traces.empty()) {
    throw std::invalid_argument("aggregate_traces: no traces");
  }
  CellStats cell;
  const auto& first = traces.front();
  cell.policy_name = first.policy_name;
  cell.model_id = first.model_id;
  cell.num_arms = first.final_pull_counts.size();
  cell.horizon = first.horizon;
  cell.replications = static_cast<std::int64_t>(traces.size());

  const double n = static_cast<double>(traces.size());
  cell.mean_pulls.assign(cell.num_arms, 0.0);
  double sum = 0.0;
  for (const auto& trace : traces) {
    sum += trace.final_regret();
    for (std::size_t a = 0; a < cell.num_arms; ++a) {
      cell.mean_pulls[a] += static_cast<double>(trace.final_pull_counts[a]);
    }
  }
  for (double& p : cell.mean_pulls) p /= n;
  cell.mean_regret = sum / n;
  if (traces.size() > 1) {
    double ss = 0.0;
    for (const auto& trace : traces) {
      const double d = trace.final_regret() - cell.mean_regret;
      ss += d * d;
    }
    cell.stderr_regret = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return cell;
}

void ExperimentConfig::validate() const {
  if (models.empty()) throw std::invalid_argument("config has no models");
  if (policies.empty()) throw std::invalid_argument("config has no policies");
  if (horizons.empty()) throw std::invalid_argument("config has no horizons");
  if (replications < 1) {
    throw std::invalid_argument("replications must be >= 1");
  }
  std::size_t max_k = 0;
  for (const auto& m : models) max_k = std::max(max_k, m.num_arms());
  for (auto t : horizons) {
    if (t < static_cast<std::int64_t>(max_k)) {
      throw std::invalid_argument("every horizon must be >= the largest K (" +
                                  std::to_string(max_k) + ")");
    }
  }
}

std::vector<CellKey> enumerate_cells(const ExperimentConfig& config) {
  std::vector<CellKey> cells;
  for (std::size_t m = 0; m < config.models.size(); ++m) {
    for (std::size_t p = 0; p < config.policies.size(); ++p) {
      for (std::size_t h = 0; h < config.horizons.size(); ++h) {
        cells.push_back({m, p, h});
      }
    }
  }
  return cells;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto cells = enumerate_cells(config);
  const auto reps = static_cast<std::size_t>(config.replications);

  std::vector<std::vector<RunTrace>> traces(cells.size(),
                                            std::vector<RunTrace>(reps));
  parallel_for(cells.size() * reps, resolve_thread_count(config.threads),
               [&](std::size_t job) {
                 const std::size_t c = job / reps;
                 const std::size_t r = job % reps;
                 const auto& key = cells[c];
                 traces[c][r] = run_episode(
                     config.policies[key.policy], config.models[key.model],
                     config.horizons[key.horizon],
                     derive_seed(config.master_seed, c, r), config.action_log);
               });

  ExperimentResult result;
  result.aggregate.cells.reserve(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    CellStats stats = aggregate_traces(traces[c]);
    stats.cell_index = c;
    result.aggregate.cells.push_back(std::move(stats));
  }
  if (config.keep_traces) result.traces = std::move(traces);
  return result;
}

}  // namespace banditkit
