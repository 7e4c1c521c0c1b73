#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include "banditkit/simulator.hpp"

namespace banditkit {

inline constexpr std::string_view kConfigSchema = "banditkit/experiment@1";
inline constexpr int kCsvSchemaVersion = 1;

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitCheckFailed = 2,
};

/// Malformed or invalid experiment configuration. what() is anchored as
/// "<source>:<line>:<col>: ..." for syntax errors and
/// "<source>: <json-pointer>: ..." for schema errors.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parsed experiment document.
struct ExperimentSpec {
  ExperimentConfig config;
  std::string output_dir = "banditkit_out";
  bool write_action_log = false;
};

ExperimentSpec parse_experiment_config(std::string_view text,
                                       const std::string& source = "config");
ExperimentSpec load_experiment_config(const std::string& path);

/// printf("%.17g").
std::string format_real(double value);

/// schema_version,policy,model_id,K,T,replications,mean_regret,
/// stderr_regret,mean_pulls_arm_0..K-1 (wide; padded to the largest K).
void write_aggregate_csv(std::ostream& out, const AggregateStats& stats);
/// t,cumulative_pseudo_regret
void write_trace_csv(std::ostream& out, const RunTrace& trace);
/// t,arm  (requires trace.actions)
void write_action_csv(std::ostream& out, const RunTrace& trace);

/// Bernoulli instance with one arm at 0.5 and K-1 arms at 0.5 - sqrt(K/T).
/// Throws std::invalid_argument unless 0.5 - sqrt(K/T) > 0.
BanditModel hard_minimax_model(std::int64_t horizon, std::int64_t num_arms);

/// Entry point shared by the executable, the tests and the bindings.
/// Returns an ExitCode.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace banditkit
