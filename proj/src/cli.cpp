#include "banditkit/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <vector>

#include "banditkit/verification.hpp"

namespace banditkit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& source,
                               const std::string& pointer,
                               const std::string& message) {
  throw ConfigError(source + ": " + (pointer.empty() ? "/" : pointer) + ": " +
                    message);
}

const json& require(const json& doc, const std::string& key,
                    const std::string& source, const std::string& at) {
  if (!doc.contains(key)) schema_error(source, at, "missing field '" + key + "'");
  return doc.at(key);
}

double as_number(const json& value, const std::string& source,
                 const std::string& at) {
  if (!value.is_number()) schema_error(source, at, "expected a number");
  return value.get<double>();
}

std::int64_t as_integer(const json& value, const std::string& source,
                        const std::string& at) {
  if (!value.is_number_integer()) schema_error(source, at, "expected an integer");
  return value.get<std::int64_t>();
}

BanditModel parse_model(const json& node, const std::string& source,
                        const std::string& at) {
  if (!node.is_object()) schema_error(source, at, "expected an object");
  const json& id = require(node, "id", source, at);
  if (!id.is_string()) schema_error(source, at + "/id", "expected a string");
  const json& family_node = require(node, "family", source, at);
  if (!family_node.is_string()) {
    schema_error(source, at + "/family", "expected a string");
  }
  const json& means_node = require(node, "means", source, at);
  if (!means_node.is_array()) {
    schema_error(source, at + "/means", "expected an array of numbers");
  }
  try {
    const Family family = family_from_string(family_node.get<std::string>());
    double sigma2 = 0.0;
    if (family == Family::Gaussian) {
      sigma2 = as_number(require(node, "sigma2", source, at), source,
                         at + "/sigma2");
    }
    std::vector<ArmDistribution> arms;
    for (std::size_t i = 0; i < means_node.size(); ++i) {
      const double m =
          as_number(means_node[i], source, at + "/means/" + std::to_string(i));
      arms.push_back(family == Family::Bernoulli
                         ? ArmDistribution::bernoulli(m)
                         : ArmDistribution::gaussian(m, sigma2));
    }
    if (arms.empty()) schema_error(source, at + "/means", "no arms");
    FamilyBounds bounds = default_bounds(arms);
    if (node.contains("bounds")) {
      const json& b = node.at("bounds");
      const std::string bat = at + "/bounds";
      if (!b.is_object()) schema_error(source, bat, "expected an object");
      if (b.contains("mu_minus")) {
        bounds.mu_minus = as_number(b.at("mu_minus"), source, bat + "/mu_minus");
      }
      if (b.contains("mu_plus")) {
        bounds.mu_plus = as_number(b.at("mu_plus"), source, bat + "/mu_plus");
      }
      if (b.contains("variance")) {
        bounds.variance = as_number(b.at("variance"), source, bat + "/variance");
      }
    }
    return BanditModel(id.get<std::string>(), std::move(arms), bounds);
  } catch (const std::invalid_argument& e) {
    schema_error(source, at, e.what());
  }
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text,
                                                std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

}  // namespace

ExperimentSpec parse_experiment_config(std::string_view text,
                                       const std::string& source) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte);
    throw ConfigError(source + ":" + std::to_string(line) + ":" +
                      std::to_string(column) + ": " + e.what());
  }
  if (!doc.is_object()) schema_error(source, "", "expected a JSON object");

  const json& schema = require(doc, "schema", source, "");
  if (!schema.is_string() || schema.get<std::string>() != kConfigSchema) {
    schema_error(source, "/schema",
                 "unsupported schema (expected \"" + std::string(kConfigSchema) +
                     "\")");
  }

  ExperimentSpec spec;
  ExperimentConfig& config = spec.config;

  const json& models = require(doc, "models", source, "");
  if (!models.is_array() || models.empty()) {
    schema_error(source, "/models", "expected a non-empty array");
  }
  for (std::size_t i = 0; i < models.size(); ++i) {
    config.models.push_back(
        parse_model(models[i], source, "/models/" + std::to_string(i)));
  }

  const json& policies = require(doc, "policies", source, "");
  if (!policies.is_array() || policies.empty()) {
    schema_error(source, "/policies", "expected a non-empty array");
  }
  for (std::size_t i = 0; i < policies.size(); ++i) {
    const std::string at = "/policies/" + std::to_string(i);
    const json& p = policies[i];
    std::string name;
    if (p.is_string()) {
      name = p.get<std::string>();
    } else if (p.is_object() && p.contains("name") && p.at("name").is_string()) {
      name = p.at("name").get<std::string>();
    } else {
      schema_error(source, at, "expected a policy name or {\"name\": ...}");
    }
    try {
      config.policies.push_back(policy_kind_from_string(name));
    } catch (const std::invalid_argument& e) {
      schema_error(source, at, e.what());
    }
  }

  const json& horizons = require(doc, "horizons", source, "");
  if (!horizons.is_array() || horizons.empty()) {
    schema_error(source, "/horizons", "expected a non-empty array");
  }
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    config.horizons.push_back(
        as_integer(horizons[i], source, "/horizons/" + std::to_string(i)));
  }

  config.replications =
      as_integer(require(doc, "replications", source, ""), source,
                 "/replications");

  const json& seed = require(doc, "seed", source, "");
  if (!seed.is_number_unsigned()) {
    schema_error(source, "/seed", "expected a non-negative integer");
  }
  config.master_seed = seed.get<std::uint64_t>();

  if (doc.contains("output_dir")) {
    if (!doc.at("output_dir").is_string()) {
      schema_error(source, "/output_dir", "expected a string");
    }
    spec.output_dir = doc.at("output_dir").get<std::string>();
  }
  if (doc.contains("checkpoints")) {
    const json& c = doc.at("checkpoints");
    if (!c.is_string() || c.get<std::string>() != "log20") {
      schema_error(source, "/checkpoints", "only \"log20\" is supported");
    }
  }
  if (doc.contains("write_action_log")) {
    if (!doc.at("write_action_log").is_boolean()) {
      schema_error(source, "/write_action_log", "expected a boolean");
    }
    spec.write_action_log = doc.at("write_action_log").get<bool>();
  }
  config.action_log =
      spec.write_action_log ? ActionLog::Always : ActionLog::Never;

  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    schema_error(source, "", e.what());
  }
  return spec;
}

ExperimentSpec load_experiment_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment_config(buffer.str(), path);
}

std::string format_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_aggregate_csv(std::ostream& out, const AggregateStats& stats) {
  std::size_t max_k = 0;
  for (const auto& c : stats.cells) max_k = std::max(max_k, c.num_arms);
  out << "schema_version,policy,model_id,K,T,replications,mean_regret,"
         "stderr_regret";
  for (std::size_t a = 0; a < max_k; ++a) out << ",mean_pulls_arm_" << a;
  out << '\n';
  for (const auto& c : stats.cells) {
    out << kCsvSchemaVersion << ',' << c.policy_name << ',' << c.model_id
        << ',' << c.num_arms << ',' << c.horizon << ',' << c.replications
        << ',' << format_real(c.mean_regret) << ','
        << format_real(c.stderr_regret);
    for (std::size_t a = 0; a < max_k; ++a) {
      out << ',';
      if (a < c.mean_pulls.size()) out << format_real(c.mean_pulls[a]);
    }
    out << '\n';
  }
}

void write_trace_csv(std::ostream& out, const RunTrace& trace) {
  out << "t,cumulative_pseudo_regret\n";
  for (const auto& cp : trace.checkpoints) {
    out << cp.t << ',' << format_real(cp.cumulative_regret) << '\n';
  }
}

void write_action_csv(std::ostream& out, const RunTrace& trace) {
  if (!trace.actions) {
    throw std::invalid_argument("write_action_csv: trace has no action log");
  }
  out << "t,arm\n";
  for (std::size_t i = 0; i < trace.actions->size(); ++i) {
    out << (i + 1) << ',' << (*trace.actions)[i] << '\n';
  }
}

BanditModel hard_minimax_model(std::int64_t horizon, std::int64_t num_arms) {
  if (num_arms < 2 || horizon < num_arms) {
    throw std::invalid_argument("hard instance needs T >= K >= 2");
  }
  const double gap = std::sqrt(static_cast<double>(num_arms) /
                               static_cast<double>(horizon));
  if (!(0.5 - gap > 0.0)) {
    throw std::invalid_argument("hard instance needs T > 4K (gap sqrt(K/T) < 0.5)");
  }
  std::vector<double> means(static_cast<std::size_t>(num_arms), 0.5 - gap);
  means[0] = 0.5;
  return BanditModel::bernoulli(
      "hard_T" + std::to_string(horizon) + "_K" + std::to_string(num_arms),
      means);
}

namespace {

void write_file(const fs::path& path,
                const std::function<void(std::ostream&)>& writer) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  writer(out);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

struct SimulateArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::int64_t> replications;
  unsigned threads = 0;
};

int cmd_simulate(const SimulateArgs& args, std::ostream& out,
                 std::ostream& err) {
  ExperimentSpec spec;
  try {
    spec = load_experiment_config(args.config);
    if (args.seed) spec.config.master_seed = *args.seed;
    if (args.replications) spec.config.replications = *args.replications;
    if (args.out) spec.output_dir = *args.out;
    spec.config.threads = args.threads;
    spec.config.validate();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  ExperimentResult result;
  try {
    result = run_experiment(spec.config);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    const fs::path dir(spec.output_dir);
    fs::create_directories(dir);
    write_file(dir / "aggregate.csv", [&](std::ostream& os) {
      write_aggregate_csv(os, result.aggregate);
    });
    for (std::size_t c = 0; c < result.traces.size(); ++c) {
      for (std::size_t r = 0; r < result.traces[c].size(); ++r) {
        const auto& trace = result.traces[c][r];
        const std::string stem = std::to_string(c) + "_" + std::to_string(r);
        write_file(dir / ("trace_" + stem + ".csv"),
                   [&](std::ostream& os) { write_trace_csv(os, trace); });
        if (spec.write_action_log && trace.actions) {
          write_file(dir / ("actions_" + stem + ".csv"),
                     [&](std::ostream& os) { write_action_csv(os, trace); });
        }
      }
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  for (const auto& cell : result.aggregate.cells) {
    out << cell.policy_name << " on " << cell.model_id << " T=" << cell.horizon
        << ": mean regret " << format_real(cell.mean_regret) << " +/- "
        << format_real(cell.stderr_regret) << " (" << cell.replications
        << " reps)\n";
  }
  out << "wrote " << (fs::path(spec.output_dir) / "aggregate.csv").string()
      << '\n';
  return kExitOk;
}

struct VerifyArgs {
  std::string suite;
  std::int64_t trials = 100'000;
  std::optional<std::string> out;
  double variance = 0.25;
  std::uint64_t seed = SuiteOptions{}.seed;
};

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  if (args.trials < 1) {
    err << "error: --trials must be >= 1\n";
    return kExitValidation;
  }
  if (!(args.variance > 0.0)) {
    err << "error: --variance must be > 0\n";
    return kExitValidation;
  }
  SuiteOptions options;
  options.trials = args.trials;
  options.bernoulli_variance = args.variance;
  options.seed = args.seed;

  std::vector<std::string> suites;
  if (args.suite == "all") {
    suites = suite_names();
  } else {
    suites = {args.suite};
  }
  std::vector<Report> reports;
  for (const auto& name : suites) {
    reports.push_back(run_suite(name, options));
    print_report(out, reports.back());
  }
  bool ok = true;
  for (const auto& r : reports) ok = ok && r.passed();
  if (args.out) {
    try {
      fs::create_directories(*args.out);
      write_file(fs::path(*args.out) / ("verify_" + args.suite + ".csv"),
                 [&](std::ostream& os) { write_report_csv(os, reports); });
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kExitValidation;
    }
  }
  out << "verify " << args.suite << ": " << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? kExitOk : kExitCheckFailed;
}

struct SweepArgs {
  std::vector<std::int64_t> horizons;
  std::vector<std::int64_t> arms;
  std::int64_t replications = 1000;
  std::string out;
  std::uint64_t seed = 1;
};

int cmd_minimax_sweep(const SweepArgs& args, std::ostream& out,
                      std::ostream& err) {
  if (args.horizons.empty() || args.arms.empty()) {
    err << "error: --horizons and --arms must be non-empty\n";
    return kExitValidation;
  }
  if (args.replications < 1) {
    err << "error: --replications must be >= 1\n";
    return kExitValidation;
  }
  struct Row {
    std::int64_t t, k;
    double gap;
    CellStats stats;
    double bound;
  };
  std::vector<Row> rows;
  try {
    for (auto k : args.arms) {
      for (auto t : args.horizons) {
        ExperimentConfig config;
        config.models.push_back(hard_minimax_model(t, k));
        config.policies = {PolicyKind::KlUcbPlusPlus};
        config.horizons = {t};
        config.replications = args.replications;
        config.master_seed = derive_seed(args.seed, static_cast<std::uint64_t>(t),
                                         static_cast<std::uint64_t>(k));
        config.keep_traces = false;
        const auto result = run_experiment(config);
        const auto& bounds = config.models.front().bounds();
        rows.push_back({t, k,
                        std::sqrt(static_cast<double>(k) / static_cast<double>(t)),
                        result.aggregate.cells.front(),
                        theorem1_bound(t, k, bounds.variance, bounds.mu_minus,
                                       bounds.mu_plus)});
      }
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  bool ok = true;
  try {
    fs::create_directories(args.out);
    write_file(fs::path(args.out) / "minimax.csv", [&](std::ostream& os) {
      os << "schema_version,T,K,gap,replications,mean_regret,stderr_regret,"
            "theorem1_bound\n";
      for (const auto& r : rows) {
        os << kCsvSchemaVersion << ',' << r.t << ',' << r.k << ','
           << format_real(r.gap) << ',' << r.stats.replications << ','
           << format_real(r.stats.mean_regret) << ','
           << format_real(r.stats.stderr_regret) << ','
           << format_real(r.bound) << '\n';
      }
    });
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  for (const auto& r : rows) {
    const bool within = r.stats.mean_regret <= r.bound;
    ok = ok && within;
    out << "T=" << r.t << " K=" << r.k << " mean regret "
        << format_real(r.stats.mean_regret) << " +/- "
        << format_real(r.stats.stderr_regret) << " bound "
        << format_real(r.bound) << (within ? "" : "  EXCEEDED") << '\n';
  }
  return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"kl-UCB++ bandit simulator and verification tool", "banditkit"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run an experiment sweep");
  simulate->add_option("--config", sim.config, "Experiment JSON")->required();
  simulate->add_option("--seed", sim.seed, "Override the master seed");
  simulate->add_option("--out", sim.out, "Override the output directory");
  simulate->add_option("--replications", sim.replications,
                       "Override replications per cell");
  simulate->add_option("--threads", sim.threads,
                       "Worker threads (0: hardware, capped by BANDITKIT_THREADS)");

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("suite", ver.suite, "pinsker|lemmas|deviation|bounds|all")
      ->required()
      ->check(CLI::IsMember({"pinsker", "lemmas", "deviation", "bounds", "all"}));
  verify->add_option("--trials", ver.trials, "Monte Carlo trials");
  verify->add_option("--out", ver.out, "Directory for the CSV report");
  verify->add_option("--variance", ver.variance,
                     "Bernoulli V used by the pinsker suite");
  verify->add_option("--seed", ver.seed, "Monte Carlo seed");

  SweepArgs sweep;
  auto* minimax = app.add_subcommand(
      "minimax-sweep", "kl-UCB++ on the hard instances vs the minimax bound");
  minimax->add_option("--horizons", sweep.horizons, "Comma-separated T list")
      ->required()
      ->delimiter(',');
  minimax->add_option("--arms", sweep.arms, "Comma-separated K list")
      ->required()
      ->delimiter(',');
  minimax->add_option("--replications", sweep.replications,
                      "Replications per (T, K)");
  minimax->add_option("--out", sweep.out, "Output directory")->required();
  minimax->add_option("--seed", sweep.seed, "Master seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  if (simulate->parsed()) return cmd_simulate(sim, out, err);
  if (verify->parsed()) return cmd_verify(ver, out, err);
  return cmd_minimax_sweep(sweep, out, err);
}

}  // namespace banditkit
