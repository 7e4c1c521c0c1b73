#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "banditkit/cli.hpp"
#include "banditkit/exp_family.hpp"
#include "banditkit/index.hpp"
#include "banditkit/policies.hpp"
#include "banditkit/simulator.hpp"
#include "banditkit/verification.hpp"

namespace py = pybind11;
using namespace banditkit;

PYBIND11_MODULE(_core, m) {
  m.doc() = "kl-UCB++ bandit engine";
  m.attr("__version__") = "0.1.0";

  // exp_family
  py::enum_<Family>(m, "Family")
      .value("Bernoulli", Family::Bernoulli)
      .value("Gaussian", Family::Gaussian);

  py::class_<ArmDistribution>(m, "ArmDistribution")
      .def_static("bernoulli", &ArmDistribution::bernoulli, py::arg("mean"))
      .def_static("gaussian", &ArmDistribution::gaussian, py::arg("mean"),
                  py::arg("sigma2"))
      .def_readonly("kind", &ArmDistribution::kind)
      .def_readonly("mean", &ArmDistribution::mean)
      .def_readonly("sigma2", &ArmDistribution::sigma2);

  py::class_<FamilyBounds>(m, "FamilyBounds")
      .def(py::init<double, double, double>(), py::arg("mu_minus"),
           py::arg("mu_plus"), py::arg("variance"))
      .def_readonly("mu_minus", &FamilyBounds::mu_minus)
      .def_readonly("mu_plus", &FamilyBounds::mu_plus)
      .def_readonly("variance", &FamilyBounds::variance);

  py::class_<BanditModel>(m, "BanditModel")
      .def_static("bernoulli", &BanditModel::bernoulli, py::arg("id"),
                  py::arg("means"))
      .def_static("gaussian", &BanditModel::gaussian, py::arg("id"),
                  py::arg("means"), py::arg("sigma2"))
      .def_property_readonly("id", &BanditModel::id)
      .def_property_readonly("num_arms", &BanditModel::num_arms)
      .def_property_readonly("family", &BanditModel::family)
      .def_property_readonly("sigma2", &BanditModel::sigma2)
      .def_property_readonly("bounds", &BanditModel::bounds)
      .def_property_readonly("means", &BanditModel::means);

  py::class_<ModelStats>(m, "ModelStats")
      .def_readonly("best_mean", &ModelStats::best_mean)
      .def_readonly("gaps", &ModelStats::gaps);

  m.def("kl_div",
        py::overload_cast<Family, double, double, double>(&kl_div),
        py::arg("kind"), py::arg("mu"), py::arg("mu_prime"),
        py::arg("sigma2") = 0.0);
  m.def("kl_plus", &kl_plus, py::arg("kind"), py::arg("mu"),
        py::arg("mu_prime"), py::arg("sigma2") = 0.0);
  m.def("model_stats", &model_stats, py::arg("model"));

  // index
  py::class_<ExplorationSchedule>(m, "ExplorationSchedule")
      .def(py::init<std::int64_t, std::int64_t>(), py::arg("horizon"),
           py::arg("num_arms"))
      .def_readonly("horizon", &ExplorationSchedule::horizon)
      .def_readonly("num_arms", &ExplorationSchedule::num_arms);

  m.def("exploration_g", &exploration_g, py::arg("n"), py::arg("schedule"));
  m.def("invert_kl_upper", &invert_kl_upper, py::arg("kind"),
        py::arg("mu_hat"), py::arg("threshold"), py::arg("sigma2") = 0.0);
  m.def("ucb_index", &ucb_index, py::arg("kind"), py::arg("mu_hat"),
        py::arg("n"), py::arg("schedule"), py::arg("sigma2") = 0.0);

  // policies
  py::enum_<PolicyKind>(m, "PolicyKind")
      .value("KlUcbPlusPlus", PolicyKind::KlUcbPlusPlus)
      .value("Ucb1", PolicyKind::Ucb1)
      .value("Moss", PolicyKind::Moss)
      .value("KlUcb", PolicyKind::KlUcb);
  m.def("policy_kind_from_string", &policy_kind_from_string, py::arg("name"));

  py::class_<PolicyState>(m, "PolicyState")
      .def_readonly("pull_counts", &PolicyState::pull_counts)
      .def_readonly("empirical_sums", &PolicyState::empirical_sums)
      .def_readonly("round", &PolicyState::round)
      .def("empirical_mean", &PolicyState::empirical_mean, py::arg("arm"));

  py::class_<Policy>(m, "Policy")
      .def_property_readonly("kind", &Policy::kind)
      .def("reset", &Policy::reset, py::arg("schedule"), py::arg("family"),
           py::arg("sigma2") = 0.0)
      .def("select", &Policy::select)
      .def("update", &Policy::update, py::arg("arm"), py::arg("reward"))
      .def_property_readonly("state", &Policy::state,
                             py::return_value_policy::reference_internal);
  m.def("make_policy", &make_policy, py::arg("kind"));

  // simulator
  py::class_<Checkpoint>(m, "Checkpoint")
      .def_readonly("t", &Checkpoint::t)
      .def_readonly("cumulative_regret", &Checkpoint::cumulative_regret);

  py::enum_<ActionLog>(m, "ActionLog")
      .value("Auto", ActionLog::Auto)
      .value("Always", ActionLog::Always)
      .value("Never", ActionLog::Never);

  py::class_<RunTrace>(m, "RunTrace")
      .def_readonly("policy_name", &RunTrace::policy_name)
      .def_readonly("model_id", &RunTrace::model_id)
      .def_readonly("horizon", &RunTrace::horizon)
      .def_readonly("seed", &RunTrace::seed)
      .def_readonly("final_pull_counts", &RunTrace::final_pull_counts)
      .def_readonly("checkpoints", &RunTrace::checkpoints)
      .def_readonly("actions", &RunTrace::actions)
      .def_property_readonly("final_regret", &RunTrace::final_regret);

  m.def("checkpoint_rounds", &checkpoint_rounds, py::arg("horizon"));
  m.def("run_episode", &run_episode, py::arg("policy"), py::arg("model"),
        py::arg("horizon"), py::arg("seed"),
        py::arg("action_log") = ActionLog::Auto,
        py::call_guard<py::gil_scoped_release>());

  py::class_<CellStats>(m, "CellStats")
      .def_readonly("cell_index", &CellStats::cell_index)
      .def_readonly("policy_name", &CellStats::policy_name)
      .def_readonly("model_id", &CellStats::model_id)
      .def_readonly("num_arms", &CellStats::num_arms)
      .def_readonly("horizon", &CellStats::horizon)
      .def_readonly("replications", &CellStats::replications)
      .def_readonly("mean_regret", &CellStats::mean_regret)
      .def_readonly("stderr_regret", &CellStats::stderr_regret)
      .def_readonly("mean_pulls", &CellStats::mean_pulls);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("models", &ExperimentConfig::models)
      .def_readwrite("policies", &ExperimentConfig::policies)
      .def_readwrite("horizons", &ExperimentConfig::horizons)
      .def_readwrite("replications", &ExperimentConfig::replications)
      .def_readwrite("master_seed", &ExperimentConfig::master_seed)
      .def_readwrite("action_log", &ExperimentConfig::action_log)
      .def_readwrite("keep_traces", &ExperimentConfig::keep_traces)
      .def_readwrite("threads", &ExperimentConfig::threads);

  py::class_<ExperimentResult>(m, "ExperimentResult")
      .def_property_readonly(
          "cells", [](const ExperimentResult& r) { return r.aggregate.cells; })
      .def_readonly("traces", &ExperimentResult::traces);
  m.def("run_experiment", &run_experiment, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());

  // verification
  m.def("theorem1_bound", &theorem1_bound, py::arg("horizon"),
        py::arg("num_arms"), py::arg("variance"), py::arg("mu_minus"),
        py::arg("mu_plus"));
  m.def("theorem2_bound", &theorem2_bound, py::arg("model"), py::arg("arm"),
        py::arg("delta"), py::arg("horizon"));

  py::class_<ProofConstants>(m, "ProofConstants")
      .def_readonly("delta0", &ProofConstants::delta0)
      .def_readonly("f_of_u", &ProofConstants::f_of_u)
      .def_readonly("n_of_u", &ProofConstants::n_of_u)
      .def_readonly("C", &ProofConstants::C)
      .def_readonly("beta", &ProofConstants::beta)
      .def_readonly("c", &ProofConstants::c);
  m.def("proof_constants", &proof_constants, py::arg("horizon"),
        py::arg("num_arms"), py::arg("variance"), py::arg("u"));

  py::class_<CheckResult>(m, "CheckResult")
      .def_readonly("name", &CheckResult::name)
      .def_readonly("passed", &CheckResult::passed)
      .def_readonly("evaluated", &CheckResult::evaluated)
      .def_readonly("violations", &CheckResult::violations)
      .def_readonly("worst_margin", &CheckResult::worst_margin)
      .def_readonly("detail", &CheckResult::detail);

  m.def("check_lemma_beta",
        [](const std::vector<double>& betas) { return check_lemma_beta(betas); },
        py::arg("betas"));
  m.def("check_pinsker", &check_pinsker, py::arg("kind"), py::arg("variance"),
        py::arg("n"), py::arg("lo"), py::arg("hi"), py::arg("sigma2") = 0.0);

  py::class_<DeviationResult>(m, "DeviationResult")
      .def_readonly("trials", &DeviationResult::trials)
      .def_readonly("events", &DeviationResult::events)
      .def_readonly("empirical", &DeviationResult::empirical)
      .def_readonly("bound", &DeviationResult::bound)
      .def_readonly("slack", &DeviationResult::slack)
      .def_readonly("passed", &DeviationResult::passed);
  m.def("mc_maximal_inequality", &mc_maximal_inequality, py::arg("arm"),
        py::arg("mu"), py::arg("gamma"), py::arg("first"), py::arg("last"),
        py::arg("trials"), py::arg("seed") = 0, py::arg("threads") = 0,
        py::call_guard<py::gil_scoped_release>());

  // cli
  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"banditkit"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"),
      "Runs a CLI command in-process; returns (exit_code, stdout, stderr).");
}
