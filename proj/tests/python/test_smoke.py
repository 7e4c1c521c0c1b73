import math

import pytest

import banditkit as bk


def test_kl_and_index():
    assert bk.kl_div(bk.Family.Bernoulli, 0.1, 0.9) == pytest.approx(1.7577796618689755, rel=1e-12)
    assert bk.kl_div(bk.Family.Gaussian, 1.0, 3.0, 2.0) == pytest.approx(1.0)
    assert bk.kl_plus(bk.Family.Bernoulli, 0.7, 0.3) == 0.0
    schedule = bk.ExplorationSchedule(1000, 10)
    assert bk.exploration_g(1, schedule) == pytest.approx(7.7056044182850098, rel=1e-12)
    assert bk.exploration_g(100, schedule) == 0.0
    u = bk.invert_kl_upper(bk.Family.Bernoulli, 0.3, 0.05)
    assert bk.kl_div(bk.Family.Bernoulli, 0.3, u) == pytest.approx(0.05, abs=1e-8)
    closed = bk.ucb_index(bk.Family.Gaussian, 0.0, 1, schedule, 1.0)
    assert closed == pytest.approx(math.sqrt(2 * 7.7056044182850098), rel=1e-12)


def test_run_episode():
    model = bk.BanditModel.bernoulli("pair", [0.9, 0.8])
    trace = bk.run_episode(bk.PolicyKind.KlUcbPlusPlus, model, 1000, 3)
    assert sum(trace.final_pull_counts) == 1000
    assert min(trace.final_pull_counts) >= 1
    assert trace.checkpoints[-1].t == 1000
    assert trace.final_regret == pytest.approx(0.1 * trace.final_pull_counts[1])
    again = bk.run_episode(bk.PolicyKind.KlUcbPlusPlus, model, 1000, 3)
    assert again.actions == trace.actions


def test_policy_object():
    policy = bk.make_policy(bk.policy_kind_from_string("moss"))
    policy.reset(bk.ExplorationSchedule(100, 3), bk.Family.Bernoulli)
    assert [policy.select() for _ in range(1)] == [0]
    policy.update(0, 1.0)
    assert policy.select() == 1
    assert policy.state.pull_counts == [1, 0, 0]


def test_run_experiment():
    config = bk.ExperimentConfig()
    config.models = [bk.BanditModel.gaussian("g", [0.0, 1.0], 1.0)]
    config.policies = [bk.PolicyKind.Ucb1, bk.PolicyKind.KlUcbPlusPlus]
    config.horizons = [200]
    config.replications = 4
    config.master_seed = 5
    result = bk.run_experiment(config)
    assert len(result.cells) == 2
    assert len(result.traces) == 2 and len(result.traces[0]) == 4
    assert result.cells[1].policy_name == "klucb++"
    assert sum(result.cells[0].mean_pulls) == pytest.approx(200)


def test_bounds_and_checks():
    assert bk.theorem1_bound(10_000, 2, 0.25, 0.0, 1.0) == pytest.approx(5376.0115370177612, rel=1e-12)
    model = bk.BanditModel.bernoulli("m", [0.9, 0.3])
    assert bk.theorem2_bound(model, 1, 0.2, 100_000) == pytest.approx(3185.4665205448844, rel=1e-10)
    with pytest.raises(ValueError):
        bk.theorem2_bound(model, 1, 0.5, 100_000)
    r = bk.check_lemma_beta([1.001, 2.0, 1000.0])
    assert r.passed and r.violations == 0
    assert bk.check_pinsker(bk.Family.Bernoulli, 0.1, 50, 0.0, 1.0).violations > 0
    mc = bk.mc_maximal_inequality(bk.ArmDistribution.bernoulli(0.5), 0.5, 0.2, 10, 50, 2000, 1)
    assert mc.trials == 2000 and mc.passed


def test_run_cli(tmp_path):
    code, out, _ = bk.run_cli(["verify", "lemmas"])
    assert code == 0 and "[PASS]" in out
    code, _, _ = bk.run_cli(["verify", "pinsker", "--variance", "0.1"])
    assert code == 2
    code, _, err = bk.run_cli(["simulate", "--config", str(tmp_path / "none.json")])
    assert code == 1 and "error" in err
