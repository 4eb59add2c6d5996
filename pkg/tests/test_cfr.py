import numpy as np
import pytest

from phide.cfr import CfrRun, cfr_iterate, counterfactual_rewards, run_cfr
from phide.core import uniform_policy
from phide.engine import tables_for
from phide.errors import ZeroReachLabel
from phide.zoo import build_matching_pennies, build_trade_comm


def test_counterfactual_pass_value_exact():
    # forcing PASS pays 0.6 no matter what anyone else does
    g, m = build_matching_pennies()
    pol = uniform_policy(g, m["original"])
    for lab in [(1, (0,)), (1, (1,))]:
        theta = counterfactual_rewards(g, m["original"], pol, 1, lab)
        assert abs(theta[2] - 0.6) < 1e-12
        # H and T are coin flips against the uniform opponent
        assert abs(theta[0] - 0.5) < 1e-9
        assert abs(theta[1] - 0.5) < 1e-9


def test_counterfactual_alice_values():
    # Bob uniform: Alice's actions are worth (1 + 0 + 0.6)/3 each
    g, m = build_matching_pennies()
    pol = uniform_policy(g, m["original"])
    theta = counterfactual_rewards(g, m["original"], pol, 0, (0, (0,)))
    assert np.allclose(theta, [1.6 / 3, 1.6 / 3], atol=1e-9)


def test_counterfactual_unknown_label():
    g, m = build_matching_pennies()
    pol = uniform_policy(g, m["original"])
    with pytest.raises(ZeroReachLabel):
        counterfactual_rewards(g, m["original"], pol, 1, (1, ("nope",)))


def test_exact_cfr_converges_on_perfect_recall_map():
    g, m = build_trade_comm()
    run = run_cfr(g, m["perfect_recall"], 1500, learner="regret_matching_plus")
    t = tables_for(g, m["perfect_recall"])
    v = t.expected_reward(run.average_policy())
    assert v > 0.97
    assert run.trace["payoff"][-1] > 0.97


def test_trace_shapes_and_ranges():
    g, m = build_matching_pennies()
    run = run_cfr(g, m["original"], 50, seed=0)
    assert len(run.trace["payoff"]) == 50
    assert all(0.0 <= p <= 1.0 for p in run.trace["payoff"])
    assert all(l == 0.0 for l in run.trace["lambda"])
    assert all(p == 0.0 for p in run.trace["penalty_mass"])
    assert all(r >= 0.0 for r in run.trace["sum_pos_local"])


def test_average_policy_is_valid():
    g, m = build_matching_pennies()
    run = run_cfr(g, m["original"], 100, seed=3, randomize_init=True)
    run.average_policy().validate()
    run.current_policy().validate()


def test_determinism_given_seed():
    g, m = build_matching_pennies()
    a = run_cfr(g, m["original"], 80, mode="mc", seed=42, randomize_init=True)
    b = run_cfr(g, m["original"], 80, mode="mc", seed=42, randomize_init=True)
    assert a.trace["payoff"] == b.trace["payoff"]
    c = run_cfr(g, m["original"], 80, mode="mc", seed=43, randomize_init=True)
    assert a.trace["payoff"] != c.trace["payoff"]


def test_mc_mode_reaches_pass_value():
    # from the uniform start, sampled CFR on the original map settles on the
    # safe PASS action
    g, m = build_matching_pennies()
    run = run_cfr(g, m["original"], 2000, mode="mc", seed=0)
    t = tables_for(g, m["original"])
    v = t.expected_reward(run.average_policy())
    assert abs(v - 0.6) < 0.05


def test_cfr_iterate_returns_policy():
    g, m = build_matching_pennies()
    run = CfrRun(g, m["original"], seed=1)
    pol = cfr_iterate(run)
    pol.validate()
    assert run.iteration == 1


def test_invalid_mode():
    g, m = build_matching_pennies()
    with pytest.raises(ValueError):
        CfrRun(g, m["original"], mode="sampled")


def test_local_regret_accounting_nonnegative_sum():
    g, m = build_matching_pennies()
    run = run_cfr(g, m["original"], 200, seed=5)
    local = run.accounting.local_regrets(200)
    total = sum(float(np.maximum(r, 0.0).sum()) for r in local.values())
    assert abs(total * 200 - run.trace["sum_pos_local"][-1]) < 1e-9
    # regret matching keeps positive local regrets bounded and shrinking
    early = run.trace["sum_pos_local"][19] / 20
    late = run.trace["sum_pos_local"][-1] / 200
    assert late <= early + 1e-9
