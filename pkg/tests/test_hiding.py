import numpy as np
import pytest

from phide.cfr import CfrRun, counterfactual_rewards
from phide.core import uniform_policy
from phide.engine import tables_for
from phide.hiding import (PenaltySchedule, PhRun, local_reward_vector,
                          penalty_term, ph_iterate, regret_report, run_ph)
from phide.infomaps import is_implementable
from phide.zoo import build_matching_pennies, build_trade_comm


def test_schedule_kinds():
    s = PenaltySchedule("constant", 0.3)
    s.reset()
    assert s.current(1) == s.current(500) == 0.3
    r = PenaltySchedule("ramp", 1.0, horizon=10)
    r.reset()
    assert abs(r.current(1) - 0.1) < 1e-12
    assert r.current(10) == 1.0
    assert r.current(25) == 1.0
    c = PenaltySchedule("controller", 0.5, target=0.8, factor=2.0)
    c.reset()
    assert c.current(1) == 0.5
    c.update(0.9)
    assert c.current(2) == 1.0
    c.update(0.1)
    assert c.current(3) == 0.5
    with pytest.raises(ValueError):
        PenaltySchedule("exponential", 1.0)
    with pytest.raises(ValueError):
        PenaltySchedule("constant", -0.1)


def test_reduction_to_cfr_bitwise():
    # with the relaxed map equal to the original one and a zero penalty, the
    # run must match plain solver traces bit for bit
    for build in (build_matching_pennies, build_trade_comm):
        g, m = build()
        for kind in ("regret_matching", "ftrl_entropic"):
            for seed in (0, 1):
                cfr = CfrRun(g, m["original"], learner=kind, seed=seed,
                             randomize_init=True)
                ph = PhRun(g, m["original"], m["original"],
                           schedule=PenaltySchedule("constant", 0.0),
                           learner=kind, seed=seed, randomize_init=True)
                for _ in range(40):
                    cfr.iterate()
                    ph.iterate()
                assert cfr.trace["payoff"] == ph.trace["payoff"]
                assert cfr.trace["sum_pos_local"] == ph.trace["sum_pos_local"]
                assert ph.trace["penalty_mass"] == [0.0] * 40


def test_projected_policy_always_implementable():
    g, m = build_matching_pennies()
    run = PhRun(g, m["original"], m["relaxed"],
                schedule=PenaltySchedule("constant", 0.5), seed=2,
                randomize_init=True)
    for _ in range(10):
        gam = ph_iterate(run)
        gam.validate()
        assert is_implementable(g, m["original"], gam)


def test_penalty_term_value():
    g, m = build_matching_pennies()
    from phide.core import BehavioralPolicy, History
    mu = uniform_policy(g, m["relaxed"])
    gam = uniform_policy(g, m["original"])
    h = History((0,), (1, 0))
    assert penalty_term(3.0, mu, gam, 1, h) == 0.0
    mu.table[(1, m["relaxed"].label(1, (0,), (1, 0)))] = np.array([1.0, 0.0, 0.0])
    want = 3.0 * ((1 - 1 / 3) ** 2 + 2 * (1 / 3) ** 2)
    assert abs(penalty_term(3.0, mu, gam, 1, h) - want) < 1e-12


def test_local_reward_vector_matches_counterfactual_at_zero_penalty():
    g, m = build_matching_pennies()
    pol = uniform_policy(g, m["relaxed"])
    for lab in [(1, (0, 0)), (1, (1, 1))]:
        theta = local_reward_vector(g, m["relaxed"], m["relaxed"], pol, 0.0,
                                    1, lab)
        ref = counterfactual_rewards(g, m["relaxed"], pol, 1, lab)
        assert np.array_equal(theta, ref)


def test_local_reward_vector_penalizes_disagreement():
    g, m = build_matching_pennies()
    pol = uniform_policy(g, m["relaxed"])
    lab = (1, (0, 0))
    # uniform policy projects to itself, so the linear term vanishes
    theta0 = local_reward_vector(g, m["original"], m["relaxed"], pol, 0.0, 1, lab)
    theta1 = local_reward_vector(g, m["original"], m["relaxed"], pol, 2.0, 1, lab)
    assert np.allclose(theta0, theta1, atol=1e-12)
    # a policy that uses the relaxed information gets pulled toward the mean
    pol.table[(1, (1, (0, 0)))] = np.array([1.0, 0.0, 0.0])
    pol.table[(1, (1, (1, 0)))] = np.array([0.0, 1.0, 0.0])
    t0 = local_reward_vector(g, m["original"], m["relaxed"], pol, 0.0, 1, lab)
    t1 = local_reward_vector(g, m["original"], m["relaxed"], pol, 2.0, 1, lab)
    assert not np.allclose(t0, t1)
    # the played action (H) is discouraged relative to the projection
    assert t1[0] - t0[0] < 0


def test_non_refining_relaxation_runs():
    # the cheating map is not finer than the original one; the general
    # linearization path must still produce valid iterates
    g, m = build_trade_comm()
    run = run_ph(g, m["original"], m["cheat"], 15,
                 schedule=PenaltySchedule("constant", 0.5), seed=3,
                 randomize_init=True)
    assert not all(run.refines[i] for i in run.stages)
    gam = run.projected_policy()
    gam.validate()
    assert is_implementable(g, m["original"], gam)


def test_regret_report_bounds_matching_pennies():
    g, m = build_matching_pennies()
    run = run_ph(g, m["original"], m["relaxed"], 150,
                 schedule=PenaltySchedule("constant", 0.5), seed=4,
                 randomize_init=True)
    rep = regret_report(run)
    assert rep["iterations"] == 150
    assert rep["sum_pos_local"] >= 0.0
    assert rep["thm_bound_holds"]
    assert rep["prop_bound_holds"]
    assert rep["rT_lower_bound"] <= rep["sum_pos_local"] + 1e-9


def test_regret_report_needs_history_for_the_bound():
    g, m = build_matching_pennies()
    run = run_ph(g, m["original"], m["relaxed"], 20,
                 schedule=PenaltySchedule("constant", 0.5), seed=5,
                 keep_history=False)
    rep = regret_report(run)
    assert rep["rT_lower_bound"] is None
    assert rep["prop_bound_holds"] is not None
    with pytest.raises(ValueError):
        regret_report(PhRun(g, m["original"], m["relaxed"]))


def test_mc_mode_deterministic_and_valid():
    g, m = build_matching_pennies()
    a = run_ph(g, m["original"], m["relaxed"], 60, mode="mc", seed=6,
               schedule=PenaltySchedule("constant", 0.05), randomize_init=True)
    b = run_ph(g, m["original"], m["relaxed"], 60, mode="mc", seed=6,
               schedule=PenaltySchedule("constant", 0.05), randomize_init=True)
    assert a.trace["payoff"] == b.trace["payoff"]
    assert is_implementable(g, m["original"], a.projected_policy())


def test_ph_beats_direct_learning_on_matching_pennies():
    # with enough penalty the relaxed learners coordinate on signaling
    g, m = build_matching_pennies()
    run = run_ph(g, m["original"], m["relaxed"], 400,
                 schedule=PenaltySchedule("ramp", 2.0, horizon=400), seed=7,
                 randomize_init=True)
    assert run.trace["payoff"][-1] > 0.95
