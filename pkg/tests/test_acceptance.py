"""Acceptance gate: one test per headline property, each printing a PASS or
FAIL line with the measured quantity.  Runtime budgets are asserted loosely
(wall clock on a loaded machine is noisy)."""

import time

import numpy as np

from phide.cfr import run_cfr
from phide.core import enumerate_reachable, random_policy, uniform_policy
from phide.engine import tables_for
from phide.experiments import run_experiment
from phide.games import best_response_value
from phide.hiding import PenaltySchedule, regret_report, run_ph
from phide.infomaps import is_implementable, project
from phide.relaxation import RelaxationProblem, rir_run
from phide.zoo import (TradeCommSpec, build_matching_pennies, build_trade_comm,
                       random_game, trade_comm_optimal_value)

# Exact optimal team value of Trade Comm with 3 items and 2 messages,
# 5/9, frozen from:
#   python3 -c "from phide.zoo import trade_comm_optimal_value as v; print(repr(v(3, 2)))"
TRADE_COMM_32_VALUE = 0.5555555555555556


def report(criterion: str, ok: bool, detail: str):
    print(f"{'PASS' if ok else 'FAIL'}  {criterion}: {detail}", flush=True)
    assert ok, f"{criterion}: {detail}"


def lift(game, fine, coarse_policy):
    out = uniform_policy(game, fine)
    for h in enumerate_reachable(game, fine, validate=False):
        for i in range(game.num_stages):
            g = fine.label(i, h.nature, h.actions)
            out.table[(i, g)] = np.array(
                coarse_policy.local(i, h.nature, h.actions))
    return out


def test_criterion_1_projector_laws():
    t0 = time.time()
    rng = np.random.default_rng(0)
    worst = 0.0
    for s in range(200):
        game, coarse, fine = random_game(s)
        base = random_policy(game, fine, rng)

        # projecting any policy gives an implementable one; idempotence
        mu = random_policy(game, fine, rng)
        gam = project(game, coarse, fine, base, mu)
        assert is_implementable(game, coarse, gam, atol=1e-12)
        gam2 = project(game, coarse, fine, base, lift(game, fine, gam))
        for k in gam.table:
            worst = max(worst, float(np.max(np.abs(gam.table[k] - gam2.table[k]))))

        # fixed point iff implementable, both directions
        coarse_pol = random_policy(game, coarse, rng)
        impl = lift(game, fine, coarse_pol)
        for pol in (impl, mu):
            proj = lift(game, fine, project(game, coarse, fine, base, pol))
            gap = max(float(np.max(np.abs(pol.table[k] - proj.table[k])))
                      for k in pol.table)
            assert (gap <= 1e-12) == is_implementable(game, coarse, pol,
                                                      atol=1e-12)
    el = time.time() - t0
    report("criterion 1 (projector laws)",
           worst <= 1e-12 and el < 30,
           f"200 games, idempotence gap {worst:.2e}, {el:.1f}s")


def test_criterion_2_monotone_traces():
    t0 = time.time()
    rng = np.random.default_rng(1)
    worst = np.inf
    g1, m1 = build_matching_pennies()
    g2, m2 = build_trade_comm()
    specs = [(g1, m1["original"], m1["relaxed"]),
             (g2, m2["original"], m2["perfect_recall"])]
    for game, coarse, fine in specs:
        for lam in (0.05, 0.5, 5.0):
            prob = RelaxationProblem(game, coarse, fine, lam)
            for _ in range(100):
                mu0 = random_policy(game, fine, rng)
                _, _, trace = rir_run(prob, mu0, iterations=25)
                worst = min(worst, float(np.min(np.diff(trace))))
    el = time.time() - t0
    report("criterion 2 (monotone penalized objective)",
           worst >= -1e-9 and el < 120,
           f"600 runs, worst step {worst:.2e}, {el:.1f}s")


def test_criterion_3_reduction_bitwise():
    import tempfile, os
    from phide.experiments import run_and_write
    t0 = time.time()
    ok = True
    for game_spec, cmap in (({"name": "matching_pennies"}, "original"),
                            ({"name": "trade_comm"}, "original")):
        for learner in ("regret_matching", "ftrl_entropic"):
            for seed in (0, 1, 2):
                base = dict(game=game_spec, iterations=200, repeats=1,
                            randomize_init=True, seed=seed, learner=learner,
                            coarse_map=cmap)
                d1, d2 = tempfile.mkdtemp(), tempfile.mkdtemp()
                run_and_write({**base, "algorithm": "cfr"}, d1)
                run_and_write({**base, "algorithm": "ph", "fine_map": cmap,
                               "lambda": 0.0}, d2)
                a = open(os.path.join(d1, "runs.csv"), "rb").read()
                b = open(os.path.join(d2, "runs.csv"), "rb").read()
                ok &= a == b
    el = time.time() - t0
    report("criterion 3 (reduction to plain solver, bitwise CSV)", ok,
           f"2 games x 2 learners x 3 seeds x 200 iters, {el:.1f}s")


def _bound_runs():
    g1, m1 = build_matching_pennies()
    g2, m2 = build_trade_comm()
    out = []
    for game, coarse, fine in ((g1, m1["original"], m1["relaxed"]),
                               (g2, m2["original"], m2["perfect_recall"])):
        run = run_ph(game, coarse, fine, 200,
                     schedule=PenaltySchedule("constant", 0.5),
                     learner="regret_matching", seed=11, randomize_init=True)
        out.append((game.name, regret_report(run, cap=20_000_000)))
    return out


def test_criterion_4_and_5_regret_bounds():
    t0 = time.time()
    reports = _bound_runs()
    ok4 = ok5 = True
    details = []
    for name, rep in reports:
        assert rep["rT_lower_bound"] is not None
        ok4 &= rep["rT_lower_bound"] <= rep["sum_pos_local"] + 1e-9
        ok5 &= (rep["penalty_avg"]
                <= rep["sum_pos_local"] + 2 * rep["reward_inf_norm"] + 1e-9)
        details.append(f"{name}: regret {rep['rT_lower_bound']:.4f} <= "
                       f"{rep['sum_pos_local']:.4f}")
    el = time.time() - t0
    report("criterion 4 (auxiliary regret bounded by local regrets)",
           ok4 and el < 300, "; ".join(details) + f", {el:.1f}s")
    report("criterion 5 (average penalty within sizing bound)", ok5,
           "; ".join(f"{n}: pen {r['penalty_avg']:.4f} <= "
                     f"{r['sum_pos_local'] + 2 * r['reward_inf_norm']:.4f}"
                     for n, r in reports))


def test_criterion_6_sampled_learning_replication():
    t0 = time.time()
    base = dict(game={"name": "matching_pennies"}, iterations=400,
                repeats=200, randomize_init=True, seed=2024, mode="mc",
                learner="regret_matching", coarse_map="original",
                threshold=0.95)
    cfr = run_experiment({**base, "algorithm": "cfr"})
    ph = run_experiment({**base, "algorithm": "ph", "fine_map": "relaxed",
                         "lambda": 0.05})
    r_cfr = cfr["summary"]["success_rate"]
    r_ph = ph["summary"]["success_rate"]
    el = time.time() - t0
    report("criterion 6 (sampled-mode success rates)",
           r_cfr <= 0.05 and r_ph >= 0.30 and el < 600,
           f"plain {r_cfr:.1%} (need <= 5%), penalized {r_ph:.1%} "
           f"(need >= 30%), 200 repeats, {el:.1f}s")


def test_criterion_7_trade_comm_ordering():
    t0 = time.time()
    details, ok = [], True
    for n in (2, 3):
        game, maps = build_trade_comm(TradeCommSpec(n, 2))
        reps, iters = 100, 400
        means = {}
        means["baseline"] = np.mean([
            run_cfr(game, maps["original"], iters,
                    learner="regret_matching_plus", seed=s,
                    randomize_init=True, mode="mc").trace["payoff"][-1]
            for s in range(reps)])
        for mname in ("perfect_recall", "cheat"):
            means[mname] = np.mean([
                run_ph(game, maps["original"], maps[mname], iters,
                       schedule=PenaltySchedule("ramp", 2.0, horizon=iters),
                       learner="regret_matching_plus", seed=s,
                       randomize_init=True, mode="mc",
                       keep_history=False).trace["payoff"][-1]
                for s in range(reps)])
        ok &= means["perfect_recall"] >= means["baseline"] + 0.05
        ok &= means["cheat"] > means["baseline"]
        details.append(f"({n},2): base {means['baseline']:.3f}, "
                       f"recall-map {means['perfect_recall']:.3f}, "
                       f"cheat-map {means['cheat']:.3f}")
    el = time.time() - t0
    report("criterion 7 (hidden-information maps beat the baseline)",
           ok and el < 600, "; ".join(details) + f", {el:.0f}s")


def test_criterion_8_optimal_values():
    t0 = time.time()
    g1, m1 = build_matching_pennies()
    v_mp = best_response_value(g1, m1["original"], 0)
    g2, m2 = build_trade_comm()
    v_tc = best_response_value(g2, m2["original"], 0)
    v_32 = trade_comm_optimal_value(3, 2)
    ok = (abs(v_mp - 1.0) < 1e-12 and abs(v_tc - 1.0) < 1e-12
          and v_32 == TRADE_COMM_32_VALUE)
    el = time.time() - t0
    report("criterion 8 (exact optimal values)", ok,
           f"pennies {v_mp}, trade(2,2) {v_tc}, trade(3,2) {v_32!r} "
           f"(fixture {TRADE_COMM_32_VALUE!r}), {el:.1f}s")


def test_criterion_9_cfr_convergence():
    t0 = time.time()
    game, maps = build_trade_comm()
    run = run_cfr(game, maps["perfect_recall"], 5000,
                  learner="regret_matching_plus")
    v = tables_for(game, maps["perfect_recall"]).expected_reward(
        run.average_policy())
    el = time.time() - t0
    report("criterion 9 (solver reaches the known optimum)",
           abs(v - 1.0) < 0.01, f"average-policy value {v:.5f}, {el:.1f}s")
