"""Batch experiment harness: seeded repeats of a solver on a named game,
per-iteration records, nearest-rank quantile summaries, CSV emission.

Output is deterministic byte for byte given the config and master seed.  The
environment variable PHIDE_SEED overrides the configured master seed.
"""

from __future__ import annotations

import csv
import os

import numpy as np

from .cfr import CfrRun
from .core import BehavioralPolicy, uniform_policy
from .engine import tables_for
from .errors import ConfigError
from .hiding import PenaltySchedule, PhRun
from .infomaps import project_matrices
from .relaxation import RelaxationProblem, proximal_step
from .zoo import (TradeCommSpec, build_matching_pennies, build_trade_comm,
                  random_game)

COLUMNS = ("run", "seed", "t", "expected_payoff_projected", "penalty_mass",
           "sum_pos_local_regret", "lambda_t")


def load_game(spec: dict):
    """Returns (game, {map name: map}) from a config game record."""
    name = spec.get("name")
    if name == "matching_pennies":
        return build_matching_pennies()
    if name == "trade_comm":
        return build_trade_comm(TradeCommSpec(spec.get("n", 2), spec.get("m", 2)))
    if name == "random":
        game, coarse, fine = random_game(spec.get("seed", 0))
        return game, {"coarse": coarse, "fine": fine}
    raise ConfigError(f"unknown game name {name!r}")


def _require(config, key, default=None):
    if key in config:
        return config[key]
    if default is not None:
        return default
    raise ConfigError(f"missing config key {key!r}")


def _schedule(config) -> PenaltySchedule:
    return PenaltySchedule(
        kind=config.get("schedule", "constant"),
        value=float(config.get("lambda", 0.05)),
        horizon=int(config.get("iterations", 0)),
        target=float(config.get("target", 0.0)),
        factor=float(config.get("factor", 1.1)),
    )


def _one_run(config, game, maps, seed: int):
    algo = _require(config, "algorithm")
    iters = int(_require(config, "iterations"))
    learner = config.get("learner", "regret_matching")
    eta = config.get("eta")
    randomize = bool(config.get("randomize_init", False))
    mode = config.get("mode", "exact")
    coarse = maps[config.get("coarse_map", "original")]

    if algo == "cfr":
        run = CfrRun(game, coarse, learner=learner, eta=eta, seed=seed,
                     randomize_init=randomize, mode=mode)
        for _ in range(iters):
            run.iterate()
        return run.trace

    fine = maps[config.get("fine_map", "relaxed")]
    if algo == "ph":
        run = PhRun(game, coarse, fine, schedule=_schedule(config),
                    learner=learner, eta=eta, seed=seed,
                    randomize_init=randomize, mode=mode, keep_history=False)
        for _ in range(iters):
            run.iterate()
        return run.trace

    if algo == "rir":
        return _rir_trace(config, game, coarse, fine, seed, iters)
    raise ConfigError(f"unknown algorithm {algo!r}")


def _rir_trace(config, game, coarse, fine, seed, iters):
    lam = float(config.get("lambda", 0.5))
    problem = RelaxationProblem(game, coarse, fine, lam)
    t = problem._t
    rng = np.random.default_rng(seed)
    if config.get("randomize_init", False):
        table = {}
        mu = uniform_policy(game, fine)
        for key, vec in mu.table.items():
            table[key] = rng.dirichlet(np.ones(len(vec)))
        mu = BehavioralPolicy(fine, table)
    else:
        mu = uniform_policy(game, fine)
    mode = config.get("prox_mode", "backward_induction")
    trace = {"payoff": [], "penalty_mass": [], "sum_pos_local": [], "lambda": []}
    rewards = t.rewards[:, 0]
    for _ in range(iters):
        mats = t.matrices(mu)
        gam = project_matrices(t, mats, problem.mf, problem.mc, problem.q0)
        q_gam, _ = t.pushforward(gam, problem.mc)
        pen = 0.0
        for i in range(game.num_stages):
            d = mats[i] - gam[i][problem.f2c[i]]
            pen += float(np.sum(problem.weights[i] * np.sum(d * d, axis=1)))
        trace["payoff"].append(t.expect(q_gam, rewards))
        trace["penalty_mass"].append(pen)
        trace["sum_pos_local"].append(0.0)
        trace["lambda"].append(lam)
        gamma = t.to_policy(gam, coarse)
        mu = proximal_step(problem, gamma, start=mu, mode=mode)
    return trace


def run_experiment(config: dict) -> dict:
    """Executes ``repeats`` independent seeded runs and returns records plus
    a summary; see COLUMNS for the per-iteration record fields."""
    master = int(os.environ.get("PHIDE_SEED", config.get("seed", 0)))
    repeats = int(config.get("repeats", 1))
    game, maps = load_game(_require(config, "game"))
    seeds = [int(s) for s in np.random.SeedSequence(master).generate_state(repeats)]
    records = []
    for k, seed in enumerate(seeds):
        trace = _one_run(config, game, maps, seed)
        records.append({"run": k, "seed": seed, "trace": trace})
    quantiles = config.get("quantiles", [0.1, 0.9])
    threshold = config.get("threshold")
    summary = summarize(records, quantiles, threshold=threshold)
    return {"config": dict(config), "master_seed": master,
            "records": records, "summary": summary}


def nearest_rank(values: np.ndarray, q: float) -> float:
    """Nearest-rank quantile: the ceil(qN)-th smallest value."""
    s = np.sort(np.asarray(values, dtype=float))
    k = max(int(np.ceil(q * len(s))) - 1, 0)
    return float(s[min(k, len(s) - 1)])


def summarize(records, quantiles=(0.1, 0.9), threshold: float = None) -> dict:
    if not records:
        raise ValueError("no records to summarize")
    lengths = {len(r["trace"]["payoff"]) for r in records}
    if len(lengths) != 1:
        raise ValueError("records have unequal lengths")
    P = np.array([r["trace"]["payoff"] for r in records])
    out = {"t": list(range(1, P.shape[1] + 1)),
           "mean": [float(x) for x in P.mean(axis=0)]}
    for q in quantiles:
        out[f"q{int(round(q * 100))}"] = [nearest_rank(P[:, j], q)
                                          for j in range(P.shape[1])]
    if threshold is not None:
        finals = P[:, -1]
        out["success_rate"] = float(np.mean(finals >= threshold))
    return out


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def write_runs_csv(result: dict, path: str):
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(COLUMNS)
        for rec in result["records"]:
            tr = rec["trace"]
            for j in range(len(tr["payoff"])):
                w.writerow([rec["run"], rec["seed"], j + 1,
                            _fmt(tr["payoff"][j]), _fmt(tr["penalty_mass"][j]),
                            _fmt(tr["sum_pos_local"][j]), _fmt(tr["lambda"][j])])


def write_summary_csv(result: dict, path: str):
    s = result["summary"]
    qcols = [k for k in s if k.startswith("q")]
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["t", "mean"] + qcols)
        for j, t in enumerate(s["t"]):
            w.writerow([t, _fmt(s["mean"][j])] + [_fmt(s[c][j]) for c in qcols])
        if "success_rate" in s:
            w.writerow(["success_rate", _fmt(s["success_rate"])]
                       + [""] * len(qcols))


def run_and_write(config: dict, out_dir: str) -> dict:
    os.makedirs(out_dir, exist_ok=True)
    result = run_experiment(config)
    write_runs_csv(result, os.path.join(out_dir, "runs.csv"))
    write_summary_csv(result, os.path.join(out_dir, "summary.csv"))
    return result
