"""Counterfactual regret minimization over a fixed information map.

Exact-expectation mode enumerates the reachable set; the optional Monte
Carlo mode does outcome sampling with a uniform exploration mix.  Runs are
deterministic given the seed.
"""

from __future__ import annotations

import numpy as np

from .core import BehavioralPolicy, InformationMap, ProductGame
from .engine import Tables, tables_for
from .errors import ZeroReachLabel
from .learners import LearnerBank

EPS_FLOOR = 1e-6


def floored_mats(mats, eps: float = EPS_FLOOR):
    return [(1.0 - eps) * m + eps / m.shape[1] for m in mats]


def make_banks(t: Tables, map_idx: int, stages, kind: str, eta, rng,
               randomize_init: bool):
    """One learner bank per stage; rows follow the engine's label order."""
    banks = {}
    for i in stages:
        n_labels = len(t.labels[map_idx][i])
        A = t.game.stage_actions[i]
        warm = None
        if randomize_init:
            warm = np.vstack([rng.dirichlet(np.ones(A)) for _ in range(n_labels)])
        banks[i] = LearnerBank(kind, n_labels, A, eta=eta, warm=warm)
    return banks


def counterfactual_matrix(t: Tables, map_idx: int, stage: int,
                          qf: np.ndarray, pf_stage: np.ndarray,
                          values: np.ndarray):
    """Conditional forced-action expectations for every (label, action) of a
    stage: entry [g, d] is E[values | label = g] with stage forced to d."""
    mass = t.label_mass(qf, map_idx, stage)
    if np.any(mass <= 0.0):
        raise ZeroReachLabel(f"zero conditioning mass at stage {stage}")
    ratio = qf / pf_stage
    num = t.segment_sum(ratio * values, map_idx, stage)
    return num / mass[:, None], mass


class RegretAccounting:
    """Tracks cumulative fed rewards and realized values per label."""

    def __init__(self, t: Tables, map_idx: int, stages):
        self.cum_theta = {
            i: np.zeros((len(t.labels[map_idx][i]), t.game.stage_actions[i]))
            for i in stages
        }
        self.cum_real = {i: np.zeros(len(t.labels[map_idx][i])) for i in stages}

    def update(self, stage: int, theta: np.ndarray, play: np.ndarray):
        self.cum_theta[stage] += theta
        self.cum_real[stage] += np.sum(theta * play, axis=1)

    def sum_pos(self) -> float:
        total = 0.0
        for i, ct in self.cum_theta.items():
            total += float(np.sum(np.maximum(ct.max(axis=1) - self.cum_real[i], 0.0)))
        return total

    def local_regrets(self, horizon: int):
        out = {}
        for i, ct in self.cum_theta.items():
            out[i] = (ct.max(axis=1) - self.cum_real[i]) / horizon
        return out


class CfrRun:
    def __init__(self, game: ProductGame, info: InformationMap, *,
                 learner: str = "regret_matching", eta: float = None,
                 seed: int = 0, randomize_init: bool = False,
                 mode: str = "exact", player: int = 0):
        if mode not in ("exact", "mc"):
            raise ValueError("mode must be 'exact' or 'mc'")
        self.game = game
        self.info = info
        self.player = player
        self.mode = mode
        self.t = tables_for(game, info)
        self.m = self.t.map_index(info)
        self.rng = np.random.default_rng(seed)
        self.stages = list(range(game.num_stages))
        self.banks = make_banks(self.t, self.m, self.stages, learner, eta,
                                self.rng, randomize_init)
        self.accounting = RegretAccounting(self.t, self.m, self.stages)
        self.avg_num = {
            i: np.zeros((len(self.t.labels[self.m][i]), game.stage_actions[i]))
            for i in self.stages
        }
        self.avg_den = {i: np.zeros(len(self.t.labels[self.m][i]))
                        for i in self.stages}
        self.iteration = 0
        self.trace = {"payoff": [], "penalty_mass": [], "sum_pos_local": [],
                      "lambda": []}

    # ------------------------------------------------------------------

    def current_mats(self):
        return [self.banks[i].decide() for i in self.stages]

    def iterate(self):
        """One CFR step; returns the iterate policy in matrix form."""
        mats = self.current_mats()
        if self.mode == "exact":
            thetas = self._exact_thetas(mats)
        else:
            thetas = self._sampled_thetas(mats)
        for i in self.stages:
            self.accounting.update(i, thetas[i], mats[i])
            self.banks[i].observe(thetas[i])
        q_raw, _ = self.t.pushforward(mats, self.m)
        self._update_average(mats, q_raw)
        self.iteration += 1
        self.trace["payoff"].append(
            self.t.expect(q_raw, self.t.rewards[:, self.player]))
        self.trace["penalty_mass"].append(0.0)
        self.trace["sum_pos_local"].append(self.accounting.sum_pos())
        self.trace["lambda"].append(0.0)
        return mats

    def _exact_thetas(self, mats):
        fl = floored_mats(mats)
        qf, pf = self.t.pushforward(fl, self.m)
        thetas = {}
        for i in self.stages:
            vals = self.t.rewards[:, self.game.player_of_stage[i]]
            thetas[i], _ = counterfactual_matrix(self.t, self.m, i, qf, pf[i], vals)
        return thetas

    def _sampled_thetas(self, mats):
        """Chance sampling: draw one Nature state per episode and run the
        exact update restricted to its reachable slice.  Labels with no mass
        under the draw get a zero reward vector that episode."""
        w_idx = self.rng.choice(len(self.game.nature), p=self.game.probs())
        fl = floored_mats(mats)
        qf, pf = self.t.pushforward(fl, self.m)
        qm = np.where(self.t.nature_idx == w_idx, qf, 0.0)
        thetas = {}
        for i in self.stages:
            vals = self.t.rewards[:, self.game.player_of_stage[i]]
            mass = self.t.label_mass(qm, self.m, i)
            num = self.t.segment_sum((qm / pf[i]) * vals, self.m, i)
            ok = mass > 0.0
            theta = np.zeros_like(num)
            theta[ok] = num[ok] / mass[ok, None]
            thetas[i] = theta
        return thetas

    def _update_average(self, mats, q_raw):
        for i in self.stages:
            w = self.t.label_mass(q_raw, self.m, i)
            self.avg_num[i] += w[:, None] * mats[i]
            self.avg_den[i] += w

    # ------------------------------------------------------------------

    def average_policy(self) -> BehavioralPolicy:
        mats = []
        for i in self.stages:
            den = self.avg_den[i]
            A = self.game.stage_actions[i]
            rows = np.full((len(den), A), 1.0 / A)
            ok = den > 0
            rows[ok] = self.avg_num[i][ok] / den[ok, None]
            mats.append(rows)
        return self.t.to_policy(mats, self.info)

    def current_policy(self) -> BehavioralPolicy:
        return self.t.to_policy(self.current_mats(), self.info)


def counterfactual_rewards(game: ProductGame, info: InformationMap,
                           policy: BehavioralPolicy, stage: int, label,
                           player: int = None) -> np.ndarray:
    """Exact counterfactual reward vector of one (stage, label) slot under an
    epsilon-floored version of ``policy``."""
    t = tables_for(game, info, policy.info)
    m = t.map_index(info)
    mats = floored_mats(t.matrices(policy))
    qf, pf = t.pushforward(mats, t.map_index(policy.info))
    p = game.player_of_stage[stage] if player is None else player
    theta, _ = counterfactual_matrix(t, m, stage, qf, pf[stage],
                                     t.rewards[:, p])
    try:
        row = t.labels[m][stage].index(label)
    except ValueError:
        raise ZeroReachLabel(f"label {label!r} not reachable at stage {stage}")
    return theta[row]


def cfr_iterate(run: CfrRun):
    """One step of the run; returns the iterate policy."""
    mats = run.iterate()
    return run.t.to_policy(mats, run.info)


def run_cfr(game: ProductGame, info: InformationMap, iterations: int,
            **kwargs) -> CfrRun:
    run = CfrRun(game, info, **kwargs)
    for _ in range(iterations):
        run.iterate()
    return run
