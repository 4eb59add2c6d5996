"""Vectorized tables over the reachable set of a game.

Compiles a game plus one or more information maps into flat numpy arrays:
per-history nature index, action entries, rewards, and per-stage label
indices for each map.  Every exact-enumeration computation in the library
(pushforwards, conditional expectations, projections) runs off these arrays.
"""

from __future__ import annotations

import numpy as np

from .core import BehavioralPolicy, InformationMap, ProductGame, enumerate_reachable


class Tables:
    def __init__(self, game: ProductGame, *maps: InformationMap, validate: bool = True):
        self.game = game
        self.histories = enumerate_reachable(game, maps[0], validate=validate)
        n = len(self.histories)
        L = game.num_stages
        nat_index = {w: k for k, w in enumerate(game.nature)}
        self.nature_idx = np.array([nat_index[h.nature] for h in self.histories])
        self.action_cols = np.array([h.actions for h in self.histories], dtype=np.int64)
        probs = game.probs()
        self.nat_prob = probs[self.nature_idx]
        self.rewards = np.array([game.reward(h.nature, h.actions) for h in self.histories])
        self.reward_inf_norm = float(np.max(np.abs(self.rewards))) if n else 0.0

        self._map_ids: dict[int, int] = {}
        self.maps: list[InformationMap] = []
        # per map: labels[i] (first-seen order), label_idx[i] (int array [n]),
        # n_labels[i]
        self.labels: list[list[list]] = []
        self.label_idx: list[list[np.ndarray]] = []
        for m in maps:
            self.add_map(m)

        # legal action count per stage must not depend on the label when the
        # engine is used (padded-product invariant)
        for i in range(L):
            for g in self.labels[0][i]:
                if game.num_actions(i, g) != game.stage_actions[i]:
                    raise ValueError(
                        "engine requires per-stage constant action counts"
                    )

    # ------------------------------------------------------------------ maps

    def add_map(self, info: InformationMap) -> int:
        if id(info) in self._map_ids:
            return self._map_ids[id(info)]
        game = self.game
        per_stage_labels, per_stage_idx = [], []
        for i in range(game.num_stages):
            seen: dict = {}
            idx = np.empty(len(self.histories), dtype=np.int64)
            for k, h in enumerate(self.histories):
                g = info.label(i, h.nature, h.actions)
                if g not in seen:
                    seen[g] = len(seen)
                idx[k] = seen[g]
            per_stage_labels.append(list(seen))
            per_stage_idx.append(idx)
        self._map_ids[id(info)] = len(self.maps)
        self.maps.append(info)
        self.labels.append(per_stage_labels)
        self.label_idx.append(per_stage_idx)
        return self._map_ids[id(info)]

    def map_index(self, info: InformationMap) -> int:
        return self.add_map(info)

    def refinement(self, fine: InformationMap, coarse: InformationMap):
        """Per-stage array mapping fine label index -> coarse label index.

        Only valid when ``fine`` is finer than ``coarse`` at that stage;
        callers that allow non-refining relaxations must not use this.
        """
        mf, mc = self.map_index(fine), self.map_index(coarse)
        out = []
        for i in range(self.game.num_stages):
            arr = np.full(len(self.labels[mf][i]), -1, dtype=np.int64)
            arr[self.label_idx[mf][i]] = self.label_idx[mc][i]
            out.append(arr)
        return out

    # -------------------------------------------------------------- policies

    def matrices(self, policy: BehavioralPolicy) -> list[np.ndarray]:
        """Per-stage [n_labels, A] matrix form of a policy table."""
        m = self.map_index(policy.info)
        mats = []
        for i in range(self.game.num_stages):
            A = self.game.stage_actions[i]
            rows = np.empty((len(self.labels[m][i]), A))
            for r, g in enumerate(self.labels[m][i]):
                vec = np.asarray(policy.table[(i, g)], dtype=float)
                if len(vec) != A:
                    raise ValueError("local vector length mismatch")
                rows[r] = vec
            mats.append(rows)
        return mats

    def to_policy(self, mats, info: InformationMap) -> BehavioralPolicy:
        m = self.map_index(info)
        table = {}
        for i in range(self.game.num_stages):
            for r, g in enumerate(self.labels[m][i]):
                table[(i, g)] = np.array(mats[i][r])
        return BehavioralPolicy(info, table)

    # ------------------------------------------------------------- operators

    def stage_prob(self, mats, map_idx: int, i: int) -> np.ndarray:
        """Per-history probability of the action actually played at stage i."""
        return mats[i][self.label_idx[map_idx][i], self.action_cols[:, i]]

    def pushforward(self, mats, map_idx: int):
        """Returns (Q over histories, list of per-stage per-history probs)."""
        pf = [self.stage_prob(mats, map_idx, i) for i in range(self.game.num_stages)]
        q = self.nat_prob.copy()
        for col in pf:
            q = q * col
        return q, pf

    def expect(self, q: np.ndarray, values: np.ndarray) -> float:
        return float(q @ values)

    def label_mass(self, q: np.ndarray, map_idx: int, i: int) -> np.ndarray:
        n = len(self.labels[map_idx][i])
        return np.bincount(self.label_idx[map_idx][i], weights=q, minlength=n)

    def segment_sum(self, values: np.ndarray, map_idx: int, i: int) -> np.ndarray:
        """Sum per (label at stage i, action at stage i): [n_labels, A]."""
        n = len(self.labels[map_idx][i])
        A = self.game.stage_actions[i]
        flat = self.label_idx[map_idx][i] * A + self.action_cols[:, i]
        return np.bincount(flat, weights=values, minlength=n * A).reshape(n, A)

    def expected_reward(self, policy_or_mats, info: InformationMap = None,
                        player: int = 0) -> float:
        if isinstance(policy_or_mats, BehavioralPolicy):
            mats = self.matrices(policy_or_mats)
            m = self.map_index(policy_or_mats.info)
        else:
            mats = policy_or_mats
            m = self.map_index(info)
        q, _ = self.pushforward(mats, m)
        return self.expect(q, self.rewards[:, player])


_cache: dict = {}


def tables_for(game: ProductGame, *maps: InformationMap) -> Tables:
    """Engine cache keyed by object identity; games and maps are immutable."""
    key = (id(game),)
    if key not in _cache:
        _cache[key] = Tables(game, maps[0])
    t = _cache[key]
    if t.game is not game:  # id reuse after gc
        t = _cache[key] = Tables(game, maps[0])
    for m in maps:
        t.add_map(m)
    return t
