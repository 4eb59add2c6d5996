"""Core types: games in product form, information maps, behavioral policies.

A game lives on the product set Omega x [W]^L.  Histories are pairs
(nature value, action tuple of length L); actions are 0-based integers.
Information maps assign each stage a label computed from the nature value
and the actions played before that stage.  Policies are tables from
(stage, label) to a probability vector over the legal actions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, NamedTuple, Optional, Sequence

import numpy as np

from .errors import IllegalSupport, WellPosednessViolation

PROB_TOL = 1e-12


class History(NamedTuple):
    nature: tuple
    actions: tuple


# Tokens for declaratively built information maps: ("nature", k) reveals the
# k-th component of the nature value, ("action", j) reveals the action taken
# at stage j (0-based, must satisfy j < stage).
RevealToken = tuple


class InformationMap:
    """Per-stage labeling of histories.

    Each stage holds either a list of reveal tokens or an arbitrary callable
    ``fn(nature_value, actions) -> hashable`` that must only depend on the
    actions played before that stage.  Labels are tagged with the stage index
    so that labels from different stages never collide.
    """

    def __init__(self, stages, name: str = ""):
        self.name = name
        self._fns = []
        self.revealed: list[Optional[tuple]] = []
        for spec in stages:
            if callable(spec):
                self._fns.append(spec)
                self.revealed.append(None)
            else:
                tokens = tuple((str(kind), int(idx)) for kind, idx in spec)
                for kind, _ in tokens:
                    if kind not in ("nature", "action"):
                        raise ValueError(f"unknown reveal token kind {kind!r}")
                self.revealed.append(tokens)
                self._fns.append(self._make_reveal_fn(tokens))

    @staticmethod
    def _make_reveal_fn(tokens):
        def fn(nature, actions):
            out = []
            for kind, idx in tokens:
                out.append(nature[idx] if kind == "nature" else actions[idx])
            return tuple(out)

        return fn

    @property
    def num_stages(self) -> int:
        return len(self._fns)

    def label(self, stage: int, nature, actions) -> Hashable:
        return (stage, self._fns[stage](nature, actions))

    @classmethod
    def from_tables(cls, tables: Sequence[dict], name: str = "") -> "InformationMap":
        """Build a map from per-stage dicts keyed by (nature, prefix)."""

        def make(i, tab):
            def fn(nature, actions):
                return tab[(nature, tuple(actions[:i]))]

            return fn

        return cls([make(i, t) for i, t in enumerate(tables)], name=name)

    def __repr__(self):
        return f"InformationMap({self.name or hex(id(self))}, stages={self.num_stages})"


@dataclass(frozen=True, eq=False)
class ProductGame:
    """Finite game in product form.

    ``reward_fn(nature_value, actions)`` returns one reward per player; in
    team games all components are equal.  Action counts are per stage; a
    label-dependent override can be supplied via ``actions_for_label``.
    """

    nature: tuple
    nature_probs: tuple
    num_stages: int
    max_actions: int
    player_of_stage: tuple
    stage_actions: tuple
    reward_fn: Callable
    num_players: int = 1
    actions_for_label: Optional[Callable] = None
    name: str = ""

    def __post_init__(self):
        probs = np.asarray(self.nature_probs, dtype=float)
        if len(self.nature) != len(probs):
            raise ValueError("nature and nature_probs length mismatch")
        if np.any(probs < 0) or np.any(probs > 1):
            raise ValueError("nature weights must lie in [0, 1]")
        if abs(probs.sum() - 1.0) > PROB_TOL:
            raise ValueError("nature weights must sum to 1 within 1e-12")
        if self.num_stages < 1 or self.max_actions < 1:
            raise ValueError("num_stages and max_actions must be positive")
        if len(self.player_of_stage) != self.num_stages:
            raise ValueError("player_of_stage must have one entry per stage")
        if len(self.stage_actions) != self.num_stages:
            raise ValueError("stage_actions must have one entry per stage")
        for a in self.stage_actions:
            if not 1 <= a <= self.max_actions:
                raise ValueError("per-stage action counts must lie in [1, W]")

    def num_actions(self, stage: int, label=None) -> int:
        if self.actions_for_label is not None and label is not None:
            n = int(self.actions_for_label(stage, label))
            if not 1 <= n <= self.max_actions:
                raise ValueError("action count outside [1, W]")
            return n
        return self.stage_actions[stage]

    def probs(self) -> np.ndarray:
        return np.asarray(self.nature_probs, dtype=float)

    def reward(self, nature, actions) -> np.ndarray:
        r = np.atleast_1d(np.asarray(self.reward_fn(nature, actions), dtype=float))
        if r.shape != (self.num_players,):
            raise ValueError("reward_fn must return one value per player")
        return r

    def stages_of(self, player: int) -> tuple:
        return tuple(i for i, p in enumerate(self.player_of_stage) if p == player)


def enumerate_reachable(game: ProductGame, info: InformationMap, validate: bool = True):
    """All legal histories, lexicographic in (nature index, action entries).

    Legality is judged through the action count of the stage label.  When
    ``validate`` is set, labels are checked to ignore the action entries at
    their own stage and later (maps peeking at the future are rejected).
    """
    if info.num_stages != game.num_stages:
        raise ValueError("information map and game disagree on stage count")
    L = game.num_stages
    out = []
    for w in game.nature:
        prefix = [0] * L
        stack = [(0,)]

        def extend(depth):
            if depth == L:
                out.append(History(w, tuple(prefix)))
                return
            g = info.label(depth, w, tuple(prefix))
            n = game.num_actions(depth, g)
            for a in range(n):
                prefix[depth] = a
                extend(depth + 1)
            prefix[depth] = 0

        extend(0)
    if validate:
        _check_suffix_independence(game, info, out)
    return out


def _check_suffix_independence(game, info, histories):
    L = game.num_stages
    for h in histories:
        for i in range(L):
            base = info.label(i, h.nature, h.actions)
            for j in range(i, L):
                acts = list(h.actions)
                for a in range(game.stage_actions[j]):
                    if a == h.actions[j]:
                        continue
                    acts[j] = a
                    if info.label(i, h.nature, tuple(acts)) != base:
                        raise WellPosednessViolation(
                            f"stage-{i} label depends on the action at stage {j}"
                        )
                acts[j] = h.actions[j]


@dataclass
class BehavioralPolicy:
    """Map (stage, information label) -> probability vector over actions.

    The policy carries the information map its table is keyed by; whether it
    is implementable for some other (coarser) map is a separate question.
    """

    info: InformationMap
    table: dict = field(default_factory=dict)

    def local(self, stage: int, nature, actions) -> np.ndarray:
        return self.table[(stage, self.info.label(stage, nature, actions))]

    def validate(self):
        for (stage, label), vec in self.table.items():
            v = np.asarray(vec, dtype=float)
            if np.any(v < -PROB_TOL):
                raise IllegalSupport(f"negative mass at {(stage, label)}")
            if abs(v.sum() - 1.0) > PROB_TOL:
                raise IllegalSupport(f"mass at {(stage, label)} does not sum to 1")
        return self

    def copy(self) -> "BehavioralPolicy":
        return BehavioralPolicy(self.info, {k: np.array(v) for k, v in self.table.items()})

    def is_deterministic(self, tol: float = 0.0) -> bool:
        return all(np.max(v) >= 1.0 - tol for v in self.table.values())


def uniform_policy(game: ProductGame, info: InformationMap) -> BehavioralPolicy:
    table = {}
    for h in enumerate_reachable(game, info, validate=False):
        for i in range(game.num_stages):
            g = info.label(i, h.nature, h.actions)
            if (i, g) not in table:
                n = game.num_actions(i, g)
                table[(i, g)] = np.full(n, 1.0 / n)
    return BehavioralPolicy(info, table)


def random_policy(game: ProductGame, info: InformationMap, rng) -> BehavioralPolicy:
    pol = uniform_policy(game, info)
    for key, vec in pol.table.items():
        pol.table[key] = rng.dirichlet(np.ones(len(vec)))
    return pol


def floored(policy: BehavioralPolicy, eps: float = 1e-6) -> BehavioralPolicy:
    """Mix every local vector with the uniform one; guarantees full support."""
    out = policy.copy()
    for key, vec in out.table.items():
        n = len(vec)
        out.table[key] = (1.0 - eps) * vec + eps / n
    return out
