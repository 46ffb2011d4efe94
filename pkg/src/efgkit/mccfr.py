"""Outcome-sampling Monte-Carlo CFR.

Each iteration samples one terminal history with an epsilon-greedy version of
the current regret-matching profile, then walks the sampled path backwards
updating every visited information set of *both* players:

* sampled counterfactual regret
  ``w * (pi(z[I]a, z) - pi(z[I], z))`` for the sampled action and
  ``-w * pi(z[I], z)`` for the others, with
  ``w = u_i(z) * pi_{-i}(z[I]) / q(z)``;
* optimistic averaging ``s_I[a] += (t - c_I) * pi_i(z[I]) * sigma(I, a)``,
  then ``c_I = t``.

All reach and tail probabilities use the profile in force when the episode
was sampled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .core import Game, InfoSetKey, Player, StrategyProfile
from .errors import IncompleteModelError, ParameterError
from .rng import make_rng, sample_index
from .tree import CHANCE, TERMINAL, GameTree, build_tree


def regret_matching(regrets: Sequence[float]) -> list[float]:
    """Positive-part normalization; uniform when no regret is positive."""
    n = len(regrets)
    if n == 0:
        raise ValueError("regret vector is empty")
    pos = [r if r > 0.0 else 0.0 for r in regrets]
    total = sum(pos)
    if total > 0.0:
        return [x / total for x in pos]
    return [1.0 / n] * n


@dataclass(frozen=True)
class MccfrConfig:
    epsilon: float = 0.6
    seed: int = 0
    iterations: int = 0

    def __post_init__(self) -> None:
        if not 0.0 < self.epsilon <= 1.0:
            raise ParameterError("epsilon must lie in (0, 1]")
        if self.iterations < 0:
            raise ParameterError("iterations must be non-negative")


class RegretTables:
    """Per-infoset regret ``r``, average weight ``s`` and last-update marker ``c``."""

    def __init__(self, game: Game | GameTree):
        tree = game if isinstance(game, GameTree) else build_tree(game)
        self.tree = tree
        self.regret = [[0.0] * n for n in tree.infoset_actions]
        self.strategy_sum = [[0.0] * n for n in tree.infoset_actions]
        self.last_update = [0] * tree.num_infosets
        self.last_reach = [0.0] * tree.num_infosets
        self.t = 0
        self.nodes_visited = 0

    def _idx(self, key: InfoSetKey) -> int:
        return self.tree.index[key]

    def r(self, key: InfoSetKey) -> list[float]:
        return list(self.regret[self._idx(key)])

    def s(self, key: InfoSetKey) -> list[float]:
        return list(self.strategy_sum[self._idx(key)])

    def c(self, key: InfoSetKey) -> int:
        return self.last_update[self._idx(key)]

    def strategy(self, key: InfoSetKey) -> list[float]:
        return regret_matching(self.regret[self._idx(key)])

    def snapshot(self) -> tuple:
        """Hashable copy of every table, for bit-exact comparisons."""
        return (
            tuple(map(tuple, self.regret)),
            tuple(map(tuple, self.strategy_sum)),
            tuple(self.last_update),
            self.t,
        )

    def average_slots(self, catch_up: bool = True) -> np.ndarray:
        tree = self.tree
        out = np.empty(tree.num_slots)
        for idx, n in enumerate(tree.infoset_actions):
            weights = list(self.strategy_sum[idx])
            if catch_up and self.last_update[idx] > 0 and self.t > self.last_update[idx]:
                # optimistic averaging assumes nothing changed since the last visit
                gap = (self.t - self.last_update[idx]) * self.last_reach[idx]
                sigma = regret_matching(self.regret[idx])
                weights = [w + gap * s for w, s in zip(weights, sigma)]
            total = math.fsum(weights)
            sl = tree.infoset_slots(idx)
            out[sl] = [w / total for w in weights] if total > 0 else [1.0 / n] * n
        return out


def average_strategy(tables: RegretTables, catch_up: bool = True) -> StrategyProfile:
    """Normalized ``s_I`` per infoset (uniform where nothing was accumulated)."""
    return tables.tree.profile_from_slots(tables.average_slots(catch_up))


@dataclass
class SampleRecord:
    """One sampled episode.

    Per step (chance and decision nodes on the path, root first): the node,
    its information set index (-1 for chance), the action taken, the
    probability of that action under the acting profile, the probability it
    was sampled with, and the reach ``(pi_1, pi_2, pi_chance)`` *before* the
    step.  ``fixed`` marks restricted-player nodes driven by a fixed model,
    which act as chance and receive no updates.
    """

    tree: GameTree
    nodes: list[int] = field(default_factory=list)
    infosets: list[int] = field(default_factory=list)
    actions: list[int] = field(default_factory=list)
    acting: list[float] = field(default_factory=list)
    sampled: list[float] = field(default_factory=list)
    sigmas: list[Sequence[float] | None] = field(default_factory=list)
    baselines: list[Sequence[float] | None] = field(default_factory=list)
    reach: list[tuple[float, float, float]] = field(default_factory=list)
    fixed: list[bool] = field(default_factory=list)
    z: int = -1
    sample_prob: float = 1.0
    u1: float = 0.0
    restricted_subtree: bool = False

    @property
    def history(self) -> tuple[int, ...]:
        return self.tree.histories[self.z]

    def utility(self, player: Player) -> float:
        return self.u1 if player is Player.P1 else -self.u1

    def step_of(self, key: InfoSetKey) -> int:
        idx = self.tree.index.get(key, -2)
        for k, i in enumerate(self.infosets):
            if i == idx and not self.fixed[k]:
                return k
        raise KeyError(f"{key} is not on the sampled path")

    def tail(self, step: int) -> float:
        """``pi(z[I]a, z)``: acting probability of the steps after ``step``."""
        prob = 1.0
        for k in range(len(self.acting) - 1, step, -1):
            prob *= self.acting[k]
        return prob


def _sample(tree: GameTree, tables: RegretTables, epsilon: float, rng, restriction=None) -> SampleRecord:
    rec = SampleRecord(tree)
    node = 0
    r1 = r2 = rc = 1.0
    q = 1.0
    coin = False
    if restriction is not None:
        coin = restriction.draw_coin(rng)
        rec.restricted_subtree = coin
    player, children, chance_probs = tree.player, tree.children, tree.chance
    regret = tables.regret
    while True:
        pl = player[node]
        if pl == TERMINAL:
            break
        rec.nodes.append(node)
        rec.reach.append((r1, r2, rc))
        if pl == CHANCE:
            probs = chance_probs[node]
            a = sample_index(probs, rng.random())
            prob = probs[a]
            rec.infosets.append(-1)
            rec.sigmas.append(None)
            rec.baselines.append(None)
            rec.fixed.append(False)
            rec.acting.append(prob)
            rec.sampled.append(prob)
            rc *= prob
            q *= prob
        else:
            idx = tree.infoset[node]
            fixed = False
            base = regret_matching(regret[idx])
            sigma = base
            if restriction is not None and pl == restriction.player:
                if coin:
                    sigma = restriction.fixed(idx)
                    fixed = True
                elif restriction.mix:
                    fix = restriction.fixed(idx)
                    p = restriction.p
                    sigma = [p * f + (1.0 - p) * s for f, s in zip(fix, base)]
            if fixed:
                dist = sigma
            else:
                n = len(sigma)
                dist = [s + epsilon * (1.0 / n - s) for s in sigma]
            a = sample_index(dist, rng.random())
            prob = sigma[a]
            rec.infosets.append(idx)
            rec.sigmas.append(sigma)
            rec.baselines.append(base if not fixed else None)
            rec.fixed.append(fixed)
            rec.acting.append(prob)
            rec.sampled.append(dist[a])
            if pl == 0:
                r1 *= prob
            else:
                r2 *= prob
            q *= dist[a]
        rec.actions.append(a)
        node = children[node][a]
    rec.z = node
    rec.sample_prob = q
    rec.u1 = tree.u1[node]
    return rec


def sample_episode(game: Game | GameTree, tables: RegretTables, config: MccfrConfig, rng) -> SampleRecord:
    tree = game if isinstance(game, GameTree) else build_tree(game)
    return _sample(tree, tables, config.epsilon, rng)


def sampled_regret(record: SampleRecord, key: InfoSetKey, action: int) -> float:
    """Sampled counterfactual regret of ``action`` at ``key`` for this episode."""
    try:
        k = record.step_of(key)
    except KeyError as exc:
        raise ValueError(str(exc)) from exc
    return _step_regrets(record, k, record.tail(k))[action]


def _step_regrets(record: SampleRecord, k: int, tail: float) -> list[float]:
    node = record.nodes[k]
    p = record.tree.player[node]
    r1, r2, rc = record.reach[k]
    u = record.u1 if p == 0 else -record.u1
    w = u * (r2 if p == 0 else r1) * rc / record.sample_prob
    base = record.baselines[k]
    taken = record.actions[k]
    tail_here = base[taken] * tail
    out = [-w * tail_here] * len(base)
    out[taken] = w * (tail - tail_here)
    return out


def _update(tables: RegretTables, rec: SampleRecord, t: int) -> None:
    tail = 1.0
    regret, ssum = tables.regret, tables.strategy_sum
    last, last_reach = tables.last_update, tables.last_reach
    player = rec.tree.player
    for k in range(len(rec.nodes) - 1, -1, -1):
        idx = rec.infosets[k]
        if idx >= 0 and not rec.fixed[k]:
            r = regret[idx]
            for a, x in enumerate(_step_regrets(rec, k, tail)):
                r[a] += x
            r1, r2, _ = rec.reach[k]
            own = r1 if player[rec.nodes[k]] == 0 else r2
            weight = (t - last[idx]) * own
            s = ssum[idx]
            for a, prob in enumerate(rec.baselines[k]):
                s[a] += weight * prob
            last[idx] = t
            last_reach[idx] = own
        tail *= rec.acting[k]
    tables.t = t
    tables.nodes_visited += len(rec.nodes) + 1


def mccfr_iteration(
    game: Game | GameTree,
    tables: RegretTables,
    config: MccfrConfig,
    t: int | None = None,
    rng=None,
) -> SampleRecord:
    """Sample one episode and apply its updates to ``tables`` (in place)."""
    tree = tables.tree
    if t is None:
        t = tables.t + 1
    if t < 1:
        raise ParameterError("iteration index starts at 1")
    if rng is None:
        raise ParameterError("an explicit random stream is required")
    rec = _sample(tree, tables, config.epsilon, rng)
    _update(tables, rec, t)
    return rec


def run_mccfr(
    game: Game | GameTree,
    config: MccfrConfig,
    every: int = 0,
    callback: Callable[[RegretTables], bool | None] | None = None,
    tables: RegretTables | None = None,
) -> RegretTables:
    """Run ``config.iterations`` iterations from ``config.seed``.

    ``callback`` fires after every ``every`` iterations; returning True stops
    the run early.
    """
    tree = game if isinstance(game, GameTree) else build_tree(game)
    tables = tables or RegretTables(tree)
    rng = make_rng(config.seed)
    eps = config.epsilon
    for t in range(tables.t + 1, tables.t + config.iterations + 1):
        _update(tables, _sample(tree, tables, eps, rng), t)
        if every and callback is not None and t % every == 0:
            if callback(tables):
                break
    return tables


def missing_model(key: InfoSetKey) -> IncompleteModelError:
    return IncompleteModelError(f"fixed strategy has no entry for {key}")
