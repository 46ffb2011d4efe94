"""Information-set Monte-Carlo tree search with UCT selection.

Statistics are kept per (information set, action) only.  Simulation is
on-policy: every decision on the way down is the UCT choice, so selection and
simulation are the same walk and no separate node tree is needed.  At the
terminal both players' visited (infoset, action) pairs are credited with that
player's payoff.  The final strategy plays in proportion to visit counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import Game, InfoSetKey, StrategyProfile
from .errors import ParameterError
from .rng import make_rng, sample_index
from .tree import CHANCE, TERMINAL, GameTree, build_tree


@dataclass(frozen=True)
class MctsConfig:
    C: float = 2.0
    seed: int = 0
    iterations: int = 0

    def __post_init__(self) -> None:
        if self.C < 0:
            raise ParameterError("C must be non-negative")


class UctTables:
    def __init__(self, game: Game | GameTree):
        tree = game if isinstance(game, GameTree) else build_tree(game)
        self.tree = tree
        self.value = [[0.0] * n for n in tree.infoset_actions]
        self.visits = [[0] * n for n in tree.infoset_actions]
        self.n_parent = [0] * tree.num_infosets
        self.iterations = 0
        self.nodes_visited = 0

    def v(self, key: InfoSetKey) -> list[float]:
        return list(self.value[self.tree.index[key]])

    def n(self, key: InfoSetKey) -> list[int]:
        return list(self.visits[self.tree.index[key]])

    def np(self, key: InfoSetKey) -> int:
        return self.n_parent[self.tree.index[key]]


def _select(value: list[float], visits: list[int], n_parent: int, C: float) -> int:
    for a, n in enumerate(visits):
        if n == 0:
            return a
    log_np = math.log(n_parent)
    best, arg = -math.inf, 0
    for a, (v, n) in enumerate(zip(value, visits)):
        score = v + C * math.sqrt(log_np / n)
        if score > best:
            best, arg = score, a
    return arg


def uct_select(tables: UctTables, key: InfoSetKey | int, C: float) -> int:
    """Unvisited actions first (lowest id), else argmax of the UCT score."""
    idx = key if isinstance(key, int) else tables.tree.index[key]
    return _select(tables.value[idx], tables.visits[idx], tables.n_parent[idx], C)


def mcts_iteration(
    game: Game | GameTree, tables: UctTables, config: MctsConfig, rng
) -> list[tuple[int, int, float]]:
    """One simulated game; returns the ``(infoset, action, reward)`` credits applied."""
    tree = tables.tree
    player, children, infoset, chance = tree.player, tree.children, tree.infoset, tree.chance
    value, visits, n_parent = tables.value, tables.visits, tables.n_parent
    C = config.C
    path: list[tuple[int, int, int]] = []
    node = 0
    steps = 0
    while True:
        pl = player[node]
        if pl == TERMINAL:
            break
        steps += 1
        if pl == CHANCE:
            a = sample_index(chance[node], rng.random())
        else:
            idx = infoset[node]
            a = _select(value[idx], visits[idx], n_parent[idx], C)
            path.append((idx, a, pl))
        node = children[node][a]
    u1 = tree.u1[node]
    credits = []
    for idx, a, pl in path:
        reward = u1 if pl == 0 else -u1
        visits[idx][a] += 1
        n_parent[idx] += 1
        value[idx][a] += (reward - value[idx][a]) / visits[idx][a]
        credits.append((idx, a, reward))
    tables.iterations += 1
    tables.nodes_visited += steps + 1
    return credits


def extract_visit_strategy(tables: UctTables) -> StrategyProfile:
    tree = tables.tree
    out = np.empty(tree.num_slots)
    for idx, counts in enumerate(tables.visits):
        total = sum(counts)
        n = len(counts)
        out[tree.infoset_slots(idx)] = [c / total for c in counts] if total else [1.0 / n] * n
    return tree.profile_from_slots(out)


def run_mcts(
    game: Game | GameTree,
    config: MctsConfig,
    every: int = 0,
    callback: Callable[[UctTables], bool | None] | None = None,
) -> UctTables:
    tables = UctTables(game)
    rng = make_rng(config.seed)
    for t in range(1, config.iterations + 1):
        mcts_iteration(game, tables, config, rng)
        if every and callback is not None and t % every == 0:
            if callback(tables):
                break
    return tables
