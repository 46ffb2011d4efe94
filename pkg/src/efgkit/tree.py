"""Compiled game trees.

Solvers do not call the history functions of a :class:`~efgkit.core.Game` in
their inner loops.  The tree is expanded once into flat node arrays, with each
information set owning a contiguous block of *slots* (one per action), so that
strategies, regrets and average-strategy weights are plain flat vectors.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .core import (
    BehaviorStrategy,
    Game,
    History,
    InfoSetKey,
    Player,
    StrategyProfile,
    as_player,
)
from .errors import GameMismatchError

CHANCE = -1
TERMINAL = -2


class GameTree:
    def __init__(self, game: Game):
        self.game = game
        self.histories: list[History] = []
        self.player: list[int] = []
        self.children: list[tuple[int, ...]] = []
        self.parent: list[int] = []
        self.chance: list[tuple[float, ...] | None] = []
        self.infoset: list[int] = []
        self.u1: list[float] = []
        self.depth: list[int] = []

        self.infosets: list[InfoSetKey] = []
        self.infoset_actions: list[int] = []
        self.members: list[list[int]] = []
        self.index: dict[InfoSetKey, int] = {}

        self._expand()
        self._layout()

    # -- construction -------------------------------------------------
    def _expand(self) -> None:
        game = self.game
        stack: list[tuple[History, int]] = [((), -1)]
        pending_children: list[list[int]] = []
        while stack:
            h, par = stack.pop()
            node = len(self.histories)
            self.histories.append(h)
            self.parent.append(par)
            self.depth.append(len(h))
            pending_children.append([])
            if par >= 0:
                pending_children[par].append(node)
            if game.is_terminal(h):
                u = game.utility(h, Player.P1)
                u2 = game.utility(h, Player.P2)
                if abs(u + u2) > 1e-12:
                    raise ValueError(f"{game.name}: non-zero-sum terminal {h}")
                self.player.append(TERMINAL)
                self.chance.append(None)
                self.infoset.append(-1)
                self.u1.append(float(u))
                continue
            p = game.current_player(h)
            n = game.num_actions(h)
            self.u1.append(0.0)
            if p is Player.CHANCE:
                probs = tuple(float(x) for x in game.chance_probs(h))
                if len(probs) != n or abs(math.fsum(probs) - 1.0) > 1e-12 or min(probs) < 0:
                    raise ValueError(f"{game.name}: bad chance distribution at {h}")
                self.player.append(CHANCE)
                self.chance.append(probs)
                self.infoset.append(-1)
            else:
                key = InfoSetKey(p, game.infoset_key(h, p))
                idx = self.index.get(key)
                if idx is None:
                    idx = len(self.infosets)
                    self.index[key] = idx
                    self.infosets.append(key)
                    self.infoset_actions.append(n)
                    self.members.append([])
                elif self.infoset_actions[idx] != n:
                    raise ValueError(f"{game.name}: infoset {key} has inconsistent action counts")
                self.members[idx].append(node)
                self.player.append(int(p))
                self.chance.append(None)
                self.infoset.append(idx)
            for a in reversed(range(n)):
                stack.append((h + (a,), node))
        # children were appended in DFS discovery order, which is action order
        self.children = [tuple(c) for c in pending_children]

    def _layout(self) -> None:
        self.num_nodes = len(self.histories)
        self.num_infosets = len(self.infosets)
        offsets = np.zeros(self.num_infosets + 1, dtype=np.int64)
        offsets[1:] = np.cumsum(self.infoset_actions)
        self.slot_offset = offsets
        self.num_slots = int(offsets[-1])
        self.slot_infoset = np.repeat(np.arange(self.num_infosets), self.infoset_actions)
        self.infoset_player_arr = np.array([int(k.player) for k in self.infosets], dtype=np.int64)

        n = self.num_nodes
        parent = np.array(self.parent, dtype=np.int64)
        parent_player = np.full(n, TERMINAL, dtype=np.int64)
        edge_slot = np.full(n, -1, dtype=np.int64)
        chance_prob = np.zeros(n)
        for node in range(n):
            kids = self.children[node]
            pl = self.player[node]
            for a, child in enumerate(kids):
                parent_player[child] = pl
                if pl == CHANCE:
                    chance_prob[child] = self.chance[node][a]
                else:
                    edge_slot[child] = self.slot_offset[self.infoset[node]] + a
        self.parent_arr = parent
        self.parent_player = parent_player
        self.edge_slot = edge_slot
        self.chance_prob = chance_prob
        self.u1_arr = np.array(self.u1)
        depth = np.array(self.depth)
        self.levels = [np.flatnonzero(depth == d) for d in range(int(depth.max()) + 1)]
        self.is_chance_edge = parent_player == CHANCE
        self.dec_edges = [np.flatnonzero(parent_player == p) for p in (0, 1)]
        self.max_abs_utility = float(np.abs(self.u1_arr).max())
        self.first_member = np.array([m[0] for m in self.members], dtype=np.int64)

    # -- strategies ---------------------------------------------------
    def infoset_slots(self, idx: int) -> slice:
        return slice(int(self.slot_offset[idx]), int(self.slot_offset[idx + 1]))

    def check_strategy(self, strategy: BehaviorStrategy) -> None:
        """Raise unless every key of ``strategy`` names one of its player's infosets."""
        for obs in sorted(strategy.table):
            idx = self.index.get(InfoSetKey(strategy.player, obs))
            if idx is None:
                raise GameMismatchError(
                    f"{self.game.name}: no information set {obs.hex()} "
                    f"({obs.decode(errors='replace')!r}) for player {strategy.player.label}"
                )
            if len(strategy.table[obs]) != self.infoset_actions[idx]:
                raise GameMismatchError(
                    f"{self.game.name}: information set {obs.hex()} expects "
                    f"{self.infoset_actions[idx]} actions, got {len(strategy.table[obs])}"
                )

    def behavior_arrays(self, profile: StrategyProfile) -> np.ndarray:
        """Flat slot vector of action probabilities (missing infosets uniform)."""
        out = np.empty(self.num_slots)
        for idx, key in enumerate(self.infosets):
            n = self.infoset_actions[idx]
            out[self.infoset_slots(idx)] = profile[key.player].probs(key.obs, n)
        return out

    def strategy_from_slots(self, flat: np.ndarray, player: Player) -> BehaviorStrategy:
        player = as_player(player)
        table = {}
        for idx, key in enumerate(self.infosets):
            if key.player is player:
                table[key.obs] = tuple(float(x) for x in flat[self.infoset_slots(idx)])
        return BehaviorStrategy(player, table)

    def profile_from_slots(self, flat: np.ndarray) -> StrategyProfile:
        return StrategyProfile(
            self.strategy_from_slots(flat, Player.P1), self.strategy_from_slots(flat, Player.P2)
        )

    def normalize_slots(self, weights: np.ndarray) -> np.ndarray:
        """Per-infoset normalization; all-zero blocks become uniform."""
        sums = np.add.reduceat(weights, self.slot_offset[:-1]) if self.num_slots else weights
        counts = np.asarray(self.infoset_actions, dtype=float)
        per_slot_sum = sums[self.slot_infoset]
        uniform = 1.0 / counts[self.slot_infoset]
        safe = np.where(per_slot_sum > 0, per_slot_sum, 1.0)
        return np.where(per_slot_sum > 0, weights / safe, uniform)

    def regret_matching_slots(self, regret: np.ndarray) -> np.ndarray:
        return self.normalize_slots(np.maximum(regret, 0.0))

    # -- exact passes ---------------------------------------------------
    def edge_probs(self, sigma: np.ndarray) -> np.ndarray:
        ep = np.where(self.edge_slot >= 0, sigma[np.maximum(self.edge_slot, 0)], 0.0)
        return np.where(self.is_chance_edge, self.chance_prob, ep)

    def reaches(self, sigma: np.ndarray, ep: np.ndarray | None = None) -> np.ndarray:
        """Array ``(3, num_nodes)`` of reach contributions for P1, P2 and chance."""
        if ep is None:
            ep = self.edge_probs(sigma)
        reach = np.ones((3, self.num_nodes))
        pp = self.parent_player
        for nodes in self.levels[1:]:
            par = self.parent_arr[nodes]
            reach[:, nodes] = reach[:, par]
            e = ep[nodes]
            who = pp[nodes]
            row = np.where(who == CHANCE, 2, who)
            reach[row, nodes] *= e
        return reach

    def values(self, sigma: np.ndarray, ep: np.ndarray | None = None) -> np.ndarray:
        """Expected P1 payoff below every node."""
        if ep is None:
            ep = self.edge_probs(sigma)
        v = self.u1_arr.copy()
        for nodes in reversed(self.levels[1:]):
            np.add.at(v, self.parent_arr[nodes], ep[nodes] * v[nodes])
        return v

    def expected_value(self, sigma: np.ndarray, player: Player = Player.P1) -> float:
        v = float(self.values(sigma)[0])
        return v if as_player(player) is Player.P1 else -v

    def counterfactual_regrets(
        self, sigma: np.ndarray
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Immediate counterfactual regrets ``v(sigma_{I->a}, I) - v(sigma, I)`` per slot.

        Also returns the reach array and the node values for reuse.
        """
        ep = self.edge_probs(sigma)
        reach = self.reaches(sigma, ep)
        v = self.values(sigma, ep)
        regret = np.zeros(self.num_slots)
        for p, edges in enumerate(self.dec_edges):
            if not len(edges):
                continue
            par = self.parent_arr[edges]
            cf = reach[1 - p, par] * reach[2, par]
            sign = 1.0 if p == 0 else -1.0
            contrib = sign * cf * (v[edges] - v[par])
            regret += np.bincount(self.edge_slot[edges], weights=contrib, minlength=self.num_slots)
        return regret, reach, v

    def own_reach_per_slot(self, sigma: np.ndarray, reach: np.ndarray) -> np.ndarray:
        """Average-strategy increment ``pi_i(I) * sigma(I, a)`` per slot."""
        owner = self.infoset_player_arr[self.slot_infoset]
        first = self.first_member[self.slot_infoset]
        return reach[owner, first] * sigma

    def terminals(self) -> list[int]:
        return [n for n in range(self.num_nodes) if self.player[n] == TERMINAL]

    def uniform_slots(self) -> np.ndarray:
        return self.normalize_slots(np.zeros(self.num_slots))


@lru_cache(maxsize=64)
def build_tree(game: Game) -> GameTree:
    return GameTree(game)


def uniform_profile(game: Game) -> StrategyProfile:
    tree = build_tree(game)
    return tree.profile_from_slots(tree.uniform_slots())


def infoset_count(game: Game, player: Player) -> int:
    player = as_player(player)
    return sum(1 for k in build_tree(game).infosets if k.player is player)


__all__ = ["GameTree", "build_tree", "uniform_profile", "infoset_count"]
