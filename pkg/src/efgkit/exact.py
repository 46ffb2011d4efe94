"""Exact evaluation: best response, exploitability, vanilla CFR and Kuhn metrics."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field

import numpy as np

from .core import BehaviorStrategy, Game, Player, StrategyProfile, as_player
from .errors import GameMismatchError
from .games.kuhn import PARAMETER_SLOTS, kuhn_dominated_actions
from .games.poker import BET, make_kuhn
from .tree import TERMINAL, GameTree, build_tree

_TIE_TOL = 1e-12


def as_tree(game: Game | GameTree) -> GameTree:
    return game if isinstance(game, GameTree) else build_tree(game)


@dataclass(frozen=True)
class BestResponseResult:
    value: float
    strategy: BehaviorStrategy


def best_response(game: Game | GameTree, opponent: BehaviorStrategy, player: Player) -> BestResponseResult:
    """Pure best response of ``player`` to ``opponent``, ties to the lowest action."""
    tree = as_tree(game)
    player = as_player(player)
    if opponent.player is player:
        raise ValueError("opponent strategy must belong to the other player")
    me = int(player)
    profile = StrategyProfile.uniform().replace(opponent)
    reach = tree.reaches(tree.behavior_arrays(profile))
    weight = reach[1 - me] * reach[2]
    sign = 1.0 if me == 0 else -1.0

    memo: dict[int, float] = {}
    choice: dict[int, int] = {}
    children, kind, infoset = tree.children, tree.player, tree.infoset

    def decide(idx: int) -> int:
        if idx not in choice:
            totals = [0.0] * tree.infoset_actions[idx]
            for h in tree.members[idx]:
                for a, child in enumerate(children[h]):
                    totals[a] += value(child)
            best = max(totals)
            choice[idx] = next(a for a, v in enumerate(totals) if v >= best - _TIE_TOL)
        return choice[idx]

    def value(node: int) -> float:
        # opponent-and-chance-reach weighted value for the responder
        got = memo.get(node)
        if got is not None:
            return got
        pl = kind[node]
        if pl == TERMINAL:
            out = weight[node] * sign * tree.u1[node]
        elif pl == me:
            out = value(children[node][decide(infoset[node])])
        else:
            out = sum(value(c) for c in children[node])
        memo[node] = out
        return out

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 10 * len(tree.levels) + 1000))
    try:
        total = value(0)
        for idx, key in enumerate(tree.infosets):
            if key.player is player:
                decide(idx)
    finally:
        sys.setrecursionlimit(limit)

    table = {}
    for idx, a in choice.items():
        n = tree.infoset_actions[idx]
        table[tree.infosets[idx].obs] = tuple(1.0 if k == a else 0.0 for k in range(n))
    return BestResponseResult(float(total), BehaviorStrategy(player, table))


def best_response_value(game: Game | GameTree, opponent: BehaviorStrategy, player: Player) -> float:
    return best_response(game, opponent, player).value


def exploitability(game: Game | GameTree, profile: StrategyProfile) -> float:
    """``b_1(sigma_2) + b_2(sigma_1)``."""
    tree = as_tree(game)
    return best_response(tree, profile.p2, Player.P1).value + best_response(tree, profile.p1, Player.P2).value


# -- vanilla CFR ------------------------------------------------------------


@dataclass
class CfrState:
    """Cumulative regret and average-strategy weight per slot of a compiled tree."""

    tree: GameTree
    regret: np.ndarray
    strategy_sum: np.ndarray
    t: int = 0
    nodes_visited: int = 0
    last_regrets: np.ndarray | None = field(default=None, repr=False)

    @classmethod
    def new(cls, game: Game | GameTree) -> "CfrState":
        tree = as_tree(game)
        return cls(tree, np.zeros(tree.num_slots), np.zeros(tree.num_slots))

    def current_slots(self) -> np.ndarray:
        return self.tree.regret_matching_slots(self.regret)

    def current_profile(self) -> StrategyProfile:
        return self.tree.profile_from_slots(self.current_slots())

    def average_slots(self) -> np.ndarray:
        return self.tree.normalize_slots(self.strategy_sum)

    def average_profile(self) -> StrategyProfile:
        return self.tree.profile_from_slots(self.average_slots())


def cfr_iteration(state: CfrState) -> CfrState:
    """One simultaneous-update CFR iteration over the full tree (in place)."""
    tree = state.tree
    sigma = state.current_slots()
    regrets, reach, _ = tree.counterfactual_regrets(sigma)
    state.regret += regrets
    state.strategy_sum += tree.own_reach_per_slot(sigma, reach)
    state.last_regrets = regrets
    state.t += 1
    state.nodes_visited += tree.num_nodes
    return state


def run_cfr(game: Game | GameTree, iterations: int) -> CfrState:
    state = CfrState.new(game)
    for _ in range(iterations):
        cfr_iteration(state)
    return state


def immediate_regrets(game: Game | GameTree, profile: StrategyProfile) -> dict:
    """Counterfactual regret ``r(I, a)`` of every action under ``profile``."""
    tree = as_tree(game)
    regrets, _, _ = tree.counterfactual_regrets(tree.behavior_arrays(profile))
    return {
        key: tuple(float(x) for x in regrets[tree.infoset_slots(idx)])
        for idx, key in enumerate(tree.infosets)
    }


# -- Kuhn metrics -----------------------------------------------------------


def _check_kuhn(profile: StrategyProfile, game: Game | None) -> None:
    from .games import is_kuhn

    if game is not None and not is_kuhn(game):
        raise GameMismatchError(f"Kuhn metrics are undefined for {game.name}")
    tree = build_tree(make_kuhn())
    tree.check_strategy(profile.p1)
    tree.check_strategy(profile.p2)


def kuhn_parameters(profile: StrategyProfile) -> dict[str, float]:
    return {name: profile[key.player].probs(key.obs, 2)[BET] for name, key in PARAMETER_SLOTS.items()}


def kuhn_squared_error(profile: StrategyProfile, game: Game | None = None) -> float:
    """Squared distance of (alpha, beta, eta, xi) to the equilibrium family.

    ``gamma`` is read from the profile (P1's bet probability with K) and fixes
    the family point ``(gamma/3, (1 + gamma)/3)``; P2's target is (1/3, 1/3).
    """
    _check_kuhn(profile, game)
    q = kuhn_parameters(profile)
    g = q["gamma"]
    return (
        (q["alpha"] - g / 3.0) ** 2
        + (q["beta"] - (1.0 + g) / 3.0) ** 2
        + (q["eta"] - 1.0 / 3.0) ** 2
        + (q["xi"] - 1.0 / 3.0) ** 2
    )


def dominated_error(profile: StrategyProfile, game: Game | None = None) -> float:
    """Total probability placed on the seven dominated Kuhn actions."""
    _check_kuhn(profile, game)
    return sum(profile[key.player].probs(key.obs, 2)[a] for key, a in kuhn_dominated_actions())
