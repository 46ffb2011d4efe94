"""Dominated-action oracle by exhaustive pure-strategy enumeration.

An action ``a`` at information set ``I`` is dominated when some other action
``b`` at ``I``, followed by some own continuation plan, does at least as well
as ``a`` under *every* own continuation plan, against every opponent pure
strategy, and strictly better against at least one.  Payoffs are compared as
counterfactual values at ``I`` (chance-weighted, summed over the members of
``I`` that the opponent strategy reaches).

Elimination is iterated: once an action is found dominated it is removed from
the strategy sets of both players and the check is repeated until nothing
changes.  The Kuhn Poker dominated set only emerges at the second round
(P1 betting a Queen first, P2 betting a Queen after a pass).
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

import numpy as np

from ..core import Game, InfoSetKey
from ..errors import EnumerationBudgetError
from ..tree import CHANCE, TERMINAL, GameTree, build_tree

DEFAULT_BUDGET = 2_000_000
_TOL = 1e-12


def _ancestors(tree: GameTree, node: int) -> list[int]:
    out = []
    par = tree.parent[node]
    while par >= 0:
        out.append(par)
        par = tree.parent[par]
    return out


def _subtree_infosets(tree: GameTree, node: int, player: int, acc: set[int]) -> None:
    stack = [node]
    while stack:
        n = stack.pop()
        if tree.player[n] == player:
            acc.add(tree.infoset[n])
        stack.extend(tree.children[n])


def _value(tree: GameTree, node: int, owner: int, plan: dict[int, int], opp: dict[int, int]) -> float:
    pl = tree.player[node]
    if pl == TERMINAL:
        u = tree.u1[node]
        return u if owner == 0 else -u
    kids = tree.children[node]
    if pl == CHANCE:
        return sum(p * _value(tree, c, owner, plan, opp) for p, c in zip(tree.chance[node], kids))
    choice = plan[tree.infoset[node]] if pl == owner else opp[tree.infoset[node]]
    return _value(tree, kids[choice], owner, plan, opp)


def _plans(infosets: list[int], allowed: list[set[int]]):
    keys = sorted(infosets)
    for combo in product(*(sorted(allowed[i]) for i in keys)):
        yield dict(zip(keys, combo))


def _is_dominated(tree: GameTree, idx: int, a: int, allowed: list[set[int]], budget: int) -> bool:
    owner = int(tree.infosets[idx].player)
    opp_player = 1 - owner
    members = tree.members[idx]

    opp_sets: set[int] = set()
    path_info = []
    for h in members:
        chance_reach = 1.0
        opp_steps = []
        node = h
        for par in _ancestors(tree, h):
            action = tree.children[par].index(node)
            if tree.player[par] == CHANCE:
                chance_reach *= tree.chance[par][action]
            elif tree.player[par] == opp_player:
                opp_steps.append((tree.infoset[par], action))
                opp_sets.add(tree.infoset[par])
            node = par
        path_info.append((h, chance_reach, opp_steps))
        _subtree_infosets(tree, h, opp_player, opp_sets)

    own_below: dict[int, set[int]] = {}
    for b in allowed[idx]:
        acc: set[int] = set()
        for h in members:
            _subtree_infosets(tree, tree.children[h][b], owner, acc)
        own_below[b] = acc

    n_opp = 1
    for i in opp_sets:
        n_opp *= len(allowed[i])
    n_own = sum(int(np.prod([len(allowed[i]) for i in own_below[b]])) for b in own_below)
    if n_opp * n_own * len(members) > budget:
        raise EnumerationBudgetError(
            f"{tree.game.name}: {n_opp} opponent strategies x {n_own} own plans exceeds budget {budget}"
        )

    opp_strats = list(_plans(sorted(opp_sets), allowed))

    def vectors(b: int) -> np.ndarray:
        rows = []
        for plan in _plans(sorted(own_below[b]), allowed):
            row = []
            for opp in opp_strats:
                total = 0.0
                for h, reach, steps in path_info:
                    if all(opp[i] == act for i, act in steps):
                        total += reach * _value(tree, tree.children[h][b], owner, plan, opp)
                row.append(total)
            rows.append(row)
        return np.unique(np.array(rows), axis=0)

    target = vectors(a)
    for b in sorted(allowed[idx] - {a}):
        for cand in vectors(b):
            diff = cand[None, :] - target
            if np.all(diff >= -_TOL) and np.all(diff.max(axis=1) > _TOL):
                return True
    return False


@lru_cache(maxsize=16)
def dominated_actions(game: Game, budget: int = DEFAULT_BUDGET) -> frozenset[tuple[InfoSetKey, int]]:
    """All (infoset, action) pairs removed by iterated dominance."""
    tree = build_tree(game)
    allowed = [set(range(n)) for n in tree.infoset_actions]
    removed: set[tuple[int, int]] = set()
    while True:
        found = [
            (idx, a)
            for idx in range(tree.num_infosets)
            if len(allowed[idx]) > 1
            for a in sorted(allowed[idx])
            if _is_dominated(tree, idx, a, allowed, budget)
        ]
        if not found:
            break
        for idx, a in found:
            if len(allowed[idx]) > 1:
                allowed[idx].discard(a)
                removed.add((idx, a))
    return frozenset((tree.infosets[idx], a) for idx, a in removed)


def verify_dominated(game: Game, key: InfoSetKey, action: int, budget: int = DEFAULT_BUDGET) -> bool:
    if key not in build_tree(game).index:
        raise KeyError(f"{key} is not an information set of {game.name}")
    return (key, action) in dominated_actions(game, budget)
