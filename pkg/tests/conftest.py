"""Shared fixtures and slow reference implementations used as test oracles."""

from __future__ import annotations

import random

import pytest

from efgkit.core import BehaviorStrategy, Game, Player, StrategyProfile
from efgkit.games import make_bluff, make_goofspiel, make_kuhn, make_ocp, make_pam
from efgkit.tree import build_tree

ALL_GAMES = {
    "kuhn": make_kuhn,
    "ocp4": lambda: make_ocp(4),
    "goof3": lambda: make_goofspiel(3),
    "bluff2": lambda: make_bluff(2),
    "pam222": lambda: make_pam(2, 2, 2),
}


@pytest.fixture
def kuhn():
    return make_kuhn()


@pytest.fixture(params=sorted(ALL_GAMES))
def small_game(request):
    return ALL_GAMES[request.param]()


def random_profile(game: Game, rng: random.Random, zeros: bool = False) -> StrategyProfile:
    """Random full profile; with ``zeros`` some actions get probability 0."""
    tree = build_tree(game)
    tables = {Player.P1: {}, Player.P2: {}}
    for idx, key in enumerate(tree.infosets):
        n = tree.infoset_actions[idx]
        w = [rng.random() for _ in range(n)]
        if zeros and n > 1 and rng.random() < 0.3:
            w[rng.randrange(n)] = 0.0
        total = sum(w)
        tables[key.player][key.obs] = tuple(x / total for x in w)
    return StrategyProfile(
        BehaviorStrategy(Player.P1, tables[Player.P1]), BehaviorStrategy(Player.P2, tables[Player.P2])
    )


def brute_value(game: Game, profile: StrategyProfile, h=(), player: Player = Player.P1) -> float:
    """Expected utility by direct recursion over the game's history functions."""
    if game.is_terminal(h):
        return game.utility(h, player)
    p = game.current_player(h)
    n = game.num_actions(h)
    if p is Player.CHANCE:
        probs = game.chance_probs(h)
    else:
        probs = profile[p].probs(game.infoset_key(h, p), n)
    return sum(q * brute_value(game, profile, h + (a,), player) for a, q in enumerate(probs) if q > 0)


def terminal_histories(game: Game, h=()):
    if game.is_terminal(h):
        yield h
        return
    for a in range(game.num_actions(h)):
        yield from terminal_histories(game, h + (a,))
