import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import ALL_GAMES, brute_value, random_profile
from efgkit.core import (
    BehaviorStrategy,
    InfoSetKey,
    Player,
    StrategyProfile,
    as_player,
    expected_value,
    iter_histories,
    reach_probability,
    tail_probability,
)
from efgkit.errors import GameMismatchError, InvalidHistoryError
from efgkit.games import make_bluff, make_kuhn
from efgkit.games.poker import BET, PASS
from efgkit.tree import build_tree

KQ = make_kuhn().deal_index(2, 1)
UNIFORM = StrategyProfile.uniform()


def test_kq_deal_is_index_five():
    assert KQ == 5


class TestReachProbability:
    def test_root(self, kuhn):
        assert reach_probability(kuhn, UNIFORM, ()) == (1.0, 1.0, 1.0)

    def test_after_deal(self, kuhn):
        assert reach_probability(kuhn, UNIFORM, (KQ,)) == (1.0, 1.0, 1.0 / 6.0)

    def test_after_bet(self, kuhn):
        assert reach_probability(kuhn, UNIFORM, (KQ, BET)) == (0.5, 1.0, 1.0 / 6.0)

    def test_opponent_reach_is_product_of_other_two(self, kuhn):
        pi1, pi2, pic = reach_probability(kuhn, UNIFORM, (KQ, BET))
        assert pi1 * pic == pytest.approx(1.0 / 12.0, abs=0)

    def test_illegal_action(self, kuhn):
        with pytest.raises(InvalidHistoryError):
            reach_probability(kuhn, UNIFORM, (6,))
        with pytest.raises(InvalidHistoryError):
            reach_probability(kuhn, UNIFORM, (KQ, PASS, PASS, PASS))


class TestTailProbability:
    def test_empty_remainder(self, kuhn):
        z = (KQ, BET, PASS)
        assert tail_probability(kuhn, UNIFORM, z, z) == 1.0

    def test_worked_example_tails(self, kuhn):
        z = (KQ, BET, PASS)
        assert tail_probability(kuhn, UNIFORM, (KQ, BET), z) == 0.5
        assert tail_probability(kuhn, UNIFORM, (KQ,), z) == 0.25

    def test_not_a_prefix(self, kuhn):
        assert tail_probability(kuhn, UNIFORM, (KQ, PASS), (KQ, BET, PASS)) == 0.0

    def test_per_player_variant(self, kuhn):
        z = (KQ, BET, PASS)
        assert tail_probability(kuhn, UNIFORM, (KQ,), z, Player.P1) == 0.5
        assert tail_probability(kuhn, UNIFORM, (), z, Player.CHANCE) == pytest.approx(1 / 6)

    def test_requires_terminal(self, kuhn):
        with pytest.raises(InvalidHistoryError):
            tail_probability(kuhn, UNIFORM, (), (KQ, BET))


class TestExpectedValue:
    def test_kuhn_equilibrium_value(self, kuhn):
        from efgkit.games import KuhnEquilibrium

        assert expected_value(kuhn, KuhnEquilibrium(0.0).profile(), Player.P1) == pytest.approx(-1 / 18, abs=1e-12)

    def test_uniform_kuhn_matches_terminal_enumeration(self, kuhn):
        # 6 deals x 5 betting sequences, each weighted by chance and uniform play
        from conftest import terminal_histories

        total = 0.0
        for z in terminal_histories(kuhn):
            pi1, pi2, pic = reach_probability(kuhn, UNIFORM, z)
            total += pi1 * pi2 * pic * kuhn.utility(z, Player.P1)
        assert len(list(terminal_histories(kuhn))) == 30
        assert expected_value(kuhn, UNIFORM, Player.P1) == pytest.approx(total, abs=1e-15)
        assert total == pytest.approx(0.125, abs=1e-15)

    def test_missing_entries_are_uniform(self, kuhn):
        partial = StrategyProfile(BehaviorStrategy(Player.P1, {b"2:": (0.0, 1.0)}), BehaviorStrategy.uniform(Player.P2))
        assert expected_value(kuhn, partial, Player.P1) == pytest.approx(brute_value(kuhn, partial), abs=1e-14)


@pytest.mark.parametrize("name", sorted(ALL_GAMES))
def test_zero_sum_random_profiles(name):
    game = ALL_GAMES[name]()
    rng = random.Random(11)
    for _ in range(20):
        prof = random_profile(game, rng)
        u1 = expected_value(game, prof, Player.P1)
        u2 = expected_value(game, prof, Player.P2)
        assert abs(u1 + u2) <= 1e-12
        assert u1 == pytest.approx(brute_value(game, prof), abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), which=st.sampled_from(["kuhn", "bluff2"]))
def test_reach_decomposition(seed, which):
    game = make_kuhn() if which == "kuhn" else make_bluff(2)
    tree = build_tree(game)
    prof = random_profile(game, random.Random(seed), zeros=True)
    rng = random.Random(seed + 1)
    z_nodes = tree.terminals()
    for _ in range(5):
        z = tree.histories[rng.choice(z_nodes)]
        full = math.prod(reach_probability(game, prof, z))
        for k in range(len(z) + 1):
            h = z[:k]
            pi = math.prod(reach_probability(game, prof, h))
            # chain rule: the tail equals the product of the step probabilities
            assert pi * tail_probability(game, prof, h, z) == pytest.approx(full, abs=1e-12)


def test_infoset_consistency(small_game):
    seen = {}
    for h in iter_histories(small_game):
        if small_game.is_terminal(h) or small_game.current_player(h) is Player.CHANCE:
            continue
        key = small_game.key(h)
        sig = (small_game.current_player(h), small_game.num_actions(h))
        assert seen.setdefault(key, sig) == sig


class TestStrategies:
    def test_rejects_bad_distribution(self):
        with pytest.raises(ValueError):
            BehaviorStrategy(Player.P1, {b"x": (0.7, 0.7)})
        with pytest.raises(ValueError):
            BehaviorStrategy(Player.P1, {b"x": (-0.5, 1.5)})

    def test_length_mismatch(self):
        s = BehaviorStrategy(Player.P1, {b"x": (0.5, 0.5)})
        with pytest.raises(GameMismatchError):
            s.probs(b"x", 3)

    def test_profile_sides(self):
        with pytest.raises(ValueError):
            StrategyProfile(BehaviorStrategy.uniform(Player.P2), BehaviorStrategy.uniform(Player.P2))

    def test_as_player(self):
        assert as_player("1") is Player.P1
        assert as_player(2) is Player.P2
        assert as_player("p2") is Player.P2
        with pytest.raises(ValueError):
            as_player(3)

    def test_key_repr(self):
        assert "1:b" in repr(InfoSetKey(Player.P2, b"1:b"))
