"""Extensive-form game abstraction, behavior strategies and reach calculus.

A game is described by pure functions on histories.  A history is a tuple of
small integers from the root; chance outcomes are recorded in the history the
same way as player actions, as an index into the outcomes listed by
``chance_probs``.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterator, Mapping, NamedTuple, Sequence

from .errors import GameMismatchError, InvalidHistoryError

History = tuple[int, ...]

PROB_TOL = 1e-9


class Player(IntEnum):
    P1 = 0
    P2 = 1
    CHANCE = -1

    @property
    def opponent(self) -> "Player":
        if self is Player.CHANCE:
            raise ValueError("chance has no opponent")
        return Player(1 - self)

    @property
    def label(self) -> str:
        return "chance" if self is Player.CHANCE else str(int(self) + 1)


def as_player(value: int | str | Player) -> Player:
    """Accept ``Player`` members, 1-based ints/strings ("1", "2") or names."""
    if isinstance(value, Player):
        return value
    if isinstance(value, str):
        v = value.strip().lower()
        if v in ("1", "p1", "player1"):
            return Player.P1
        if v in ("2", "p2", "player2"):
            return Player.P2
        raise ValueError(f"unknown player {value!r}")
    if value in (1, 2):
        return Player(value - 1)
    raise ValueError(f"unknown player {value!r}")


class InfoSetKey(NamedTuple):
    player: Player
    obs: bytes

    def __repr__(self) -> str:
        return f"InfoSetKey(P{self.player.label}, {self.obs.decode(errors='replace')!r})"


class Game(ABC):
    """Rules of a two-player zero-sum game with chance, as functions of histories."""

    name: str
    num_chance_outcomes: int = 0

    @abstractmethod
    def is_terminal(self, h: History) -> bool: ...

    @abstractmethod
    def current_player(self, h: History) -> Player: ...

    @abstractmethod
    def num_actions(self, h: History) -> int:
        """Number of legal actions (or chance outcomes) at a non-terminal history."""

    @abstractmethod
    def chance_probs(self, h: History) -> tuple[float, ...]: ...

    @abstractmethod
    def utility(self, z: History, player: Player) -> float: ...

    @abstractmethod
    def infoset_key(self, h: History, player: Player) -> bytes:
        """Serialized observation of ``player`` at ``h``."""

    def legal_actions(self, h: History) -> range:
        if self.is_terminal(h):
            return range(0)
        return range(self.num_actions(h))

    def action_name(self, h: History, a: int) -> str:
        return str(a)

    def key(self, h: History) -> InfoSetKey:
        p = self.current_player(h)
        return InfoSetKey(p, self.infoset_key(h, p))

    def check_history(self, h: History) -> None:
        """Raise :class:`InvalidHistoryError` unless every prefix step is legal."""
        for k, a in enumerate(h):
            prefix = h[:k]
            if self.is_terminal(prefix):
                raise InvalidHistoryError(f"{self.name}: history {h} continues past terminal {prefix}")
            if not 0 <= a < self.num_actions(prefix):
                raise InvalidHistoryError(f"{self.name}: action {a} illegal after {prefix}")

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class BehaviorStrategy:
    """One player's action distributions keyed by observation bytes.

    Information sets without an entry are read as uniform.
    """

    player: Player
    table: Mapping[bytes, tuple[float, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "player", as_player(self.player))
        clean = {}
        for key, probs in self.table.items():
            probs = tuple(float(x) for x in probs)
            if not probs or min(probs) < 0 or abs(math.fsum(probs) - 1.0) > PROB_TOL:
                raise ValueError(f"bad distribution at {key!r}: {probs}")
            clean[bytes(key)] = probs
        object.__setattr__(self, "table", clean)

    def probs(self, obs: bytes, n: int) -> tuple[float, ...]:
        probs = self.table.get(obs)
        if probs is None:
            return (1.0 / n,) * n
        if len(probs) != n:
            raise GameMismatchError(
                f"player {self.player.label} entry {obs!r} has {len(probs)} actions, expected {n}"
            )
        return probs

    def __contains__(self, obs: bytes) -> bool:
        return obs in self.table

    def __len__(self) -> int:
        return len(self.table)

    def __iter__(self) -> Iterator[bytes]:
        return iter(self.table)

    @classmethod
    def uniform(cls, player: Player) -> "BehaviorStrategy":
        return cls(player, {})


@dataclass(frozen=True)
class StrategyProfile:
    p1: BehaviorStrategy
    p2: BehaviorStrategy

    def __post_init__(self) -> None:
        if self.p1.player is not Player.P1 or self.p2.player is not Player.P2:
            raise ValueError("profile sides must belong to P1 and P2 respectively")

    def __getitem__(self, player: Player) -> BehaviorStrategy:
        return self.p1 if as_player(player) is Player.P1 else self.p2

    def replace(self, strategy: BehaviorStrategy) -> "StrategyProfile":
        if strategy.player is Player.P1:
            return StrategyProfile(strategy, self.p2)
        return StrategyProfile(self.p1, strategy)

    @classmethod
    def uniform(cls) -> "StrategyProfile":
        return cls(BehaviorStrategy.uniform(Player.P1), BehaviorStrategy.uniform(Player.P2))


def step_probability(game: Game, profile: StrategyProfile, h: History, a: int) -> tuple[Player, float]:
    """Who moves at ``h`` and the probability they pick ``a``."""
    p = game.current_player(h)
    if p is Player.CHANCE:
        return p, game.chance_probs(h)[a]
    n = game.num_actions(h)
    return p, profile[p].probs(game.infoset_key(h, p), n)[a]


def reach_probability(game: Game, profile: StrategyProfile, h: History) -> tuple[float, float, float]:
    """Per-contributor reach ``(pi_1, pi_2, pi_chance)`` of history ``h``."""
    game.check_history(h)
    reach = [1.0, 1.0, 1.0]
    for k, a in enumerate(h):
        p, prob = step_probability(game, profile, h[:k], a)
        reach[2 if p is Player.CHANCE else int(p)] *= prob
    return reach[0], reach[1], reach[2]


def is_prefix(h: History, z: History) -> bool:
    return len(h) <= len(z) and z[: len(h)] == h


def tail_probability(
    game: Game,
    profile: StrategyProfile,
    h: History,
    z: History,
    player: Player | None = None,
) -> float:
    """Probability of going from ``h`` to terminal ``z``; 0 if ``h`` is not a prefix.

    With ``player`` given, only that contributor's factors are multiplied.
    """
    game.check_history(z)
    if not game.is_terminal(z):
        raise InvalidHistoryError(f"{z} is not terminal")
    if not is_prefix(h, z):
        return 0.0
    prob = 1.0
    for k in range(len(h), len(z)):
        p, step = step_probability(game, profile, z[:k], z[k])
        if player is None or p is player:
            prob *= step
    return prob


def expected_value(game: Game, profile: StrategyProfile, player: Player) -> float:
    """Exact expected payoff of ``player`` by full tree traversal."""
    from .tree import build_tree

    tree = build_tree(game)
    return tree.expected_value(tree.behavior_arrays(profile), as_player(player))


def iter_histories(game: Game, h: History = ()) -> Iterator[History]:
    """Depth-first preorder walk over every history of the game."""
    stack = [h]
    while stack:
        cur = stack.pop()
        yield cur
        if not game.is_terminal(cur):
            for a in reversed(range(game.num_actions(cur))):
                stack.append(cur + (a,))


def normalize(weights: Sequence[float]) -> tuple[float, ...]:
    total = math.fsum(weights)
    n = len(weights)
    if total <= 0:
        return (1.0 / n,) * n
    return tuple(w / total for w in weights)
