"""Goofspiel with a fixed decreasing point stack and outcome-only feedback.

Each round P1 picks a bid card, then P2 picks without seeing it.  Both then
learn only whether they won, lost or tied the round.  Tied rounds discard the
point card.  Action ids index the mover's remaining hand in ascending order.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..core import Game, History, Player
from ..errors import ParameterError


@dataclass(frozen=True)
class Goofspiel(Game):
    n: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ParameterError("Goofspiel needs N >= 2")

    @property
    def name(self) -> str:  # type: ignore[override]
        return f"goof:{self.n}"

    def prize(self, rnd: int) -> int:
        return self.n - rnd

    def bids(self, h: History) -> tuple[list[int], list[int]]:
        """Decode local action ids into the card values bid so far."""
        hands = [list(range(1, self.n + 1)), list(range(1, self.n + 1))]
        played: tuple[list[int], list[int]] = ([], [])
        for k, a in enumerate(h):
            p = k % 2
            played[p].append(hands[p].pop(a))
        return played

    def is_terminal(self, h: History) -> bool:
        return len(h) == 2 * self.n

    def current_player(self, h: History) -> Player:
        return Player(len(h) % 2)

    def num_actions(self, h: History) -> int:
        return self.n - len(h) // 2

    def chance_probs(self, h: History) -> tuple[float, ...]:
        return ()

    def scores(self, h: History) -> tuple[int, int]:
        b1, b2 = self.bids(h)
        s1 = s2 = 0
        for rnd, (x, y) in enumerate(zip(b1, b2)):
            if x > y:
                s1 += self.prize(rnd)
            elif y > x:
                s2 += self.prize(rnd)
        return s1, s2

    def utility(self, z: History, player: Player) -> float:
        s1, s2 = self.scores(z)
        u = (s1 > s2) - (s1 < s2)
        return float(u if player is Player.P1 else -u)

    def infoset_key(self, h: History, player: Player) -> bytes:
        b1, b2 = self.bids(h)
        mine, theirs = (b1, b2) if player is Player.P1 else (b2, b1)
        parts = []
        for x, y in zip(mine, theirs):
            parts.append(f"{x}{'W' if x > y else 'L' if x < y else 'T'}")
        if len(mine) > len(theirs):
            # own bid of the current round is known to its owner
            parts.append(f"{mine[-1]}?")
        return ",".join(parts).encode()

    def action_name(self, h: History, a: int) -> str:
        p = len(h) % 2
        hand = sorted(set(range(1, self.n + 1)) - set(self.bids(h)[p]))
        return f"bid{hand[a]}"


def make_goofspiel(n: int) -> Goofspiel:
    return Goofspiel(n)
