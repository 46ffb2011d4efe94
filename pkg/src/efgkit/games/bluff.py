"""Bluff(1,1,N): one private N-sided die each, bidding on the pair of dice.

Bids ``(quantity, face)`` with quantity in {1, 2} are ordered by
``(quantity, face)`` and numbered ``0 .. 2N-1``.  At each turn the mover may
raise to any higher bid or, once a bid exists, call bluff.  Local action ids
list the legal raises in increasing order followed by the call.  Face N is
wild: a bid on a face below N counts dice showing that face or N, a bid on
face N counts only dice showing N.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..core import Game, History, Player
from ..errors import ParameterError


@dataclass(frozen=True)
class Bluff(Game):
    faces: int

    def __post_init__(self) -> None:
        if self.faces < 2:
            raise ParameterError("Bluff needs N >= 2 die faces")

    @property
    def name(self) -> str:  # type: ignore[override]
        return f"bluff:{self.faces}"

    @property
    def num_chance_outcomes(self) -> int:
        return self.faces * self.faces

    @property
    def num_bids(self) -> int:
        return 2 * self.faces

    def dice(self, h: History) -> tuple[int, int]:
        """Face values (1-based) rolled by P1 and P2."""
        return h[0] // self.faces + 1, h[0] % self.faces + 1

    def bid(self, index: int) -> tuple[int, int]:
        return index // self.faces + 1, index % self.faces + 1

    def bid_sequence(self, h: History) -> tuple[list[int], bool]:
        """Bid indices made after the deal, and whether the last move was a call."""
        bids: list[int] = []
        last = -1
        for a in h[1:]:
            raises = self.num_bids - 1 - last
            if a == raises:
                return bids, True
            last = last + 1 + a
            bids.append(last)
        return bids, False

    def is_terminal(self, h: History) -> bool:
        return len(h) > 1 and self.bid_sequence(h)[1]

    def current_player(self, h: History) -> Player:
        if not h:
            return Player.CHANCE
        return Player((len(h) - 1) % 2)

    def num_actions(self, h: History) -> int:
        if not h:
            return self.faces * self.faces
        bids, _ = self.bid_sequence(h)
        last = bids[-1] if bids else -1
        return self.num_bids - 1 - last + (1 if bids else 0)

    def chance_probs(self, h: History) -> tuple[float, ...]:
        n = self.faces * self.faces
        return (1.0 / n,) * n

    def bid_is_true(self, dice: tuple[int, int], bid_index: int) -> bool:
        q, f = self.bid(bid_index)
        wild = self.faces
        if f == wild:
            count = sum(d == wild for d in dice)
        else:
            count = sum(d == f or d == wild for d in dice)
        return count >= q

    def utility(self, z: History, player: Player) -> float:
        bids, called = self.bid_sequence(z)
        caller = Player((len(z) - 2) % 2)
        caller_wins = not self.bid_is_true(self.dice(z), bids[-1])
        u_caller = 1.0 if caller_wins else -1.0
        return u_caller if player is caller else -u_caller

    def infoset_key(self, h: History, player: Player) -> bytes:
        if not h:
            return b""
        die = self.dice(h)[int(player)]
        bids, _ = self.bid_sequence(h)
        return f"{die}:{','.join(map(str, bids))}".encode()

    def action_name(self, h: History, a: int) -> str:
        if not h:
            d1, d2 = self.dice((a,))
            return f"roll{d1}|{d2}"
        bids, _ = self.bid_sequence(h)
        last = bids[-1] if bids else -1
        if a == self.num_bids - 1 - last:
            return "call"
        q, f = self.bid(last + 1 + a)
        return f"{q}x{f}"

    def action_for(self, h: History, move: str | tuple[int, int]) -> int:
        """Local action id for ``"call"`` or a ``(quantity, face)`` bid at ``h``."""
        bids, _ = self.bid_sequence(h)
        last = bids[-1] if bids else -1
        if move == "call":
            if not bids:
                raise ValueError("no outstanding bid to call")
            return self.num_bids - 1 - last
        q, f = move  # type: ignore[misc]
        index = (q - 1) * self.faces + (f - 1)
        if index <= last:
            raise ValueError(f"bid {move} does not raise the current bid")
        return index - last - 1


def make_bluff(n: int) -> Bluff:
    return Bluff(n)
