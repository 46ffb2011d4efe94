"""One-Card Poker, with Kuhn Poker as its three-card instance.

Each player antes 1 chip and may bet 1 more.  Actions are ``0 = pass`` and
``1 = bet`` at every decision.  The root chance node deals an ordered pair of
distinct cards ``(P1 card, P2 card)``; card ``N - 1`` is highest.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations

from ..core import Game, History, Player
from ..errors import ParameterError

PASS, BET = 0, 1

# betting sequence -> (P1 payoff if P1 holds the higher card, P1 payoff otherwise)
_TERMINALS: dict[tuple[int, ...], tuple[int, int]] = {
    (PASS, PASS): (1, -1),
    (PASS, BET, PASS): (-1, -1),
    (PASS, BET, BET): (2, -2),
    (BET, PASS): (1, 1),
    (BET, BET): (2, -2),
}

KUHN_CARD_NAMES = ("J", "Q", "K")


@dataclass(frozen=True)
class OneCardPoker(Game):
    n_cards: int
    name: str = ""
    deals: tuple[tuple[int, int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n_cards < 2:
            raise ParameterError("One-Card Poker needs at least 2 cards")
        if not self.name:
            object.__setattr__(self, "name", f"ocp:{self.n_cards}")
        object.__setattr__(self, "deals", tuple(permutations(range(self.n_cards), 2)))

    @property
    def num_chance_outcomes(self) -> int:
        return len(self.deals)

    def is_terminal(self, h: History) -> bool:
        return len(h) > 1 and h[1:] in _TERMINALS

    def current_player(self, h: History) -> Player:
        if not h:
            return Player.CHANCE
        return Player.P2 if len(h) == 2 else Player.P1

    def num_actions(self, h: History) -> int:
        return len(self.deals) if not h else 2

    def chance_probs(self, h: History) -> tuple[float, ...]:
        return (1.0 / len(self.deals),) * len(self.deals)

    def utility(self, z: History, player: Player) -> float:
        c1, c2 = self.deals[z[0]]
        win, lose = _TERMINALS[z[1:]]
        u = win if c1 > c2 else lose
        return float(u if player is Player.P1 else -u)

    def infoset_key(self, h: History, player: Player) -> bytes:
        if not h:
            return b""
        card = self.deals[h[0]][int(player)]
        bets = "".join("pb"[a] for a in h[1:])
        return f"{card}:{bets}".encode()

    def action_name(self, h: History, a: int) -> str:
        if not h:
            c1, c2 = self.deals[a]
            return f"{self.card_name(c1)}|{self.card_name(c2)}"
        return ("pass", "bet")[a]

    def card_name(self, card: int) -> str:
        if self.n_cards == 3:
            return KUHN_CARD_NAMES[card]
        return str(card)

    def deal_index(self, c1: int, c2: int) -> int:
        return self.deals.index((c1, c2))


def make_ocp(n: int) -> OneCardPoker:
    return OneCardPoker(n)


def make_kuhn() -> OneCardPoker:
    return OneCardPoker(3, name="kuhn")
