"""Analytic facts about Kuhn Poker used by the metrics and tests.

Parameter names follow the usual Kuhn notation:

* ``alpha``: P1 bets with J in the first round (bluff)
* ``beta``: P1 calls with Q after pass-bet
* ``gamma``: P1 bets with K in the first round
* ``eta``: P2 calls with Q facing a bet
* ``xi``: P2 bets with J after a pass (bluff)
"""

from __future__ import annotations

from dataclasses import dataclass

from ..core import BehaviorStrategy, InfoSetKey, Player, StrategyProfile
from ..errors import ParameterError
from .poker import BET, PASS

J, Q, K = 0, 1, 2

GAME_VALUE = -1.0 / 18.0


def kuhn_key(player: Player, card: int, bets: str) -> InfoSetKey:
    return InfoSetKey(player, f"{card}:{bets}".encode())


# (infoset, action) for every parameter of the equilibrium family; the named
# probability is that of taking BET there.
PARAMETER_SLOTS = {
    "alpha": kuhn_key(Player.P1, J, ""),
    "beta": kuhn_key(Player.P1, Q, "pb"),
    "gamma": kuhn_key(Player.P1, K, ""),
    "eta": kuhn_key(Player.P2, Q, "b"),
    "xi": kuhn_key(Player.P2, J, "p"),
}


@dataclass(frozen=True)
class KuhnEquilibrium:
    gamma: float
    eta: float = 1.0 / 3.0
    xi: float = 1.0 / 3.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.gamma <= 1.0:
            raise ParameterError("gamma must lie in [0, 1]")

    @property
    def alpha(self) -> float:
        return self.gamma / 3.0

    @property
    def beta(self) -> float:
        return (1.0 + self.gamma) / 3.0

    def profile(self) -> StrategyProfile:
        def bet(p: float) -> tuple[float, float]:
            return (1.0 - p, p)

        p1 = {
            b"0:": bet(self.alpha),
            b"1:": bet(0.0),
            b"2:": bet(self.gamma),
            b"0:pb": bet(0.0),
            b"1:pb": bet(self.beta),
            b"2:pb": bet(1.0),
        }
        p2 = {
            b"0:b": bet(0.0),
            b"1:b": bet(self.eta),
            b"2:b": bet(1.0),
            b"0:p": bet(self.xi),
            b"1:p": bet(0.0),
            b"2:p": bet(1.0),
        }
        return StrategyProfile(BehaviorStrategy(Player.P1, p1), BehaviorStrategy(Player.P2, p2))


def kuhn_dominated_actions() -> list[tuple[InfoSetKey, int]]:
    """The seven (infoset, action) pairs no equilibrium ever plays."""
    return [
        (kuhn_key(Player.P1, Q, ""), BET),
        (kuhn_key(Player.P1, J, "pb"), BET),
        (kuhn_key(Player.P1, K, "pb"), PASS),
        (kuhn_key(Player.P2, J, "b"), BET),
        (kuhn_key(Player.P2, K, "b"), PASS),
        (kuhn_key(Player.P2, Q, "p"), BET),
        (kuhn_key(Player.P2, K, "p"), PASS),
    ]
