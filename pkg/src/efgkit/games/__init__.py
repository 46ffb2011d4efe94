"""Concrete games and the ``kind:params`` selection strings used by the CLI."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..core import Game
from ..errors import ParameterError
from .bluff import Bluff, make_bluff
from .dominance import dominated_actions, verify_dominated
from .goofspiel import Goofspiel, make_goofspiel
from .kuhn import KuhnEquilibrium, kuhn_dominated_actions
from .pam import PrincessMonster, make_pam
from .poker import OneCardPoker, make_kuhn, make_ocp


@dataclass(frozen=True)
class GameParams:
    kind: str
    n: int = 0
    rows: int = 0
    cols: int = 0
    horizon: int = 0

    def build(self) -> Game:
        if self.kind == "kuhn":
            return make_kuhn()
        if self.kind == "ocp":
            return make_ocp(self.n)
        if self.kind == "goof":
            return make_goofspiel(self.n)
        if self.kind == "bluff":
            return make_bluff(self.n)
        if self.kind == "pam":
            return make_pam(self.rows, self.cols, self.horizon)
        raise ParameterError(f"unknown game kind {self.kind!r}")


_PATTERN = re.compile(r"^(kuhn|ocp:(\d+)|goof:(\d+)|bluff:(\d+)|pam:(\d+)x(\d+)x(\d+))$")


def parse_game_params(text: str) -> GameParams:
    m = _PATTERN.match(text.strip().lower())
    if not m:
        raise ParameterError(
            f"bad game string {text!r}; expected kuhn, ocp:N, goof:N, bluff:N or pam:RxCxH"
        )
    s = m.group(1)
    if s == "kuhn":
        return GameParams("kuhn")
    if m.group(2):
        return GameParams("ocp", n=int(m.group(2)))
    if m.group(3):
        return GameParams("goof", n=int(m.group(3)))
    if m.group(4):
        return GameParams("bluff", n=int(m.group(4)))
    return GameParams("pam", rows=int(m.group(5)), cols=int(m.group(6)), horizon=int(m.group(7)))


def parse_game(text: str) -> Game:
    return parse_game_params(text).build()


def is_kuhn(game: Game) -> bool:
    return isinstance(game, OneCardPoker) and game.n_cards == 3


__all__ = [
    "Bluff",
    "GameParams",
    "Goofspiel",
    "KuhnEquilibrium",
    "OneCardPoker",
    "PrincessMonster",
    "dominated_actions",
    "is_kuhn",
    "kuhn_dominated_actions",
    "make_bluff",
    "make_goofspiel",
    "make_kuhn",
    "make_ocp",
    "make_pam",
    "parse_game",
    "parse_game_params",
    "verify_dominated",
]
