"""Princess and Monster on an R x C grid, played in the dark.

P1 is the monster and moves first; P2 is the evader.  Chance places the two
on distinct cells.  Players alternate half-moves to a 4-adjacent cell and
never observe each other.  The game ends when both stand on the same cell
(after either player's move) or after H half-moves.  The evader is paid the
number of half-moves completed before capture, H if never captured.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations

from ..core import Game, History, Player
from ..errors import ParameterError

MONSTER, EVADER = Player.P1, Player.P2


@dataclass(frozen=True)
class PrincessMonster(Game):
    rows: int
    cols: int
    horizon: int
    starts: tuple[tuple[int, int], ...] = field(init=False, repr=False, compare=False)
    neighbors: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1 or self.rows * self.cols < 2 or self.horizon < 1:
            raise ParameterError("PAM needs R*C >= 2 and H >= 1")
        cells = self.rows * self.cols
        object.__setattr__(self, "starts", tuple(permutations(range(cells), 2)))
        nbrs = []
        for cell in range(cells):
            r, c = divmod(cell, self.cols)
            out = []
            for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
                rr, cc = r + dr, c + dc
                if 0 <= rr < self.rows and 0 <= cc < self.cols:
                    out.append(rr * self.cols + cc)
            nbrs.append(tuple(out))
        object.__setattr__(self, "neighbors", tuple(nbrs))

    @property
    def name(self) -> str:  # type: ignore[override]
        return f"pam:{self.rows}x{self.cols}x{self.horizon}"

    @property
    def num_chance_outcomes(self) -> int:
        return len(self.starts)

    def trace(self, h: History) -> tuple[list[int], list[int], bool]:
        """Cell sequences of monster and evader, and whether capture happened."""
        m, e = self.starts[h[0]]
        cells = ([m], [e])
        for k, a in enumerate(h[1:]):
            p = k % 2
            cells[p].append(self.neighbors[cells[p][-1]][a])
            if cells[0][-1] == cells[1][-1]:
                return cells[0], cells[1], True
        return cells[0], cells[1], False

    def is_terminal(self, h: History) -> bool:
        if not h:
            return False
        return len(h) - 1 >= self.horizon or self.trace(h)[2]

    def current_player(self, h: History) -> Player:
        if not h:
            return Player.CHANCE
        return Player((len(h) - 1) % 2)

    def num_actions(self, h: History) -> int:
        if not h:
            return len(self.starts)
        p = (len(h) - 1) % 2
        return len(self.neighbors[self.trace(h)[p][-1]])

    def chance_probs(self, h: History) -> tuple[float, ...]:
        return (1.0 / len(self.starts),) * len(self.starts)

    def evader_payoff(self, z: History) -> int:
        moves = len(z) - 1
        captured = self.trace(z)[2]
        return moves - 1 if captured else moves

    def utility(self, z: History, player: Player) -> float:
        u = float(self.evader_payoff(z))
        return u if player is EVADER else -u

    def infoset_key(self, h: History, player: Player) -> bytes:
        if not h:
            return b""
        own = self.trace(h)[int(player)]
        return ",".join(map(str, own)).encode()

    def action_name(self, h: History, a: int) -> str:
        if not h:
            m, e = self.starts[a]
            return f"start{m}|{e}"
        p = (len(h) - 1) % 2
        return f"to{self.neighbors[self.trace(h)[p][-1]][a]}"


def make_pam(rows: int, cols: int, horizon: int) -> PrincessMonster:
    return PrincessMonster(rows, cols, horizon)
