"""Strategy text files.

One line per information set, tab separated::

    <player>\t<infoset key as hex>\t<p0>,<p1>,...

``player`` is ``1`` or ``2``; probabilities are written with 17 significant
digits, which round-trips IEEE doubles exactly.  Lines are sorted by key.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

from .core import BehaviorStrategy, Player, StrategyProfile, as_player
from .errors import StrategyFormatError


def format_prob(x: float) -> str:
    return format(x, ".17g")


def dumps(strategies: Iterable[BehaviorStrategy]) -> str:
    rows = []
    for strat in strategies:
        for obs, probs in strat.table.items():
            rows.append((obs.hex(), strat.player.label, ",".join(format_prob(p) for p in probs)))
    rows.sort()
    return "".join(f"{player}\t{key}\t{probs}\n" for key, player, probs in rows)


def loads(text: str) -> dict[Player, BehaviorStrategy]:
    tables: dict[Player, dict[bytes, tuple[float, ...]]] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise StrategyFormatError(f"line {lineno}: expected 3 tab-separated fields")
        try:
            player = as_player(parts[0])
            obs = bytes.fromhex(parts[1])
            probs = tuple(float(x) for x in parts[2].split(","))
        except ValueError as exc:
            raise StrategyFormatError(f"line {lineno}: {exc}") from exc
        table = tables.setdefault(player, {})
        if obs in table:
            raise StrategyFormatError(f"line {lineno}: duplicate key {parts[1]}")
        table[obs] = probs
    try:
        return {p: BehaviorStrategy(p, t) for p, t in tables.items()}
    except ValueError as exc:
        raise StrategyFormatError(str(exc)) from exc


def save_profile(path: str | Path, profile: StrategyProfile) -> None:
    Path(path).write_text(dumps([profile.p1, profile.p2]), encoding="utf-8")


def save_strategy(path: str | Path, strategy: BehaviorStrategy) -> None:
    Path(path).write_text(dumps([strategy]), encoding="utf-8")


def load_strategies(*paths: str | Path) -> dict[Player, BehaviorStrategy]:
    """Merge one or more strategy files; a player may appear in only one of them."""
    merged: dict[Player, BehaviorStrategy] = {}
    for path in paths:
        for player, strat in loads(Path(path).read_text(encoding="utf-8")).items():
            if player in merged:
                raise StrategyFormatError(f"player {player.label} defined in more than one file")
            merged[player] = strat
    return merged


def load_profile(*paths: str | Path) -> StrategyProfile:
    """Profile from files; a player with no lines at all plays uniformly."""
    found = load_strategies(*paths)
    return StrategyProfile(
        found.get(Player.P1, BehaviorStrategy.uniform(Player.P1)),
        found.get(Player.P2, BehaviorStrategy.uniform(Player.P2)),
    )
