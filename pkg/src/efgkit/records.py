"""Metric series and their CSV form."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import IO, Iterable

from .strategy_file import format_prob

RUN_COLUMNS = ("iteration", "metric", "value", "elapsed_ms", "nodes_visited", "seed", "game", "algo")
SWEEP_COLUMNS = ("p", "seed", "exploitation", "exploitability", "game", "iterations")


@dataclass(frozen=True)
class RunRow:
    iteration: int
    metric: str
    value: float
    elapsed_ms: float
    nodes_visited: int


@dataclass
class RunRecord:
    """Long-format checkpoint series of one run."""

    game: str
    algo: str
    seed: int
    rows: list[RunRow] = field(default_factory=list)

    def add(self, iteration: int, metric: str, value: float, elapsed_ms: float, nodes_visited: int) -> None:
        last = self.series(metric)
        if last and iteration <= last[-1].iteration:
            raise ValueError(f"{metric}: iteration {iteration} does not follow {last[-1].iteration}")
        self.rows.append(RunRow(int(iteration), metric, float(value), float(elapsed_ms), int(nodes_visited)))

    def series(self, metric: str) -> list[RunRow]:
        return [r for r in self.rows if r.metric == metric]

    def values(self, metric: str) -> list[float]:
        return [r.value for r in self.series(metric)]

    def csv_rows(self, timing: bool = False) -> Iterable[list[str]]:
        for r in self.rows:
            elapsed = f"{r.elapsed_ms:.3f}" if timing else "0"
            yield [str(r.iteration), r.metric, format_prob(r.value), elapsed, str(r.nodes_visited),
                   str(self.seed), self.game, self.algo]

    def write_csv(self, fh: IO[str], timing: bool = False, header: bool = True) -> None:
        """Write the rows; elapsed time is zeroed unless ``timing`` so reruns are byte-identical."""
        writer = csv.writer(fh, lineterminator="\n")
        if header:
            writer.writerow(RUN_COLUMNS)
        writer.writerows(self.csv_rows(timing))


def read_run_csv(fh: IO[str]) -> list[dict[str, str]]:
    return list(csv.DictReader(fh))
