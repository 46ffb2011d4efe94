"""Random streams.

Every run owns one ``random.Random`` (Mersenne Twister) seeded with an int.
Independent sub-runs (sweep points, restricted-player runs, seeds of a batch)
get child seeds from ``numpy.random.SeedSequence(seed).spawn``, so adding a
sub-run never perturbs the streams of the others.
"""

from __future__ import annotations

import random
from typing import Sequence

import numpy as np


def make_rng(seed: int) -> random.Random:
    return random.Random(seed)


def spawn_seeds(seed: int, n: int) -> list[int]:
    return [int(child.generate_state(1, dtype=np.uint64)[0]) for child in np.random.SeedSequence(seed).spawn(n)]


class ScriptedRng:
    """Replays fixed uniforms; used to force a sampled path in tests."""

    def __init__(self, uniforms: Sequence[float]):
        self._values = list(uniforms)
        self._pos = 0

    def random(self) -> float:
        if self._pos >= len(self._values):
            raise IndexError("scripted random stream exhausted")
        u = self._values[self._pos]
        self._pos += 1
        return u


def sample_index(probs: Sequence[float], u: float) -> int:
    """Inverse-CDF pick; never returns a zero-probability index."""
    acc = 0.0
    last = 0
    for i, p in enumerate(probs):
        if p <= 0.0:
            continue
        acc += p
        last = i
        if u < acc:
            return i
    return last
