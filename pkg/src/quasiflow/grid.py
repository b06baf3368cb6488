"""Uniform time grids for scans."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid of ``steps + 1`` points from ``t0`` to ``t1``."""

    t0: float
    t1: float
    steps: int = 2000

    def __post_init__(self):
        if not self.t1 > self.t0 >= 0:
            raise ValueError(f"need t1 > t0 >= 0, got t0={self.t0}, t1={self.t1}")
        if self.steps < 3:
            raise ValueError(f"need steps >= 3, got {self.steps}")

    @property
    def h(self) -> float:
        return (self.t1 - self.t0) / self.steps

    @property
    def times(self) -> np.ndarray:
        return np.linspace(self.t0, self.t1, self.steps + 1)


def as_times(grid) -> np.ndarray:
    if isinstance(grid, TimeGrid):
        return grid.times
    times = np.asarray(grid, dtype=float)
    if times.ndim != 1 or len(times) < 3:
        raise ValueError("time grid needs at least 3 points")
    steps = np.diff(times)
    if np.any(steps <= 0) or np.ptp(steps) > 1e-9 * max(1.0, abs(times[-1])):
        raise ValueError("time grid must be uniform and increasing")
    return times
