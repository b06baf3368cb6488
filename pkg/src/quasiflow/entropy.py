"""Renyi entropies of quasi-distributions, collision-entropy scans and quasi-majorization."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog

from . import tolerances as tol
from .errors import DimensionMismatch, DivergentSum, InvalidAlpha, QuasiflowError
from .frames import FrameSet
from .grid import as_times
from .models import DynamicalModel, ModelKind, channel_at, cumulative_integrated_rates
from .qpr import QuasiState, rep_channel


@dataclass(frozen=True)
class AlphaOrder:
    """Renyi order ``alpha = 2a / (2b - 1)`` with positive integers ``a >= b``."""

    a: int
    b: int

    def __post_init__(self):
        if not (isinstance(self.a, int) and isinstance(self.b, int)):
            raise InvalidAlpha("a and b must be integers")
        if self.b < 1 or self.a < self.b:
            raise InvalidAlpha(f"need positive integers a >= b, got a={self.a}, b={self.b}")

    @property
    def value(self) -> float:
        return 2 * self.a / (2 * self.b - 1)

    @classmethod
    def from_value(cls, alpha, max_denominator: int = 10**6) -> "AlphaOrder":
        """Smallest ``(a, b)`` representing ``alpha``; rejects orders outside the family."""
        frac = Fraction(alpha).limit_denominator(max_denominator)
        if abs(float(frac) - float(alpha)) > 1e-12 * max(1.0, abs(float(alpha))):
            raise InvalidAlpha(f"alpha={alpha} is not a recognisable rational")
        p, r = frac.numerator, frac.denominator
        if p % 2 or r % 2 == 0:
            raise InvalidAlpha(f"alpha={alpha} is not of the form 2a/(2b-1)")
        a, b = p // 2, (r + 1) // 2
        if a < b:
            raise InvalidAlpha(f"alpha={alpha} needs a >= b (alpha > 1), got a={a}, b={b}")
        return cls(a, b)


COLLISION = AlphaOrder(1, 1)


def _vector(q) -> np.ndarray:
    return np.asarray(q.q if isinstance(q, QuasiState) else q, dtype=float).reshape(-1)


def renyi_entropy(q, order) -> float:
    order = order if isinstance(order, AlphaOrder) else AlphaOrder.from_value(order)
    q = _vector(q)
    if order.b == 1:
        powered = q ** (2 * order.a)
    else:
        # real (2b-1)-th root of the non-negative even power
        powered = (q ** (2 * order.a)) ** (1.0 / (2 * order.b - 1))
    total = float(powered.sum())
    if total <= 0:
        raise DivergentSum(f"sum of q^alpha is {total}")
    return math.log(total) / (1.0 - order.value)


def collision_entropy(q) -> float:
    q = _vector(q)
    return -math.log(float(q @ q))


@dataclass
class H2Interval:
    start: float
    end: float


@dataclass
class H2Scan:
    times: np.ndarray
    h2: np.ndarray
    slope: np.ndarray
    violation: np.ndarray
    intervals: list[H2Interval]
    warnings: list[str]


def _runs(times, slope, eps):
    """Maximal runs of ``slope < -eps`` with endpoints interpolated on the slope."""
    bad = slope < -eps
    intervals = []
    i, n = 0, len(times)
    while i < n:
        if not bad[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and bad[j + 1]:
            j += 1
        start, end = times[i], times[j]
        if i > 0 and np.isfinite(slope[i - 1]):
            s0, s1 = slope[i - 1] + eps, slope[i] + eps
            start = times[i - 1] + (times[i] - times[i - 1]) * s0 / (s0 - s1)
        if j + 1 < n and np.isfinite(slope[j + 1]):
            s0, s1 = slope[j] + eps, slope[j + 1] + eps
            end = times[j] + (times[j + 1] - times[j]) * s0 / (s0 - s1)
        intervals.append(H2Interval(float(start), float(end)))
        i = j + 1
    return intervals


def h2_monotonicity_scan(m: DynamicalModel, fs: FrameSet, q0, grid) -> H2Scan:
    """Track ``H2(S(t) q0)`` and report where it decreases."""
    times = as_times(grid)
    q0 = _vector(q0)
    if len(q0) != fs.n:
        raise DimensionMismatch(f"initial quasi-state has length {len(q0)}, frame has {fs.n}")
    notes = []
    big = cumulative_integrated_rates(m.rates, times) if m.kind is ModelKind.RANDOM_UNITARY else None
    h2 = np.full(len(times), np.nan)
    not_bistochastic = False
    for i, t in enumerate(times):
        try:
            S = rep_channel(channel_at(m, float(t), integrated=None if big is None else big[i]), fs)
        except QuasiflowError:
            continue
        not_bistochastic |= not S.is_bistochastic
        h2[i] = collision_entropy(S.S @ q0)
    if not_bistochastic:
        notes.append("map is not bistochastic on the grid; monotonicity is not guaranteed")
    slope = np.gradient(h2, times[1] - times[0], edge_order=2)
    violation = slope < -tol.SLOPE_EPS
    return H2Scan(times, h2, slope, violation, _runs(times, slope, tol.SLOPE_EPS), notes)


def majorization_check(q, q2, feas_tol: float = tol.LP_FEASIBILITY) -> bool:
    """Whether some entrywise non-negative bistochastic ``A`` maps ``q`` to ``q2``."""
    q, q2 = _vector(q), _vector(q2)
    n = len(q)
    if len(q2) != n:
        raise DimensionMismatch(f"lengths {n} and {len(q2)} differ")
    # unknowns: A flattened row-major, A[i, j] -> i*n + j
    rows = np.kron(np.eye(n), np.ones(n))
    cols = np.kron(np.ones(n), np.eye(n))
    image = np.kron(np.eye(n), q)
    a_eq = np.vstack([rows, cols, image])
    b_eq = np.concatenate([np.ones(n), np.ones(n), q2])
    res = linprog(np.zeros(n * n), A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs",
                  options={"primal_feasibility_tolerance": feas_tol})
    if res.status != 0:
        return False
    A = res.x.reshape(n, n)
    return bool(np.abs(a_eq @ res.x - b_eq).max() <= 10 * feas_tol and A.min() >= -feas_tol)
