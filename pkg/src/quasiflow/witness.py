"""State-independent backflow witness ``S^T S <= 1``, its flow ``zeta`` and the measure ``N``."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import tolerances as tol
from .errors import QuasiflowError, UnsupportedModel
from .frames import FrameSet
from .grid import TimeGrid, as_times
from .models import (
    DynamicalModel,
    ModelKind,
    channel_at,
    cumulative_integrated_rates,
    generator_at,
    model_rates,
)
from .numerics import jacobi_eigvalsh
from .qpr import rep_channel, rep_generator

THREADS_ENV = "QUASIFLOW_THREADS"

# Random-unitary Markov conditions, as 1-based rate indices alpha = k*d + l.
QUBIT_PAIRS = ((1, 2), (1, 3), (2, 3))
QUTRIT_SIXES = (
    (1, 2, 4, 5, 7, 8),
    (1, 2, 3, 4, 6, 8),
    (1, 2, 3, 5, 6, 7),
    (3, 4, 5, 6, 7, 8),
)


def witness_matrix(S) -> np.ndarray:
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError(f"witness needs a square matrix, got {S.shape}")
    w = S.T @ S
    return 0.5 * (w + w.T)


def witness_eigenvalues(W) -> np.ndarray:
    """Eigenvalues of the symmetric witness matrix, descending (cyclic Jacobi)."""
    return jacobi_eigvalsh(W)


@dataclass
class BackflowSegment:
    start: float
    end: float
    contribution: float


@dataclass
class WitnessTrajectory:
    times: np.ndarray
    eigenvalues: np.ndarray
    trace_norm: np.ndarray
    zeta: np.ndarray
    negativity_flag: np.ndarray
    loewner_flow: np.ndarray
    gaps: np.ndarray
    measure: float = 0.0
    segments: list[BackflowSegment] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def backflow_mask(self) -> np.ndarray:
        return self.zeta > tol.ZETA_EPS

    @property
    def detected(self) -> bool:
        return self.measure > 0


def _positive_area(t0, t1, a, b):
    h = t1 - t0
    if a >= 0 and b >= 0:
        return 0.5 * (a + b) * h, t0, t1
    if a > 0 > b:
        tc = t0 + h * a / (a - b)
        return 0.5 * a * (tc - t0), t0, tc
    if b > 0 > a:
        tc = t0 + h * (-a) / (b - a)
        return 0.5 * b * (t1 - tc), tc, t1
    return 0.0, t0, t0


def backflow_segments(times, zeta, eps: float = tol.ZETA_EPS) -> list[BackflowSegment]:
    """Maximal runs of ``zeta > eps`` with zero crossings located by linear interpolation."""
    times = np.asarray(times, dtype=float)
    z = np.asarray(zeta, dtype=float).copy()
    z[np.abs(z) <= eps] = 0.0
    segments: list[BackflowSegment] = []
    current = None
    for i in range(len(times) - 1):
        a, b = z[i], z[i + 1]
        if not (np.isfinite(a) and np.isfinite(b)):
            current = None
            continue
        area, lo, hi = _positive_area(times[i], times[i + 1], a, b)
        if area > 0:
            if current is not None and current.end == lo:
                current.end = hi
                current.contribution += area
            else:
                current = BackflowSegment(lo, hi, area)
                segments.append(current)
        else:
            current = None
    return segments


def nm_measure(traj: WitnessTrajectory | tuple, eps: float = tol.ZETA_EPS) -> float:
    """Integral of the positive part of ``zeta`` (trapezoid, interpolated crossings)."""
    if isinstance(traj, WitnessTrajectory):
        times, zeta = traj.times, traj.zeta
    else:
        times, zeta = traj
    return float(sum(s.contribution for s in backflow_segments(times, zeta, eps)))


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _point(sup, fs: FrameSet):
    S = rep_channel(sup, fs).S
    W = witness_matrix(S)
    return W, witness_eigenvalues(W), float(np.sum(S * S)), bool(S.min() < -tol.NEGATIVITY_EPS)


def witness_trajectory(channel_fn, times, fs: FrameSet, threads: int | None = None) -> WitnessTrajectory:
    """Witness quantities for ``t -> channel_fn(i, t)`` (a superoperator) on a uniform grid.

    Points whose channel cannot be built are recorded as gaps (NaN).
    """
    times = as_times(times)
    n = fs.n
    threads = threads or _default_threads()

    def evaluate(i):
        try:
            return _point(channel_fn(i, float(times[i])), fs)
        except QuasiflowError:
            return None

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(evaluate, range(len(times))))
    else:
        results = [evaluate(i) for i in range(len(times))]

    T = len(times)
    eig = np.full((T, n), np.nan)
    trace = np.full(T, np.nan)
    neg = np.zeros(T, dtype=bool)
    ws = np.full((T, n, n), np.nan)
    gaps = np.zeros(T, dtype=bool)
    for i, res in enumerate(results):
        if res is None:
            gaps[i] = True
            continue
        ws[i], eig[i], trace[i], neg[i] = res

    h = times[1] - times[0]
    zeta = np.gradient(trace, h, edge_order=2)
    dw = np.gradient(ws, h, axis=0, edge_order=2)
    loewner = np.full(T, np.nan)
    ok = np.all(np.isfinite(dw), axis=(1, 2))
    if ok.any():
        sym = 0.5 * (dw[ok] + dw[ok].transpose(0, 2, 1))
        loewner[ok] = np.linalg.eigvalsh(sym)[:, -1]

    traj = WitnessTrajectory(times, eig, trace, zeta, neg, loewner, gaps)
    traj.segments = backflow_segments(times, zeta)
    traj.measure = float(sum(s.contribution for s in traj.segments))
    if neg.any():
        traj.notes.append("witness precondition violated: quasi-channel has negative entries")
    if gaps.any():
        traj.notes.append(f"{int(gaps.sum())} grid points could not be evaluated")
    return traj


def zeta_trajectory(m: DynamicalModel, fs: FrameSet, grid, threads: int | None = None) -> WitnessTrajectory:
    times = as_times(grid)
    if m.kind is ModelKind.RANDOM_UNITARY:
        big = cumulative_integrated_rates(m.rates, times)
        return witness_trajectory(lambda i, t: channel_at(m, t, integrated=big[i]), times, fs, threads)
    return witness_trajectory(lambda i, t: channel_at(m, t), times, fs, threads)


@dataclass
class InstantFlow:
    t: float
    zeta: float
    loewner: float


def instantaneous_flow(m: DynamicalModel, fs: FrameSet, t: float) -> InstantFlow:
    """Exact ``zeta(t)`` and Loewner flow from the generator: ``dS/dt = L S``.

    ``zeta = 2 Tr(S^T dS/dt)``; the Loewner flow is the largest eigenvalue of
    ``d(S^T S)/dt`` and is positive exactly when some witness eigenvalue grows.
    """
    S = rep_channel(channel_at(m, t, check=False), fs).S
    L = rep_generator(generator_at(m, t), fs).L
    dS = L @ S
    dW = dS.T @ S + S.T @ dS
    return InstantFlow(t, float(np.trace(dW)), float(witness_eigenvalues(0.5 * (dW + dW.T))[0]))


@dataclass
class Criterion:
    name: str
    lhs: float
    satisfied: bool


@dataclass
class CriteriaReport:
    kind: ModelKind
    t: float
    criteria: list[Criterion]

    @property
    def markovian(self) -> bool:
        return all(c.satisfied for c in self.criteria)

    @property
    def min_lhs(self) -> float:
        return min(c.lhs for c in self.criteria)

    def format(self) -> str:
        width = max(len(c.name) for c in self.criteria)
        lines = [f"{self.kind.value} at t = {self.t:.6g}"]
        for c in self.criteria:
            lines.append(f"  {c.name:<{width}} = {c.lhs:+.6e}  {'>= 0 ok' if c.satisfied else '< 0 VIOLATED'}")
        lines.append("Markovian" if self.markovian else "non-Markovian")
        return "\n".join(lines)


def _sum_criterion(gammas, idx):
    lhs = float(sum(gammas[i - 1] for i in idx))
    return Criterion("+".join(f"g{i}" for i in idx), lhs, lhs >= 0)


def markov_criteria(m: DynamicalModel, t: float) -> CriteriaReport:
    if m.kind in (ModelKind.PURE_DECOHERENCE, ModelKind.DISSIPATION):
        g = model_rates(m, t)["gamma"]
        return CriteriaReport(m.kind, t, [Criterion("gamma", g, g >= 0)])
    if m.kind is ModelKind.RANDOM_UNITARY:
        gammas = m.rates.values(t)
        groups = QUBIT_PAIRS if m.d == 2 else QUTRIT_SIXES
        return CriteriaReport(m.kind, t, [_sum_criterion(gammas, idx) for idx in groups])
    raise UnsupportedModel(f"no Markov criteria for {m.kind}")
