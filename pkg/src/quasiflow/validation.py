"""Independent cross-checks of the witness: BLP trace-distance flow, CP rate signs, negativity audits."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import tolerances as tol
from .errors import DimensionMismatch, QuasiflowError, UnsupportedDimension, UnsupportedModel
from .grid import as_times
from .models import DynamicalModel, ModelKind, channel_at, cumulative_integrated_rates, model_rates
from .qpr import apply_superop, check_state


def trace_distance(rho1, rho2) -> float:
    rho1, rho2 = np.asarray(rho1, dtype=complex), np.asarray(rho2, dtype=complex)
    if rho1.shape != rho2.shape:
        raise DimensionMismatch(f"shapes {rho1.shape} and {rho2.shape} differ")
    diff = rho1 - rho2
    return float(0.5 * np.abs(np.linalg.eigvalsh(0.5 * (diff + diff.conj().T))).sum())


def _channels(m: DynamicalModel, times) -> np.ndarray:
    big = cumulative_integrated_rates(m.rates, times) if m.kind is ModelKind.RANDOM_UNITARY else None
    out = np.full((len(times), m.d**2, m.d**2), np.nan, dtype=complex)
    for i, t in enumerate(times):
        try:
            out[i] = channel_at(m, float(t), integrated=None if big is None else big[i])
        except QuasiflowError:
            pass
    return out


def positive_integral(times, values) -> np.ndarray:
    """Integral of the positive part of piecewise-linear samples, column by column."""
    times = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    v = v.reshape(len(times), -1)
    v = np.where(np.abs(v) <= tol.ZETA_EPS, 0.0, v)
    a, b = v[:-1], v[1:]
    h = np.diff(times)[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        both = np.where((a >= 0) & (b >= 0), 0.5 * (a + b) * h, 0.0)
        down = np.where((a > 0) & (b < 0), 0.5 * a * a / (a - b) * h, 0.0)
        up = np.where((b > 0) & (a < 0), 0.5 * b * b / (b - a) * h, 0.0)
    parts = np.nan_to_num(both + down + up, nan=0.0)
    return parts.sum(axis=0)


def blp_flow(m: DynamicalModel, rho1, rho2, grid) -> np.ndarray:
    """``sigma(t) = dD(Lambda_t rho1, Lambda_t rho2)/dt`` by central differences."""
    times = as_times(grid)
    rho1, rho2 = check_state(rho1, m.d), check_state(rho2, m.d)
    dist = np.array([
        trace_distance(apply_superop(sup, rho1), apply_superop(sup, rho2)) if np.isfinite(sup).all() else np.nan
        for sup in _channels(m, times)
    ])
    return np.gradient(dist, times[1] - times[0], edge_order=2)


@dataclass
class BlpResult:
    measure: float
    best_pair: tuple[tuple[float, float], tuple[float, float]]
    flow: np.ndarray
    times: np.ndarray


def bloch_state(theta: float, phi: float) -> np.ndarray:
    psi = np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])
    return np.outer(psi, psi.conj())


def blp_measure(m: DynamicalModel, grid, resolution: int = 24) -> BlpResult:
    """Grid search over antipodal pure qubit pairs for the largest positive trace-distance flow.

    Polar angles step by ``pi / resolution`` (endpoints included, so even
    resolutions contain the equator); azimuths step by ``2 pi / resolution``.
    """
    if m.d != 2:
        raise UnsupportedDimension(f"BLP oracle is qubit-only, got d={m.d}")
    if resolution < 12:
        raise ValueError(f"angular resolution must be >= 12, got {resolution}")
    times = as_times(grid)
    thetas = np.linspace(0.0, np.pi, resolution + 1)
    phis = np.linspace(0.0, 2 * np.pi, resolution, endpoint=False)
    th, ph = np.meshgrid(thetas, phis, indexing="ij")
    th, ph = th.ravel(), ph.ravel()
    # rho(n) - rho(-n) = n . sigma
    nx, ny, nz = np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)
    diff = np.stack([nz, nx - 1j * ny, nx + 1j * ny, -nz], axis=1)
    evolved = np.einsum("tij,pj->tpi", _channels(m, times), diff).reshape(len(times), len(th), 2, 2)
    evolved = 0.5 * (evolved + evolved.conj().swapaxes(-1, -2))
    finite = np.isfinite(evolved).all(axis=(1, 2, 3))
    dist = np.full((len(times), len(th)), np.nan)
    dist[finite] = 0.5 * np.abs(np.linalg.eigvalsh(evolved[finite])).sum(axis=-1)
    flow = np.gradient(dist, times[1] - times[0], axis=0, edge_order=2)
    totals = positive_integral(times, flow)
    best = int(np.argmax(totals))
    pair = ((float(th[best]), float(ph[best])), (float(np.pi - th[best]), float((ph[best] + np.pi) % (2 * np.pi))))
    return BlpResult(float(totals[best]), pair, flow[:, best], times)


@dataclass
class CpReport:
    t: float
    rates: dict[str, float]
    flags: dict[str, bool]

    @property
    def cp_divisible(self) -> bool:
        return all(self.flags.values())


def cp_rate_report(m: DynamicalModel, t: float) -> CpReport:
    """Sign of every master-equation rate; CP-divisible at ``t`` when none is negative."""
    if m.kind not in tuple(ModelKind):
        raise UnsupportedModel(f"no rate report for {m.kind}")
    rates = model_rates(m, t)
    return CpReport(t, rates, {k: v >= 0 for k, v in rates.items()})


def nonnegativity_audit(S) -> tuple[float, bool]:
    S = np.asarray(S, dtype=float)
    lowest = float(S.min())
    return lowest, lowest >= -tol.NEGATIVITY_EPS
