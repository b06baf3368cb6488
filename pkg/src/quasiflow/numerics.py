"""Small numerical kernels: cyclic Jacobi eigensolver and adaptive Simpson quadrature."""
from __future__ import annotations

import math

import numpy as np

from . import tolerances as tol
from .errors import NotSymmetric, QuadratureFailure


def jacobi_eigh(a, offdiag_tol: float = tol.JACOBI_OFFDIAG, max_sweeps: int = 60):
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Returns ``(values, vectors)`` with values sorted descending and the
    corresponding eigenvectors as columns.  Sweeps stop once the off-diagonal
    Frobenius norm falls below ``offdiag_tol`` times the matrix norm.
    """
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSymmetric(f"expected a square matrix, got shape {a.shape}")
    scale = max(np.abs(a).max(), 1.0)
    if np.abs(a - a.T).max() > tol.STRUCTURAL * scale:
        raise NotSymmetric(f"asymmetry {np.abs(a - a.T).max():.3e}")
    a = 0.5 * (a + a.T)
    n = a.shape[0]
    v = np.eye(n)
    norm = max(np.linalg.norm(a), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = math.sqrt(max(np.sum(a * a) - np.sum(np.diag(a) ** 2), 0.0))
        if off <= offdiag_tol * norm:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < 1e-18 * norm:
                    a[p, q] = a[q, p] = 0.0
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.hypot(t, 1.0)
                s = t * c
                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap, aq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                a[p, q] = a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    values = np.diag(a).copy()
    order = np.argsort(-values, kind="stable")
    return values[order], v[:, order]


def jacobi_eigvalsh(a, **kwargs) -> np.ndarray:
    return jacobi_eigh(a, **kwargs)[0]


def adaptive_simpson(f, a: float, b: float, eps: float = tol.QUADRATURE, max_depth: int = 50) -> float:
    """Integrate ``f`` over ``[a, b]`` with recursive Simpson refinement."""
    if a == b:
        return 0.0
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    # explicit stack keeps deep refinements off the Python call stack
    total = 0.0
    stack = [(a, b, fa, fm, fb, whole, eps, max_depth)]
    while stack:
        a0, b0, fa0, fm0, fb0, s0, e0, depth = stack.pop()
        m0 = 0.5 * (a0 + b0)
        lm, rm = 0.5 * (a0 + m0), 0.5 * (m0 + b0)
        flm, frm = f(lm), f(rm)
        left = (m0 - a0) / 6.0 * (fa0 + 4.0 * flm + fm0)
        right = (b0 - m0) / 6.0 * (fm0 + 4.0 * frm + fb0)
        delta = left + right - s0
        if abs(delta) <= 15.0 * e0:
            total += left + right + delta / 15.0
            continue
        if depth <= 0:
            raise QuadratureFailure(f"no convergence on [{a0}, {b0}] (error estimate {abs(delta):.3e})")
        stack.append((a0, m0, fa0, flm, fm0, left, 0.5 * e0, depth - 1))
        stack.append((m0, b0, fm0, frm, fb0, right, 0.5 * e0, depth - 1))
    if not math.isfinite(total):
        raise QuadratureFailure("integrand produced non-finite values")
    return total
