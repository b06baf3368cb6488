"""Quasiprobability representations of states, channels, effects and generators.

Channels are handled as superoperators acting on row-major vectorised
matrices, ``vec(A rho B) = kron(A, B.T) @ vec(rho)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import tolerances as tol
from .errors import (
    DimensionMismatch,
    FrameMismatch,
    NotAnEffect,
    NotAState,
    NotTraceAnnihilating,
    NotTracePreserving,
)
from .frames import FrameKind, FrameSet


def _kind_of(obj):
    return getattr(obj, "frame_kind", None)


@dataclass(frozen=True)
class QuasiState:
    q: np.ndarray
    frame_kind: FrameKind | None = None

    def __post_init__(self):
        q = np.array(self.q, dtype=float).reshape(-1)
        q.setflags(write=False)
        object.__setattr__(self, "q", q)
        if abs(q.sum() - 1.0) > tol.STRUCTURAL * max(1.0, np.abs(q).sum()):
            raise NotAState(f"quasi-distribution sums to {q.sum()!r}, not 1")

    def __len__(self):
        return len(self.q)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.q, dtype=dtype)


@dataclass(frozen=True)
class QuasiChannel:
    """Quasi-stochastic matrix: every column sums to one."""

    S: np.ndarray
    frame_kind: FrameKind | None = None

    def __post_init__(self):
        S = np.array(self.S, dtype=float)
        S.setflags(write=False)
        object.__setattr__(self, "S", S)
        if S.ndim != 2 or S.shape[0] != S.shape[1]:
            raise DimensionMismatch(f"quasi-channel must be square, got {S.shape}")
        dev = np.abs(S.sum(axis=0) - 1.0).max()
        if dev > tol.STRUCTURAL * max(1.0, np.abs(S).max()):
            raise NotTracePreserving(f"column sums deviate from 1 by {dev:.3e}")

    @property
    def is_bistochastic(self) -> bool:
        return bool(np.abs(self.S.sum(axis=1) - 1.0).max() <= tol.RECONSTRUCTION)

    def __matmul__(self, other):
        if isinstance(other, QuasiChannel):
            _check_kinds(self, other)
            return QuasiChannel(self.S @ other.S, self.frame_kind)
        if isinstance(other, QuasiState):
            _check_kinds(self, other)
            return QuasiState(self.S @ other.q, self.frame_kind)
        return self.S @ np.asarray(other)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.S, dtype=dtype)


@dataclass(frozen=True)
class QuasiEffect:
    v: np.ndarray
    frame_kind: FrameKind | None = None

    def __post_init__(self):
        v = np.array(self.v, dtype=float).reshape(-1)
        v.setflags(write=False)
        object.__setattr__(self, "v", v)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.v, dtype=dtype)


@dataclass(frozen=True)
class QuasiGenerator:
    """Real generator matrix whose columns sum to zero."""

    L: np.ndarray
    frame_kind: FrameKind | None = None

    def __post_init__(self):
        L = np.array(self.L, dtype=float)
        L.setflags(write=False)
        object.__setattr__(self, "L", L)
        dev = np.abs(L.sum(axis=0)).max() if L.size else 0.0
        if dev > tol.RECONSTRUCTION * max(1.0, np.abs(L).max()):
            raise NotTraceAnnihilating(f"column sums deviate from 0 by {dev:.3e}")

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.L, dtype=dtype)


def _check_kinds(a, b):
    ka, kb = _kind_of(a), _kind_of(b)
    if ka is not None and kb is not None and ka is not kb:
        raise FrameMismatch(f"{ka.value} object combined with {kb.value} object")


# -- Hilbert-space helpers ---------------------------------------------------

def kraus_to_superop(kraus) -> np.ndarray:
    kraus = np.asarray(kraus, dtype=complex)
    if kraus.ndim == 2:
        kraus = kraus[None]
    return sum(np.kron(k, k.conj()) for k in kraus)


def unitary_superop(u) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    return np.kron(u, u.conj())


def as_superop(channel, d: int | None = None) -> np.ndarray:
    """Normalise a channel given as Kraus operators or as a superoperator."""
    arr = np.asarray(channel, dtype=complex)
    if arr.ndim == 3:
        sup = kraus_to_superop(arr)
    elif arr.ndim == 2 and d is not None and arr.shape == (d * d, d * d):
        sup = arr
    elif arr.ndim == 2 and d is not None and arr.shape == (d, d):
        sup = kraus_to_superop(arr)
    elif arr.ndim == 2 and d is None and arr.shape[0] == arr.shape[1]:
        sup = arr
    else:
        raise DimensionMismatch(f"cannot interpret array of shape {arr.shape} as a channel on d={d}")
    if d is not None and sup.shape != (d * d, d * d):
        raise DimensionMismatch(f"channel acts on dimension {int(np.sqrt(sup.shape[0]))}, expected {d}")
    return sup


def apply_superop(sup, rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    d = rho.shape[0]
    return (np.asarray(sup) @ rho.reshape(-1)).reshape(d, d)


def choi_matrix(sup) -> np.ndarray:
    """``J = sum_ab |a><b| (x) E(|a><b|)``."""
    sup = np.asarray(sup)
    d = int(round(np.sqrt(sup.shape[0])))
    return sup.reshape(d, d, d, d).transpose(2, 0, 3, 1).reshape(d * d, d * d)


def trace_preservation_error(sup) -> float:
    sup = np.asarray(sup)
    d = int(round(np.sqrt(sup.shape[0])))
    vec_id = np.eye(d).reshape(-1)
    return float(np.abs(vec_id @ sup - vec_id).max())


def trace_annihilation_error(gen) -> float:
    gen = np.asarray(gen)
    d = int(round(np.sqrt(gen.shape[0])))
    return float(np.abs(np.eye(d).reshape(-1) @ gen).max())


def check_state(rho, d: int | None = None) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionMismatch(f"density matrix must be square, got {rho.shape}")
    if d is not None and rho.shape[0] != d:
        raise DimensionMismatch(f"state has dimension {rho.shape[0]}, frame has {d}")
    if np.abs(rho - rho.conj().T).max() > tol.RECONSTRUCTION:
        raise NotAState("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > tol.RECONSTRUCTION:
        raise NotAState(f"trace {np.trace(rho).real:.12g} != 1")
    if np.linalg.eigvalsh(rho).min() < tol.PSD_FLOOR:
        raise NotAState(f"negative eigenvalue {np.linalg.eigvalsh(rho).min():.3e}")
    return rho


@lru_cache(maxsize=32)
def _analysis(fs: FrameSet):
    # rows: vec(F_j^T) so that row @ vec(X) = Tr(F_j X); columns: vec(G_k)
    n = fs.n
    analysis = np.transpose(fs.frame, (0, 2, 1)).reshape(n, -1)
    synthesis = fs.dual.reshape(n, -1).T
    return analysis, synthesis


def represent_superop(sup, fs: FrameSet) -> np.ndarray:
    """``M_jk = Tr(F_j X[G_k])`` for any superoperator ``X`` (no checks)."""
    analysis, synthesis = _analysis(fs)
    return (analysis @ np.asarray(sup) @ synthesis).real


# -- representations -------------------------------------------------------

def rep_state(rho, fs: FrameSet) -> QuasiState:
    rho = check_state(rho, fs.d)
    analysis, _ = _analysis(fs)
    return QuasiState((analysis @ rho.reshape(-1)).real, fs.kind)


def reconstruct_state(q, fs: FrameSet) -> np.ndarray:
    q = np.asarray(q, dtype=float).reshape(-1)
    if len(q) != fs.n:
        raise DimensionMismatch(f"quasi-state has length {len(q)}, frame has {fs.n} elements")
    return np.einsum("j,jab->ab", q, fs.dual)


def rep_channel(channel, fs: FrameSet) -> QuasiChannel:
    sup = as_superop(channel, fs.d)
    err = trace_preservation_error(sup)
    if err > tol.RECONSTRUCTION:
        raise NotTracePreserving(f"trace preservation violated by {err:.3e}")
    return QuasiChannel(represent_superop(sup, fs), fs.kind)


def rep_effect(M, fs: FrameSet) -> QuasiEffect:
    M = np.asarray(M, dtype=complex)
    if M.shape != (fs.d, fs.d):
        raise DimensionMismatch(f"effect has shape {M.shape}, expected {(fs.d, fs.d)}")
    if np.abs(M - M.conj().T).max() > tol.RECONSTRUCTION:
        raise NotAnEffect("effect is not Hermitian")
    ev = np.linalg.eigvalsh(M)
    if ev.min() < -tol.RECONSTRUCTION or ev.max() > 1 + tol.RECONSTRUCTION:
        raise NotAnEffect(f"effect eigenvalues [{ev.min():.3e}, {ev.max():.3e}] leave [0, 1]")
    v = np.einsum("ab,jba->j", M, fs.dual).real
    return QuasiEffect(v, fs.kind)


def born_probability(v: QuasiEffect, S: QuasiChannel, q: QuasiState) -> float:
    _check_kinds(v, S)
    _check_kinds(S, q)
    _check_kinds(v, q)
    vv, SS, qq = np.asarray(v, float), np.asarray(S, float), np.asarray(q, float)
    if not (len(vv) == SS.shape[0] == SS.shape[1] == len(qq)):
        raise DimensionMismatch(f"lengths {len(vv)}, {SS.shape}, {len(qq)} do not match")
    return float(vv @ SS @ qq)


def rep_generator(generator, fs: FrameSet) -> QuasiGenerator:
    gen = np.asarray(generator, dtype=complex)
    if gen.shape != (fs.d**2, fs.d**2):
        raise DimensionMismatch(f"generator has shape {gen.shape}, expected {(fs.d**2, fs.d**2)}")
    err = trace_annihilation_error(gen)
    if err > tol.RECONSTRUCTION * max(1.0, np.abs(gen).max()):
        raise NotTraceAnnihilating(f"Tr L[A] != 0 (deviation {err:.3e})")
    return QuasiGenerator(represent_superop(gen, fs), fs.kind)


def kolmogorov_negativity(L) -> float:
    """Total weight of negative off-diagonal entries; zero for a classical rate matrix."""
    L = np.asarray(L, dtype=float)
    off = L[~np.eye(L.shape[0], dtype=bool)]
    return float(-off[off < 0].sum())
