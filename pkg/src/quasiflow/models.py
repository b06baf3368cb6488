"""Parametrised dynamical-map families and the decoherence/rate functions driving them.

Three model kinds are provided:

* ``PURE_DECOHERENCE`` (qubit): coherences scale by ``G(t)``, populations fixed.
* ``DISSIPATION`` (qubit): amplitude damping towards ``|0><0|`` with amplitude ``G(t)``.
* ``RANDOM_UNITARY`` (qubit or qutrit): Weyl-operator mixture driven by
  ``d*d - 1`` time-dependent rates.

Channels are returned as superoperators in the row-major convention used by
:mod:`quasiflow.qpr`.
"""
from __future__ import annotations

import cmath
import enum
import math
import warnings
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import tolerances as tol
from .errors import (
    IndexOutOfRange,
    InvalidParams,
    NonPositiveProbability,
    NotCPTP,
    SingularDecoherence,
    UnsupportedModel,
)
from .numerics import adaptive_simpson
from .qpr import choi_matrix, trace_preservation_error


def _parse_enum(cls, name):
    if isinstance(name, cls):
        return name
    key = str(name).strip().lower().replace("_", "-")
    for member in cls:
        if key in (member.value, member.name.lower().replace("_", "-"), member.value.replace("-", "")):
            return member
    raise InvalidParams(f"unknown {cls.__name__} {name!r}; choose from {[m.value for m in cls]}")


class DecoherenceFamily(enum.Enum):
    EXPONENTIAL = "exponential"
    DAMPED_OSCILLATORY = "damped-oscillatory"
    JAYNES_CUMMINGS = "jaynes-cummings"


class RateFamily(enum.Enum):
    CONSTANT = "constant"
    RAMP = "ramp"
    DAMPED_OSCILLATORY = "damped-oscillatory"


class ModelKind(enum.Enum):
    PURE_DECOHERENCE = "pure-decoherence"
    DISSIPATION = "dissipation"
    RANDOM_UNITARY = "random-unitary"


DECOHERENCE_PARAMS = {
    DecoherenceFamily.EXPONENTIAL: ("kappa",),
    DecoherenceFamily.DAMPED_OSCILLATORY: ("kappa", "omega"),
    DecoherenceFamily.JAYNES_CUMMINGS: ("lambda", "gamma0"),
}

RATE_PARAMS = {
    RateFamily.CONSTANT: ("c",),
    RateFamily.RAMP: ("a", "b"),
    RateFamily.DAMPED_OSCILLATORY: ("c", "kappa", "omega"),
}


def _check_params(family, params, required):
    missing = [k for k in required if k not in params]
    unknown = [k for k in params if k not in required]
    if missing or unknown:
        raise InvalidParams(
            f"{family.value}: missing {missing} / unknown {unknown}; expected {list(required)}"
        )
    for k, v in params.items():
        if not math.isfinite(v):
            raise InvalidParams(f"{family.value}: parameter {k}={v!r} is not finite")


@dataclass(frozen=True)
class DecoherenceFunction:
    """Decoherence amplitude ``G(t)`` with ``G(0) = 1``.

    exponential:        ``exp(-kappa t)``
    damped-oscillatory: ``exp(-kappa t) cos(omega t)``
    jaynes-cummings:    ``exp(-lambda t/2) [cosh(D t/2) + (lambda/D) sinh(D t/2)]``,
                        ``D = sqrt(lambda^2 - 2 gamma0 lambda)`` (complex for strong coupling)
    """

    family: DecoherenceFamily
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        family = _parse_enum(DecoherenceFamily, self.family)
        params = {k: float(v) for k, v in dict(self.params).items()}
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "params", params)
        _check_params(family, params, DECOHERENCE_PARAMS[family])
        if params.get("kappa", 0.0) < 0:
            raise InvalidParams(f"decay rate kappa must be >= 0, got {params['kappa']}")
        if family is DecoherenceFamily.JAYNES_CUMMINGS:
            if params["lambda"] <= 0 or params["gamma0"] <= 0:
                raise InvalidParams("jaynes-cummings needs lambda > 0 and gamma0 > 0")

    @classmethod
    def exponential(cls, kappa):
        return cls(DecoherenceFamily.EXPONENTIAL, {"kappa": kappa})

    @classmethod
    def damped_oscillatory(cls, kappa, omega):
        return cls(DecoherenceFamily.DAMPED_OSCILLATORY, {"kappa": kappa, "omega": omega})

    @classmethod
    def jaynes_cummings(cls, lam, gamma0):
        return cls(DecoherenceFamily.JAYNES_CUMMINGS, {"lambda": lam, "gamma0": gamma0})


def _jc_parts(lam, gamma0, t):
    """Return ``(exp(-lam t/2), cosh(D t/2), sinh(D t/2)/D)`` for the JC amplitude."""
    delta = cmath.sqrt(lam * lam - 2.0 * gamma0 * lam)
    x = 0.5 * delta * t
    if abs(x) < 1e-4:
        shc = 0.5 * t * (1.0 + x * x / 6.0 + x**4 / 120.0)
    else:
        shc = cmath.sinh(x) / delta
    return math.exp(-0.5 * lam * t), cmath.cosh(x), shc


def decoherence_value(f: DecoherenceFunction, t: float) -> complex:
    if t < 0:
        raise InvalidParams(f"time must be >= 0, got {t}")
    p = f.params
    if f.family is DecoherenceFamily.EXPONENTIAL:
        return complex(math.exp(-p["kappa"] * t))
    if f.family is DecoherenceFamily.DAMPED_OSCILLATORY:
        return complex(math.exp(-p["kappa"] * t) * math.cos(p["omega"] * t))
    lam = p["lambda"]
    damp, ch, shc = _jc_parts(lam, p["gamma0"], t)
    return complex(damp * (ch + lam * shc))


def decoherence_derivative(f: DecoherenceFunction, t: float) -> complex:
    """Analytic ``dG/dt``."""
    p = f.params
    if f.family is DecoherenceFamily.EXPONENTIAL:
        return complex(-p["kappa"] * math.exp(-p["kappa"] * t))
    if f.family is DecoherenceFamily.DAMPED_OSCILLATORY:
        k, w = p["kappa"], p["omega"]
        return complex(-math.exp(-k * t) * (k * math.cos(w * t) + w * math.sin(w * t)))
    lam, g0 = p["lambda"], p["gamma0"]
    damp, _, shc = _jc_parts(lam, g0, t)
    return complex(-g0 * lam * damp * shc)


def _numeric_derivative(f, t, h=1e-6):
    if t < h:
        return (-3 * decoherence_value(f, t) + 4 * decoherence_value(f, t + h) - decoherence_value(f, t + 2 * h)) / (2 * h)
    return (decoherence_value(f, t + h) - decoherence_value(f, t - h)) / (2 * h)


def rate_of(f: DecoherenceFunction, t: float, convention: str = "pure", numeric: bool = False):
    """Rates derived from ``G``.

    ``convention="pure"`` gives ``gamma = -G'/G`` (real ``G`` required);
    ``convention="dissipation"`` gives ``(gamma, s)`` with
    ``gamma = -2 Re(G'/G)`` and ``s = -2 Im(G'/G)``.
    """
    g = decoherence_value(f, t)
    if abs(g) <= tol.DECOHERENCE_EPS:
        raise SingularDecoherence(f"|G({t})| = {abs(g):.3e}; rate undefined at a zero of G")
    dg = _numeric_derivative(f, t) if numeric else decoherence_derivative(f, t)
    ratio = dg / g
    if convention == "pure":
        if abs(ratio.imag) > tol.RECONSTRUCTION * max(1.0, abs(ratio)):
            raise InvalidParams("pure-decoherence rate needs a real decoherence function")
        return -ratio.real
    if convention == "dissipation":
        return -2.0 * ratio.real, -2.0 * ratio.imag
    raise ValueError(f"unknown rate convention {convention!r}")


@dataclass(frozen=True)
class RateFunction:
    """Scalar rate ``gamma(t)``: constant ``c``, ramp ``a + b t``, or ``c exp(-kappa t) cos(omega t)``."""

    family: RateFamily
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        family = _parse_enum(RateFamily, self.family)
        params = {k: float(v) for k, v in dict(self.params).items()}
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "params", params)
        _check_params(family, params, RATE_PARAMS[family])
        if params.get("kappa", 0.0) < 0:
            raise InvalidParams("rate decay kappa must be >= 0")

    @classmethod
    def constant(cls, c):
        return cls(RateFamily.CONSTANT, {"c": c})

    @classmethod
    def ramp(cls, a, b):
        return cls(RateFamily.RAMP, {"a": a, "b": b})

    @classmethod
    def damped_oscillatory(cls, c, kappa, omega):
        return cls(RateFamily.DAMPED_OSCILLATORY, {"c": c, "kappa": kappa, "omega": omega})

    def __call__(self, t: float) -> float:
        p = self.params
        if self.family is RateFamily.CONSTANT:
            return p["c"]
        if self.family is RateFamily.RAMP:
            return p["a"] + p["b"] * t
        return p["c"] * math.exp(-p["kappa"] * t) * math.cos(p["omega"] * t)


@dataclass(frozen=True)
class RateFunctions:
    """The ``d*d - 1`` rates of a random-unitary model, indexed 1..d*d-1."""

    d: int
    gammas: tuple

    def __post_init__(self):
        if self.d not in (2, 3):
            raise UnsupportedModel(f"random-unitary rates only for d in (2, 3), got {self.d}")
        gammas = tuple(g if isinstance(g, RateFunction) else RateFunction.constant(g) for g in self.gammas)
        if len(gammas) != self.d**2 - 1:
            raise InvalidParams(f"d={self.d} needs {self.d**2 - 1} rates, got {len(gammas)}")
        object.__setattr__(self, "gammas", gammas)

    @classmethod
    def constant(cls, d, values):
        return cls(d, tuple(RateFunction.constant(v) for v in values))

    def values(self, t: float) -> np.ndarray:
        return np.array([g(t) for g in self.gammas])


def integrated_rates(r: RateFunctions, t: float, t_start: float = 0.0) -> np.ndarray:
    """``Gamma_k(t) = int_{t_start}^t gamma_k`` for k = 1..d*d-1."""
    return np.array([adaptive_simpson(g, t_start, t) for g in r.gammas])


def cumulative_integrated_rates(r: RateFunctions, times) -> np.ndarray:
    """Integrated rates on an increasing grid, one short quadrature per step."""
    times = np.asarray(times, dtype=float)
    out = np.empty((len(times), len(r.gammas)))
    acc = integrated_rates(r, float(times[0])) if len(times) else None
    for i, t in enumerate(times):
        if i:
            acc = acc + integrated_rates(r, float(t), float(times[i - 1]))
        out[i] = acc
    return out


@dataclass(frozen=True)
class DynamicalModel:
    kind: ModelKind
    d: int = 2
    decoherence: DecoherenceFunction | None = None
    rates: RateFunctions | None = None

    def __post_init__(self):
        kind = _parse_enum(ModelKind, self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is ModelKind.RANDOM_UNITARY:
            if self.rates is None:
                raise InvalidParams("random-unitary model needs rate functions")
            if self.rates.d != self.d:
                raise InvalidParams(f"rates are for d={self.rates.d}, model has d={self.d}")
        else:
            if self.d != 2:
                raise UnsupportedModel(f"{kind.value} model is a qubit model, got d={self.d}")
            if self.decoherence is None:
                raise InvalidParams(f"{kind.value} model needs a decoherence function")

    @classmethod
    def pure_decoherence(cls, g: DecoherenceFunction):
        return cls(ModelKind.PURE_DECOHERENCE, 2, decoherence=g)

    @classmethod
    def dissipation(cls, g: DecoherenceFunction):
        return cls(ModelKind.DISSIPATION, 2, decoherence=g)

    @classmethod
    def random_unitary(cls, rates: RateFunctions):
        return cls(ModelKind.RANDOM_UNITARY, rates.d, rates=rates)

    @property
    def is_unital(self) -> bool:
        return self.kind is not ModelKind.DISSIPATION


# -- Weyl operators and random-unitary weights -------------------------------

def weyl_operator(d: int, k: int, l: int) -> np.ndarray:
    """``U_{k,l} = sum_m w^{m l} |m><m+k|`` with ``w = exp(2 pi i/d)``."""
    if not (0 <= k < d and 0 <= l < d):
        raise IndexOutOfRange(f"Weyl indices ({k}, {l}) outside Z_{d}")
    w = np.exp(2j * np.pi / d)
    u = np.zeros((d, d), dtype=complex)
    for m in range(d):
        u[m, (m + k) % d] = w ** (m * l)
    return u


def weyl_operators(d: int) -> list[np.ndarray]:
    """All Weyl operators, index ``alpha = k*d + l``."""
    return [weyl_operator(d, *divmod(a, d)) for a in range(d * d)]


def weyl_hadamard(d: int) -> np.ndarray:
    """``H[alpha, beta] = w^{k n - l m}`` for ``alpha = (k, l)``, ``beta = (m, n)``."""
    w = np.exp(2j * np.pi / d)
    idx = [divmod(a, d) for a in range(d * d)]
    return np.array([[w ** ((k * n - l * m) % d) for (m, n) in idx] for (k, l) in idx])


def random_unitary_probabilities(r: RateFunctions, t: float, integrated=None) -> np.ndarray:
    """Mixing weights ``p_alpha(t)`` of the Weyl operators.

    ``integrated`` may carry precomputed ``Gamma_k(t)`` (k >= 1).  The identity
    slot uses ``gamma_0 = -sum_k gamma_k`` so that ``lambda_0 = 1``.
    """
    d = r.d
    big = integrated_rates(r, t) if integrated is None else np.asarray(integrated, dtype=float)
    full = np.concatenate([[-big.sum()], big])
    h = weyl_hadamard(d)
    eigen = np.exp(h @ full)
    p = h @ eigen / d**2
    if np.abs(p.imag).max() > tol.RECONSTRUCTION * max(1.0, np.abs(p).max()):
        raise InvalidParams(f"mixing weights have imaginary residue {np.abs(p.imag).max():.3e}")
    p = p.real
    if p.min() < tol.PROB_WARN:
        warnings.warn(f"random-unitary weight {p.min():.3e} < 0 at t={t}", NonPositiveProbability, stacklevel=2)
    return p


def channel_eigenvalues(r: RateFunctions, t: float, integrated=None) -> np.ndarray:
    """``lambda_beta(t)``: eigenvalue of the channel on the Weyl operator ``U_beta``."""
    big = integrated_rates(r, t) if integrated is None else np.asarray(integrated, dtype=float)
    full = np.concatenate([[-big.sum()], big])
    return np.exp(weyl_hadamard(r.d) @ full)


# -- channels and generators -------------------------------------------------

_LOWER = np.array([[0, 1], [0, 0]], dtype=complex)  # |0><1|, decays towards |0>
_EXCITED = np.diag([0.0, 1.0]).astype(complex)


def _real_g(g: complex, t: float) -> float:
    if abs(g.imag) > tol.STRUCTURAL:
        raise InvalidParams(f"pure decoherence needs a real G, got G({t}) = {g}")
    return g.real


def channel_at(m: DynamicalModel, t: float, integrated=None, check: bool = True) -> np.ndarray:
    """Superoperator of ``Lambda_t``.

    With ``check`` the map is verified trace preserving and completely positive
    (Choi floor ``-1e-8``).  Random-unitary maps with negative weights only
    raise :class:`NonPositiveProbability` warnings.
    """
    if t < 0:
        raise InvalidParams(f"time must be >= 0, got {t}")
    if m.kind is ModelKind.PURE_DECOHERENCE:
        g = _real_g(decoherence_value(m.decoherence, t), t)
        if abs(g) > 1 + tol.STRUCTURAL:
            raise NotCPTP(f"|G({t})| = {abs(g)} > 1")
        sup = np.diag([1.0, g, g, 1.0]).astype(complex)
    elif m.kind is ModelKind.DISSIPATION:
        g = decoherence_value(m.decoherence, t)
        a = abs(g) ** 2
        if a > 1 + tol.STRUCTURAL:
            raise NotCPTP(f"|G({t})| = {abs(g)} > 1")
        sup = np.diag([1.0, np.conj(g), g, a]).astype(complex)
        sup[0, 3] = 1.0 - a
    else:
        p = random_unitary_probabilities(m.rates, t, integrated)
        sup = sum(pa * np.kron(u, u.conj()) for pa, u in zip(p, weyl_operators(m.d)))
        if check and trace_preservation_error(sup) > tol.RECONSTRUCTION:
            raise NotCPTP("random-unitary map is not trace preserving")
        return sup
    if check:
        if trace_preservation_error(sup) > tol.RECONSTRUCTION:
            raise NotCPTP(f"map at t={t} is not trace preserving")
        lowest = np.linalg.eigvalsh(choi_matrix(sup)).min()
        if lowest < tol.CHOI_FLOOR:
            raise NotCPTP(f"Choi matrix eigenvalue {lowest:.3e} at t={t}")
    return sup


def model_rates(m: DynamicalModel, t: float) -> dict[str, float]:
    """Named rates of the model's master equation at ``t``."""
    if m.kind is ModelKind.PURE_DECOHERENCE:
        return {"gamma": rate_of(m.decoherence, t, "pure")}
    if m.kind is ModelKind.DISSIPATION:
        return {"gamma": rate_of(m.decoherence, t, "dissipation")[0]}
    return {f"gamma_{k}": float(v) for k, v in enumerate(m.rates.values(t), start=1)}


def _analytic_generator(m: DynamicalModel, t: float) -> np.ndarray:
    d = m.d
    ident = np.eye(d * d, dtype=complex)
    if m.kind is ModelKind.PURE_DECOHERENCE:
        # coherences obey rho_01' = -gamma rho_01 with gamma = -G'/G
        gamma = rate_of(m.decoherence, t, "pure")
        z = np.diag([1.0, -1.0]).astype(complex)
        return 0.5 * gamma * (np.kron(z, z) - ident)
    if m.kind is ModelKind.DISSIPATION:
        gamma, shift = rate_of(m.decoherence, t, "dissipation")
        eye2 = np.eye(2)
        ham = -0.5j * shift * (np.kron(_EXCITED, eye2) - np.kron(eye2, _EXCITED.T))
        nop = _LOWER.conj().T @ _LOWER
        diss = np.kron(_LOWER, _LOWER.conj()) - 0.5 * np.kron(nop, eye2) - 0.5 * np.kron(eye2, nop.T)
        return ham + gamma * diss
    rates = m.rates.values(t)
    return sum(g * (np.kron(u, u.conj()) - ident) for g, u in zip(rates, weyl_operators(d)[1:]))


def _numeric_generator(m: DynamicalModel, t: float, t_scale: float = 1.0) -> np.ndarray:
    h = 1e-5 * t_scale
    if t < h:
        deriv = (-3 * channel_at(m, t, check=False) + 4 * channel_at(m, t + h, check=False)
                 - channel_at(m, t + 2 * h, check=False)) / (2 * h)
    else:
        deriv = (channel_at(m, t + h, check=False) - channel_at(m, t - h, check=False)) / (2 * h)
    return deriv @ np.linalg.inv(channel_at(m, t, check=False))


def generator_at(m: DynamicalModel, t: float, method: str = "analytic", t_scale: float = 1.0) -> np.ndarray:
    """Superoperator of the time-local generator ``L_t`` with ``dLambda/dt = L_t Lambda_t``."""
    if method == "analytic":
        return _analytic_generator(m, t)
    if method == "numeric":
        return _numeric_generator(m, t, t_scale)
    raise ValueError(f"unknown generator method {method!r}")
