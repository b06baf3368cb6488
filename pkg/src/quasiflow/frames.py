"""Frame / dual-frame pairs for qubit and qutrit quasiprobability representations.

Frame elements are indexed by pairs ``(j1, j2)`` in ``Z_d x Z_d`` and stored
in lexicographic order, so element ``j1 * d + j2`` is ``F_{j1 j2}``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import tolerances as tol
from .errors import SingularFrame, UnsupportedFrame

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class FrameKind(enum.Enum):
    WOOTTERS_WIGNER = "wootters"
    GROSS_WIGNER = "gross"
    SIC_POVM = "sic"

    @classmethod
    def parse(cls, name) -> "FrameKind":
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("_", "-")
        aliases = {
            "wootters": cls.WOOTTERS_WIGNER,
            "wootters-wigner": cls.WOOTTERS_WIGNER,
            "wootterswigner": cls.WOOTTERS_WIGNER,
            "gross": cls.GROSS_WIGNER,
            "gross-wigner": cls.GROSS_WIGNER,
            "grosswigner": cls.GROSS_WIGNER,
            "sic": cls.SIC_POVM,
            "sic-povm": cls.SIC_POVM,
            "sicpovm": cls.SIC_POVM,
        }
        kind = aliases.get(key)
        if kind is None:
            raise UnsupportedFrame(f"unknown frame kind {name!r}")
        return kind

    @property
    def is_wigner(self) -> bool:
        return self is not FrameKind.SIC_POVM


SUPPORTED = {
    (FrameKind.WOOTTERS_WIGNER, 2),
    (FrameKind.GROSS_WIGNER, 3),
    (FrameKind.SIC_POVM, 2),
    (FrameKind.SIC_POVM, 3),
}


def _frozen(arr) -> np.ndarray:
    out = np.array(arr, dtype=complex)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class FrameSet:
    """A minimal frame ``{F_j}`` with its dual ``{G_j}``.

    Arrays have shape ``(d*d, d, d)`` and are read-only.  Construction does not
    validate anything; use :func:`validate_frame` for that.
    """

    kind: FrameKind
    d: int
    frame: np.ndarray = field(repr=False)
    dual: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "frame", _frozen(self.frame))
        object.__setattr__(self, "dual", _frozen(self.dual))

    @property
    def n(self) -> int:
        return len(self.frame)

    def label(self, j: int) -> tuple[int, int]:
        return divmod(j, self.d)


def shift_and_clock(d: int) -> tuple[np.ndarray, np.ndarray]:
    """Return ``X|m> = |m+1>`` and ``Z|m> = w^m |m>`` with ``w = exp(2 pi i / d)``."""
    x = np.roll(np.eye(d, dtype=complex), 1, axis=0)
    z = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    return x, z


def _displacement(d: int, j1: int, j2: int) -> np.ndarray:
    x, z = shift_and_clock(d)
    return np.linalg.matrix_power(z, j1) @ np.linalg.matrix_power(x, j2)


def _wootters_frame() -> np.ndarray:
    ops = []
    for j1 in range(2):
        for j2 in range(2):
            ops.append(
                0.25
                * (
                    PAULI_I
                    + (-1) ** j1 * PAULI_Z
                    + (-1) ** j2 * PAULI_X
                    + (-1) ** (j1 + j2) * PAULI_Y
                )
            )
    return np.array(ops)


def _gross_frame() -> np.ndarray:
    # Phase-point operators: the parity |m> -> |-m> displaced by Z^j1 X^j2.
    d = 3
    parity = np.eye(d, dtype=complex)[[(-m) % d for m in range(d)]]
    ops = []
    for j1 in range(d):
        for j2 in range(d):
            disp = _displacement(d, j1, j2)
            ops.append(disp @ parity @ disp.conj().T / d)
    return np.array(ops)


def sic_fiducial(d: int) -> np.ndarray:
    if d == 2:
        # Bloch vector (1, 1, 1)/sqrt(3); its Weyl orbit is the tetrahedron.
        theta = np.arccos(1 / np.sqrt(3))
        return np.array([np.cos(theta / 2), np.exp(1j * np.pi / 4) * np.sin(theta / 2)])
    if d == 3:
        return np.array([0, 1, -1], dtype=complex) / np.sqrt(2)
    raise UnsupportedFrame(f"no SIC fiducial for d={d}")


def _sic_frame(d: int) -> np.ndarray:
    psi = sic_fiducial(d)
    proj = np.outer(psi, psi.conj())
    ops = []
    for j1 in range(d):
        for j2 in range(d):
            disp = _displacement(d, j1, j2)
            ops.append(disp @ proj @ disp.conj().T / d)
    return np.array(ops)


def dual_of(frame) -> np.ndarray:
    """Unique dual of a minimal frame, by inverting its Gram matrix."""
    frame = np.asarray(frame, dtype=complex)
    n, d, _ = frame.shape
    if n != d * d:
        raise SingularFrame(f"frame has {n} elements, a minimal frame needs {d * d}")
    gram = np.einsum("jab,kba->jk", frame, frame).real
    cond = np.linalg.cond(gram)
    if not np.isfinite(cond) or cond > tol.GRAM_CONDITION:
        raise SingularFrame(f"Gram matrix condition number {cond:.3g} exceeds {tol.GRAM_CONDITION:.0e}")
    coeffs = np.linalg.inv(gram)
    dual = np.einsum("lk,lab->kab", coeffs, frame)
    return 0.5 * (dual + dual.conj().transpose(0, 2, 1))


def build_frame(kind, d: int) -> FrameSet:
    kind = FrameKind.parse(kind)
    if (kind, d) not in SUPPORTED:
        raise UnsupportedFrame(f"{kind.value} frame is not available for d={d}")
    if kind is FrameKind.WOOTTERS_WIGNER:
        frame = _wootters_frame()
    elif kind is FrameKind.GROSS_WIGNER:
        frame = _gross_frame()
    else:
        frame = _sic_frame(d)
    dual = d * frame if kind.is_wigner else dual_of(frame)
    return FrameSet(kind, d, frame, dual)


@dataclass
class FrameCheck:
    name: str
    passed: bool
    deviation: float


@dataclass
class FrameReport:
    kind: FrameKind
    d: int
    checks: list[FrameCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def max_deviation(self) -> float:
        return max(c.deviation for c in self.checks)

    def __getitem__(self, name: str) -> FrameCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def format(self) -> str:
        width = max(len(c.name) for c in self.checks)
        lines = [f"frame {self.kind.value} d={self.d}"]
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            lines.append(f"  {c.name:<{width}}  {status}  max deviation {c.deviation:.3e}")
        lines.append("all checks passed" if self.passed else "some checks FAILED")
        return "\n".join(lines)


def validate_frame(fs: FrameSet, rng: np.random.Generator | None = None, samples: int = 8) -> FrameReport:
    """Check the frame identities; failures are reported, never raised.

    When ``rng`` is given, reconstruction of random Hermitian operators is
    checked as well.
    """
    d, frame, dual = fs.d, np.asarray(fs.frame), np.asarray(fs.dual)
    eye = np.eye(d)
    checks = []

    def add(name, dev, limit):
        dev = float(dev)
        checks.append(FrameCheck(name, bool(np.isfinite(dev) and dev <= limit), dev))

    add("count", abs(len(frame) - d * d), 0)
    add("normalization", np.abs(frame.sum(axis=0) - eye).max(), tol.STRUCTURAL)
    add("dual_trace", np.abs(np.trace(dual, axis1=1, axis2=2) - 1).max(), tol.STRUCTURAL)
    pairing = np.einsum("jab,kba->jk", frame, dual)
    add("duality", np.abs(pairing - np.eye(len(frame))).max(), tol.STRUCTURAL)
    herm = max(
        np.abs(frame - frame.conj().transpose(0, 2, 1)).max(),
        np.abs(dual - dual.conj().transpose(0, 2, 1)).max(),
    )
    add("hermiticity", herm, tol.STRUCTURAL)
    rank = np.linalg.matrix_rank(frame.reshape(len(frame), -1), tol=1e-9)
    add("span_rank", d * d - rank, 0)
    if rng is not None:
        worst = 0.0
        for _ in range(samples):
            a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
            a = a + a.conj().T
            coeffs = np.einsum("ab,jba->j", a, frame)
            worst = max(worst, np.abs(np.einsum("j,jab->ab", coeffs, dual) - a).max())
        add("reconstruction", worst, tol.RECONSTRUCTION)
    return FrameReport(fs.kind, d, checks)


# Published listing of the qutrit phase-point operators, in listed order.  The
# listed phases are Hermitian (and sum to the identity) only when the symbol
# is read as exp(i pi / 3); with that reading the listing equals the
# construction above, element by element.
def printed_qutrit_frame() -> np.ndarray:
    w = np.exp(1j * np.pi / 3)
    mats = [
        [[1, 0, 0], [0, 0, 1], [0, 1, 0]],
        [[0, 0, 1], [0, 1, 0], [1, 0, 0]],
        [[0, 1, 0], [1, 0, 0], [0, 0, 1]],
        [[1, 0, 0], [0, 0, -w], [0, w**2, 0]],
        [[0, 0, w**2], [0, 1, 0], [-w, 0, 0]],
        [[0, -w, 0], [w**2, 0, 0], [0, 0, 1]],
        [[1, 0, 0], [0, 0, w**2], [0, -w, 0]],
        [[0, 0, -w], [0, 1, 0], [w**2, 0, 0]],
        [[0, w**2, 0], [-w, 0, 0], [0, 0, 1]],
    ]
    return np.array(mats, dtype=complex) / 3
