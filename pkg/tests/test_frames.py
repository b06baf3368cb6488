import numpy as np
import pytest

from quasiflow.errors import SingularFrame, UnsupportedFrame
from quasiflow.frames import (
    FrameKind,
    FrameSet,
    SUPPORTED,
    build_frame,
    dual_of,
    printed_qutrit_frame,
    sic_fiducial,
    validate_frame,
)

ALL = sorted(SUPPORTED, key=lambda p: (p[0].value, p[1]))


def test_wootters_f00():
    fs = build_frame("wootters", 2)
    assert np.allclose(fs.frame[0], np.array([[2, 1 - 1j], [1 + 1j, 0]]) / 4, atol=1e-14)


def test_gross_f00():
    fs = build_frame("gross", 3)
    expected = np.array([[1, 0, 0], [0, 0, 1], [0, 1, 0]]) / 3
    assert np.allclose(fs.frame[0], expected, atol=1e-14)


def test_printed_qutrit_listing_matches_construction():
    assert np.abs(printed_qutrit_frame() - build_frame("gross", 3).frame).max() < 1e-12


@pytest.mark.parametrize("kind,d", ALL)
def test_normalisation_and_duality(kind, d):
    fs = build_frame(kind, d)
    assert fs.n == d * d
    assert np.abs(fs.frame.sum(axis=0) - np.eye(d)).max() < 1e-12
    assert np.abs(np.trace(fs.dual, axis1=1, axis2=2) - 1).max() < 1e-12
    pairing = np.einsum("jab,kba->jk", fs.frame, fs.dual)
    assert np.abs(pairing - np.eye(d * d)).max() < 1e-12


@pytest.mark.parametrize("kind,d", [(k, d) for k, d in ALL if k.is_wigner])
def test_wigner_dual_is_scaled_frame(kind, d):
    fs = build_frame(kind, d)
    assert np.abs(fs.dual - d * fs.frame).max() < 1e-14


@pytest.mark.parametrize("d", [2, 3])
def test_sic_dual_closed_form(d):
    # dual of F = P/d for a SIC is (d+1) P - I
    fs = build_frame("sic", d)
    proj = d * fs.frame
    assert np.abs(fs.dual - ((d + 1) * proj - np.eye(d))).max() < 1e-12


@pytest.mark.parametrize("d", [2, 3])
def test_sic_overlaps_are_equiangular(d):
    proj = d * build_frame("sic", d).frame
    overlaps = np.einsum("jab,kba->jk", proj, proj).real
    off = overlaps[~np.eye(d * d, dtype=bool)]
    assert np.allclose(np.diag(overlaps), 1, atol=1e-12)
    assert np.allclose(off, 1 / (d + 1), atol=1e-12)


def test_sic_fiducial_is_normalised():
    for d in (2, 3):
        psi = sic_fiducial(d)
        assert abs(np.vdot(psi, psi) - 1) < 1e-14


@pytest.mark.parametrize("kind,d", ALL)
def test_reconstruction_of_random_hermitian(kind, d):
    rng = np.random.default_rng(7)
    fs = build_frame(kind, d)
    for _ in range(20):
        a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        a = a + a.conj().T
        coeffs = np.einsum("ab,jba->j", a, fs.frame)
        assert np.abs(np.einsum("j,jab->ab", coeffs, fs.dual) - a).max() < 1e-10


@pytest.mark.parametrize("kind,d", ALL)
def test_validate_frame_passes(kind, d):
    report = validate_frame(build_frame(kind, d), rng=np.random.default_rng(0))
    assert report.passed
    assert report.max_deviation < 1e-12
    assert "all checks passed" in report.format()


def test_scaled_element_fails_normalisation():
    fs = build_frame("wootters", 2)
    frame = np.array(fs.frame)
    frame[0] *= 1.01
    report = validate_frame(FrameSet(fs.kind, 2, frame, fs.dual))
    assert not report["normalization"].passed
    assert not report.passed
    assert "FAIL" in report.format()


@pytest.mark.parametrize("kind,d", [("wootters", 3), ("gross", 2), ("sic", 4), ("nonsense", 2)])
def test_unsupported_pairs(kind, d):
    with pytest.raises(UnsupportedFrame):
        build_frame(kind, d)


def test_dual_of_rejects_degenerate_frame():
    fs = build_frame("wootters", 2)
    frame = np.array(fs.frame)
    frame[3] = frame[2]
    with pytest.raises(SingularFrame):
        dual_of(frame)


def test_dual_of_rejects_wrong_count():
    with pytest.raises(SingularFrame):
        dual_of(build_frame("wootters", 2).frame[:3])


def test_frame_arrays_are_read_only():
    fs = build_frame("sic", 2)
    with pytest.raises(ValueError):
        fs.frame[0, 0, 0] = 1


def test_kind_aliases():
    assert FrameKind.parse("WoottersWigner") is FrameKind.WOOTTERS_WIGNER
    assert FrameKind.parse("sic-povm") is FrameKind.SIC_POVM
    assert FrameKind.parse(FrameKind.GROSS_WIGNER) is FrameKind.GROSS_WIGNER
