import math

import numpy as np
import pytest

from helpers import all_permutations, random_bistochastic, random_quasi_state
from quasiflow.entropy import (
    COLLISION,
    AlphaOrder,
    collision_entropy,
    h2_monotonicity_scan,
    majorization_check,
    renyi_entropy,
)
from quasiflow.errors import DimensionMismatch, DivergentSum, InvalidAlpha
from quasiflow.frames import build_frame
from quasiflow.grid import TimeGrid
from quasiflow.models import DecoherenceFunction, DynamicalModel
from quasiflow.qpr import rep_state
from quasiflow.witness import zeta_trajectory

WOOTTERS = build_frame("wootters", 2)
PLUS = np.full((2, 2), 0.5)


def test_renyi_examples():
    assert abs(renyi_entropy([0.25] * 4, 2) - math.log(4)) < 1e-15
    assert abs(renyi_entropy([1.5, -0.5, 0, 0], 2) + math.log(2.5)) < 1e-15


@pytest.mark.parametrize("alpha", [0.5, 1, 3, 2 / 3, 0.0, -2, math.pi])
def test_inadmissible_orders(alpha):
    with pytest.raises(InvalidAlpha):
        renyi_entropy([0.25] * 4, alpha)


def test_order_constructor_checks():
    with pytest.raises(InvalidAlpha):
        AlphaOrder(1, 2)
    with pytest.raises(InvalidAlpha):
        AlphaOrder(2, 0)
    assert AlphaOrder.from_value(4 / 3) == AlphaOrder(2, 2)
    assert AlphaOrder.from_value(2) == COLLISION
    assert AlphaOrder.from_value(6) == AlphaOrder(3, 1)
    assert AlphaOrder(3, 2).value == 2.0


def test_fractional_order_uses_real_root():
    q = np.array([1.2, -0.4, 0.1, 0.1])
    expected = math.log(np.sum(np.abs(q) ** (4 / 3))) / (1 - 4 / 3)
    assert abs(renyi_entropy(q, AlphaOrder(2, 2)) - expected) < 1e-13


def test_divergent_sum():
    with pytest.raises(DivergentSum):
        renyi_entropy([0.0, 0.0], 2)


def test_collision_examples():
    assert abs(collision_entropy([1 / 9] * 9) - math.log(9)) < 1e-15
    assert abs(collision_entropy([0.5, 0.5, 0, 0]) - math.log(2)) < 1e-15


def test_collision_agrees_with_renyi_two():
    rng = np.random.default_rng(0)
    for _ in range(100):
        q = random_quasi_state(9, rng, spread=0.3)
        assert abs(collision_entropy(q) - renyi_entropy(q, COLLISION)) < 1e-14


def test_permutation_invariance():
    rng = np.random.default_rng(1)
    q = random_quasi_state(4, rng)
    for order in (COLLISION, AlphaOrder(2, 2), AlphaOrder(3, 1)):
        base = renyi_entropy(q, order)
        for p in all_permutations(4):
            assert abs(renyi_entropy(p @ q, order) - base) < 1e-12


def test_markovian_scan_has_no_violations():
    m = DynamicalModel.pure_decoherence(DecoherenceFunction.exponential(0.8))
    rng = np.random.default_rng(2)
    for rho in (PLUS, np.diag([1.0, 0.0]), np.array([[0.7, 0.3 - 0.1j], [0.3 + 0.1j, 0.3]])):
        scan = h2_monotonicity_scan(m, WOOTTERS, rep_state(rho, WOOTTERS), TimeGrid(0, 5, 500))
        assert not scan.violation.any() and scan.intervals == []
        assert scan.warnings == []


def test_strong_coupling_scan_overlaps_backflow():
    m = DynamicalModel.pure_decoherence(DecoherenceFunction.jaynes_cummings(1.0, 5.0))
    grid = TimeGrid(0, 10, 2000)
    scan = h2_monotonicity_scan(m, WOOTTERS, rep_state(PLUS, WOOTTERS), grid)
    assert scan.intervals
    traj = zeta_trajectory(m, WOOTTERS, grid)
    assert (scan.violation & (traj.zeta > 0)).any()
    first = scan.intervals[0]
    seg = traj.segments[0]
    assert first.start < seg.end and seg.start < first.end


def test_uniform_state_is_fixed():
    m = DynamicalModel.pure_decoherence(DecoherenceFunction.jaynes_cummings(1.0, 5.0))
    scan = h2_monotonicity_scan(m, WOOTTERS, [0.25] * 4, TimeGrid(0, 5, 200))
    assert np.allclose(scan.h2, math.log(4), atol=1e-14)
    assert not scan.violation.any()


def test_scan_notes_non_bistochastic_map():
    m = DynamicalModel.dissipation(DecoherenceFunction.exponential(1.0))
    scan = h2_monotonicity_scan(m, WOOTTERS, [0.25] * 4, TimeGrid(0, 2, 50))
    assert any("bistochastic" in w for w in scan.warnings)
    with pytest.raises(DimensionMismatch):
        h2_monotonicity_scan(m, WOOTTERS, [1.0], TimeGrid(0, 1, 10))


def test_majorization_examples():
    rng = np.random.default_rng(3)
    q = random_quasi_state(4, rng)
    assert majorization_check(q, [0.25] * 4)
    assert majorization_check(q, q)
    assert majorization_check([1.5, -0.5, 0, 0], [0.5, 0.5, 0, 0])
    assert collision_entropy([1.5, -0.5, 0, 0]) <= collision_entropy([0.5, 0.5, 0, 0])


def test_majorization_negative_cases():
    assert not majorization_check([0.25] * 4, [1, 0, 0, 0])
    assert not majorization_check([0.5, 0.5, 0, 0], [1.5, -0.5, 0, 0])
    with pytest.raises(DimensionMismatch):
        majorization_check([1.0], [0.5, 0.5])


def test_schur_concavity_on_random_pairs():
    rng = np.random.default_rng(4)
    for _ in range(200):
        n = int(rng.choice([4, 9]))
        q = random_quasi_state(n, rng)
        q2 = random_bistochastic(n, rng) @ q
        assert majorization_check(q, q2)
        assert collision_entropy(q) <= collision_entropy(q2) + 1e-10
        assert renyi_entropy(q, AlphaOrder(2, 2)) <= renyi_entropy(q2, AlphaOrder(2, 2)) + 1e-10
