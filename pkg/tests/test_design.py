"""Magnetization sweep and turning-time model tests."""

import math

import numpy as np
import pytest

from magswim import (ConstPlusSine, Sampled, SwimmerParams,
                     optimize_magnetization, rotational_drag, turning_time,
                     turning_time_analytic, turning_time_sweep)


# ---------------------------------------------------------------------------
# turning time

def test_turning_time_matches_analytic():
    for k in (1.0, 2.0, 4.0, 8.0):
        got = turning_time(1.0, k)
        want = turning_time_analytic(k, 0.05)
        assert abs(got - want) / want < 1e-6


def test_turning_time_scales_inversely_with_gain():
    rows = turning_time_sweep([1.0, 2.0, 4.0, 8.0], 1.0)
    prod = rows[:, 0] * rows[:, 1]
    assert np.ptp(prod) / prod.mean() < 0.005
    np.testing.assert_allclose(rows[:, 2],
                               [turning_time_analytic(k, 0.05)
                                for k in rows[:, 0]], rtol=1e-12)


def test_turning_time_threshold_edge_cases():
    assert turning_time(1.0, 1.0, delta=math.pi / 2) == 0.0
    with pytest.raises(ValueError):
        turning_time(1.0, 1.0, delta=0.0)
    with pytest.raises(ValueError):
        turning_time(1.0, 1.0, delta=2.0)
    with pytest.raises(ValueError):
        turning_time(0.0, 1.0)
    with pytest.raises(ValueError):
        turning_time(1.0, -1.0)


def test_rotational_drag():
    assert rotational_drag(SwimmerParams()) == pytest.approx(2.0 / 12.0)
    assert rotational_drag(SwimmerParams(link_length=2.0, drag_normal=3.0)) \
        == pytest.approx(3.0 * 8.0 / 12.0)


# ---------------------------------------------------------------------------
# magnetization sweep

def test_sweep_layout_and_determinism(params):
    kw = dict(resolution=8, cycles=3, steps_per_period=300)
    a = optimize_magnetization(params, (0.25, 2.0), (0.25, 4.0), **kw)
    b = optimize_magnetization(params, (0.25, 2.0), (0.25, 4.0), **kw)
    assert a.first_cycle_dx.shape == (8, 8)
    assert np.array_equal(a.first_cycle_dx, b.first_cycle_dx)
    assert np.array_equal(a.steady_cycle_dx, b.steady_cycle_dx)
    assert np.all(a.first_cycle_dx >= 0)
    c1, c2 = a.argmax
    assert 0.25 <= c1 <= 2.0 and 0.25 <= c2 <= 4.0


def test_sweep_threads_deterministic(params):
    kw = dict(resolution=8, cycles=3, steps_per_period=300)
    a = optimize_magnetization(params, (0.5, 1.5), (0.5, 3.0), threads=1, **kw)
    b = optimize_magnetization(params, (0.5, 1.5), (0.5, 3.0), threads=4, **kw)
    assert np.array_equal(a.first_cycle_dx, b.first_cycle_dx)


def test_sweep_scaling_equivalence(params):
    """Scaling the magnetization by s and the drive amplitude by 1/s leaves
    the objective unchanged (torques are bilinear in m and B)."""
    strong = optimize_magnetization(params, (0.5, 1.5), (0.5, 3.0),
                                    resolution=8,
                                    signal=ConstPlusSine(amplitude=0.5),
                                    cycles=3, steps_per_period=300)
    weak = optimize_magnetization(params, (1.0, 3.0), (1.0, 6.0),
                                  resolution=8,
                                  signal=ConstPlusSine(amplitude=0.25),
                                  cycles=3, steps_per_period=300)
    np.testing.assert_allclose(weak.first_cycle_dx, strong.first_cycle_dx,
                               atol=1e-6)
    np.testing.assert_allclose(weak.steady_cycle_dx, strong.steady_cycle_dx,
                               atol=1e-6)


def test_sweep_validation(params):
    with pytest.raises(ValueError):
        optimize_magnetization(params, resolution=4)
    aperiodic = Sampled([0.0, 1.0], [[1.0, 0.0], [1.0, 0.0]])
    with pytest.raises(ValueError):
        optimize_magnetization(params, signal=aperiodic)
