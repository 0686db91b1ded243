"""Stroboscopic-map fixed points, Floquet multipliers and basin sampling."""

import numpy as np
import pytest

from magswim import (ConstPlusSine, Sampled, angular_distance, basin_sample,
                     find_limit_cycle, strobe_map)

# frozen regression values for the default swimmer under B = (1, sin 2 pi t),
# 2000 steps per period (two step sizes agree to >= 4 significant digits)
FIXED_POINT = (-0.23327178181679606, -0.34810492402462845)
MULTIPLIERS = (0.10970788280952429, 9.29040185160962e-05)


def zero_signal():
    return Sampled([0.0, 1.0], [[0.0, 0.0], [0.0, 0.0]], period=1.0)


def test_strobe_identity_for_zero_drive(params):
    theta0 = np.array([0.4, -0.9])
    out = strobe_map(params, zero_signal(), theta0, steps_per_period=200)
    np.testing.assert_allclose(out, theta0, atol=1e-13)


def test_strobe_batch_matches_scalar(params):
    sig = ConstPlusSine()
    thetas = np.array([[0.0, 0.0], [0.5, -0.5], [1.0, 2.0]])
    batch = strobe_map(params, sig, thetas, steps_per_period=400)
    for k in range(3):
        solo = strobe_map(params, sig, thetas[k], steps_per_period=400)
        np.testing.assert_allclose(batch[k], solo, atol=1e-12)


def test_strobe_needs_period(params):
    aperiodic = Sampled([0.0, 1.0], [[1.0, 0.0], [1.0, 0.0]])
    with pytest.raises(ValueError):
        strobe_map(params, aperiodic, [0.0, 0.0])
    out = strobe_map(params, aperiodic, [0.0, 0.0], period=1.0,
                     steps_per_period=200)
    assert out.shape == (2,)


def test_strobe_period_composition(params):
    """One strobe over 2T equals two strobes over T (same grid)."""
    sig = ConstPlusSine()
    theta0 = np.array([0.3, -0.6])
    twice = strobe_map(params, sig, theta0, period=2.0, steps_per_period=800)
    once = strobe_map(params, sig, theta0, period=1.0, steps_per_period=400)
    again = strobe_map(params, sig, once, period=1.0, steps_per_period=400,
                       t0=1.0)
    np.testing.assert_allclose(twice, again, atol=1e-9)


def test_fixed_point_is_fixed(params):
    sig = ConstPlusSine()
    res = find_limit_cycle(params, sig, steps_per_period=2000)
    image = strobe_map(params, sig, np.array(res.fixed_point),
                       steps_per_period=2000)
    np.testing.assert_allclose(image, res.fixed_point, atol=1e-9)
    assert res.residual < 1e-10


def test_limit_cycle_regression(params):
    res = find_limit_cycle(params, ConstPlusSine(), steps_per_period=2000)
    np.testing.assert_allclose(res.fixed_point, FIXED_POINT, atol=1e-9)
    np.testing.assert_allclose(res.multipliers, MULTIPLIERS, rtol=1e-4)
    assert res.multipliers[0] < 1.0
    d = res.to_dict()
    assert set(d) == {"fixed_point", "multipliers", "iterations", "residual"}


def test_multipliers_robust_to_jacobian_step(params):
    sig = ConstPlusSine()
    a = find_limit_cycle(params, sig, steps_per_period=2000,
                         jacobian_step=1e-5)
    b = find_limit_cycle(params, sig, steps_per_period=2000,
                         jacobian_step=1e-6)
    np.testing.assert_allclose(a.multipliers, b.multipliers, rtol=1e-4)


def test_fixed_point_invariant_to_strobe_phase(params):
    """Strobing at t0 = T/4 finds a different section point of the same limit
    cycle but identical multipliers."""
    sig = ConstPlusSine()
    base = find_limit_cycle(params, sig, steps_per_period=2000)
    shifted = find_limit_cycle(params, sig, steps_per_period=2000, t0=0.25)
    assert np.linalg.norm(np.subtract(shifted.fixed_point,
                                      base.fixed_point)) > 1e-3
    np.testing.assert_allclose(shifted.multipliers, base.multipliers,
                               atol=1e-6)


def test_anti_aligned_start_converges(params):
    sig = ConstPlusSine()
    th = np.array([np.pi, np.pi])
    first = strobe_map(params, sig, th, steps_per_period=400)
    assert np.linalg.norm(first - th) > 1e-3
    for _ in range(30):
        th = strobe_map(params, sig, th, steps_per_period=400)
    assert angular_distance(th, np.array(FIXED_POINT)) < 1e-4


def test_angular_distance_wraps():
    assert angular_distance([0.1, 0.0], [0.1 + 2 * np.pi, 0.0]) < 1e-12
    assert angular_distance([np.pi - 0.1, 0.0],
                            [-np.pi + 0.1, 0.0]) == pytest.approx(0.2)


def test_basin_sample_small_grid(params):
    sig = ConstPlusSine()
    basin = basin_sample(params, sig, resolution=5, cycles=25,
                         steps_per_period=300, threads=2)
    assert basin.final_distance.shape == (5, 5)
    assert basin.converged.mean() == 1.0
    assert np.all(basin.final_distance < 1e-6)
    np.testing.assert_allclose(basin.fixed_point, FIXED_POINT, atol=1e-3)


def test_basin_validation(params):
    with pytest.raises(ValueError):
        basin_sample(params, ConstPlusSine(), cycles=10)
