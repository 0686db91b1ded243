"""Integrator tests: driftlessness, symmetry, order and determinism."""

import numpy as np
import pytest

from magswim import (ConstPlusSine, Sampled, SwimmerParams, per_cycle_summary,
                     rollout, rollout_batch)
from magswim.errors import IncommensurateStepError
from magswim.signals import rotation


def zero_signal(duration):
    return Sampled([0.0, duration], [[0.0, 0.0], [0.0, 0.0]])


def test_driftless(params):
    rng = np.random.default_rng(21)
    q0 = rng.uniform(-1, 1, 4)
    traj = rollout(params, zero_signal(5.0), q0, 5.0, 200)
    np.testing.assert_allclose(traj.states[-1], q0, atol=1e-13)


def test_rollout_shapes_and_endpoints(params):
    sig = ConstPlusSine()
    traj = rollout(params, sig, [0, 0, 0, 0], 2.0, 150)
    assert traj.states.shape == (301, 4)
    assert traj.times[0] == 0.0
    assert traj.times[-1] == pytest.approx(2.0)
    assert traj.step == pytest.approx(1.0 / 150)
    np.testing.assert_allclose(traj.controls[0], sig.evaluate(0.0),
                               atol=1e-15)
    f = traj.final_state()
    np.testing.assert_allclose(f.as_array(), traj.states[-1], atol=0)


def test_rollout_validation(params):
    sig = ConstPlusSine()
    with pytest.raises(ValueError):
        rollout(params, sig, [0, 0, 0, 0], 0.0)
    with pytest.raises(ValueError):
        rollout(params, sig, [0, 0, 0, 0], 1.0, steps_per_unit=10)
    with pytest.raises(ValueError):
        rollout(params, sig, [0, 0, 0], 1.0)


def test_time_scaling(params):
    """Scaling frequency and amplitude together compresses time but leaves
    the configuration-space path unchanged (no intrinsic timescale)."""
    sig1 = ConstPlusSine(amplitude=1.0, frequency=2 * np.pi)
    sig2 = ConstPlusSine(amplitude=2.0, frequency=4 * np.pi)
    t1 = rollout(params, sig1, [0, 0, 0, 0], 2.0, 800)
    t2 = rollout(params, sig2, [0, 0, 0, 0], 1.0, 1600)
    np.testing.assert_allclose(t2.states, t1.states, atol=1e-8)


def test_rollout_equivariance(params):
    """Rotating the drive heading rotates the world track."""
    rng = np.random.default_rng(22)
    alpha = rng.uniform(-np.pi, np.pi)
    q0 = rng.uniform(-0.5, 0.5, 4)
    R = rotation(alpha)
    base = ConstPlusSine(heading=0.0)
    rot = ConstPlusSine(heading=alpha)
    q0_rot = np.concatenate([R @ q0[0:2], q0[2:4] + alpha])
    ta = rollout(params, rot, q0_rot, 2.0, 400)
    tb = rollout(params, base, q0, 2.0, 400)
    want = np.column_stack([tb.states[:, 0:2] @ R.T, tb.states[:, 2:4] + alpha])
    np.testing.assert_allclose(ta.states, want, atol=1e-9)


def test_fourth_order_convergence(params):
    sig = ConstPlusSine()
    ref = rollout(params, sig, [0, 0, 0, 0], 2.0, 1600).states[-1]
    e1 = np.linalg.norm(rollout(params, sig, [0, 0, 0, 0], 2.0, 200)
                        .states[-1] - ref)
    e2 = np.linalg.norm(rollout(params, sig, [0, 0, 0, 0], 2.0, 400)
                        .states[-1] - ref)
    assert 12.0 < e1 / e2 < 20.0


def test_rollout_deterministic(params):
    sig = ConstPlusSine()
    a = rollout(params, sig, [0, 0, 0.1, -0.2], 3.0, 300)
    b = rollout(params, sig, [0, 0, 0.1, -0.2], 3.0, 300)
    assert np.array_equal(a.states, b.states)
    assert np.array_equal(a.controls, b.controls)


def test_batch_matches_scalar(params):
    rng = np.random.default_rng(23)
    sig = ConstPlusSine()
    q0s = rng.uniform(-0.5, 0.5, (5, 4))
    finals = rollout_batch(params, sig, q0s, 1.5, 400)
    for k in range(5):
        solo = rollout(params, sig, q0s[k], 1.5, 400).states[-1]
        np.testing.assert_allclose(finals[k], solo, atol=1e-11)


def test_batch_per_swimmer_magnetization(params):
    sig = ConstPlusSine()
    mags = np.array([[1.0, 2.0, 0.0, 0.0], [0.5, 1.0, 0.0, 0.0]])
    finals = rollout_batch(params, sig, np.zeros((2, 4)), 1.0, 300,
                           magnetizations=mags)
    solo = rollout(params, sig, np.zeros(4), 1.0, 300,
                   magnetization=tuple(mags[1])).states[-1]
    np.testing.assert_allclose(finals[1], solo, atol=1e-11)


def test_per_cycle_summary(params):
    sig = ConstPlusSine()
    traj = rollout(params, sig, [0, 0, 0, 0], 12.0, 400)
    rows = per_cycle_summary(traj, 1.0)
    assert rows.shape == (12, 5)
    np.testing.assert_array_equal(rows[:, 0], np.arange(12))
    # steady translation: closed orientation cycle
    assert abs(rows[-1, 3]) < 1e-3 and abs(rows[-1, 4]) < 1e-3
    assert abs(rows[-1, 1]) > 0
    with pytest.raises(IncommensurateStepError):
        per_cycle_summary(traj, 0.9371)


def test_per_cycle_displacement_sums_to_total(params):
    sig = ConstPlusSine()
    traj = rollout(params, sig, [0, 0, 0, 0], 5.0, 200)
    rows = per_cycle_summary(traj, 1.0)
    np.testing.assert_allclose(rows[:, 1:].sum(axis=0),
                               traj.states[-1] - traj.states[0], atol=1e-12)
