"""Motion-primitive constructors and their steering behavior."""

import numpy as np
import pytest

from magswim import (heading_schedule, per_cycle_summary, rectangle_schedule,
                     rollout, translate_signal, turn_in_place_signal)
from magswim.signals import ConstPlusSine, Rotating, Schedule, rotation


def test_translate_signal_examples():
    sig = translate_signal()
    assert isinstance(sig, ConstPlusSine)
    np.testing.assert_allclose(sig.evaluate(0.0), [1, 0], atol=1e-15)
    rot = translate_signal(2.0, 2 * np.pi, np.pi)
    np.testing.assert_allclose(rot.evaluate(0.0), [-2, 0], atol=1e-12)


def test_rectangle_schedule_structure():
    sched = rectangle_schedule(1.0, 2 * np.pi, (1.0, 2.0, 3.0, 4.0))
    assert isinstance(sched, Schedule)
    assert len(sched.segments) == 4
    assert sched.total_duration == pytest.approx(4.0)
    with pytest.raises(ValueError):
        rectangle_schedule(1.0, 2 * np.pi, (1.0, 0.5, 3.0, 4.0))


def test_rectangle_switch_rotates_field():
    """The field just before and at a switch differ by exactly R_{pi/2}
    (global-time phase continuity)."""
    sched = rectangle_schedule(1.0, 2 * np.pi, (1.5, 3.0, 4.5, 6.0))
    for t_switch in (1.5, 3.0, 4.5):
        before = sched.evaluate(t_switch - 1e-12)
        after = sched.evaluate(t_switch)
        np.testing.assert_allclose(after, rotation(np.pi / 2) @ before,
                                   atol=1e-9)


def test_turn_in_place_signal():
    sig = turn_in_place_signal(1.0, 2 * np.pi, 2 * np.pi / 10)
    assert isinstance(sig, Rotating)
    assert sig.period == pytest.approx(10.0)
    np.testing.assert_allclose(sig.evaluate(0.0), [1, 0], atol=1e-15)
    # zero slow rate degenerates to plain translation
    flat = turn_in_place_signal(1.0, 2 * np.pi, 0.0)
    assert isinstance(flat, ConstPlusSine)
    with pytest.raises(ValueError):
        turn_in_place_signal(1.0, 2 * np.pi, 3 * np.pi)


def test_heading_schedule_matches_rectangle():
    legs = [(k * np.pi / 2, 1.0) for k in range(4)]
    sched = heading_schedule(1.0, 2 * np.pi, legs)
    rect = rectangle_schedule(1.0, 2 * np.pi, (1.0, 2.0, 3.0, 4.0))
    for t in np.linspace(0.0, 4.0, 41):
        np.testing.assert_allclose(sched.evaluate(t), rect.evaluate(t),
                                   atol=1e-14)
    with pytest.raises(ValueError):
        heading_schedule(1.0, 2 * np.pi, [])
    with pytest.raises(ValueError):
        heading_schedule(1.0, 2 * np.pi, [(0.0, -1.0)])


def cycle_headings(traj, period, skip):
    """Mean per-cycle travel direction after ``skip`` settling cycles."""
    rows = per_cycle_summary(traj, period)
    d = rows[skip:, 1:3]
    return np.arctan2(d[:, 1], d[:, 0])


def test_translation_follows_heading(params):
    alpha = 0.7
    sig = translate_signal(1.0, 2 * np.pi, alpha)
    traj = rollout(params, sig, [0, 0, 0, 0], 14.0, 300)
    head = cycle_headings(traj, 1.0, 10)
    assert np.all(np.abs(head - alpha) < 0.05)


def test_octagon_track(params):
    """Eight 45-degree legs trace a closed octagon-like track."""
    legs = [(k * np.pi / 4, 12.0) for k in range(8)]
    sig = heading_schedule(1.0, 2 * np.pi, legs)
    traj = rollout(params, sig, [0, 0, 0, 0], 96.0, 250)
    rows = per_cycle_summary(traj, 1.0)
    for k in range(8):
        d = rows[12 * k + 8:12 * (k + 1), 1:3].sum(axis=0)
        head = np.arctan2(d[1], d[0])
        err = (head - k * np.pi / 4 + np.pi) % (2 * np.pi) - np.pi
        assert abs(err) < 0.15
    # the track returns near its start
    assert np.linalg.norm(traj.states[-1, 0:2] - traj.states[0, 0:2]) < 0.2
