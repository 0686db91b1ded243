"""Motion-primitive control signals: translate, rectangle, turn-in-place.

All constructors are pure and return declarative signals (exact closed-form
evaluation, no integration).  Heading changes in schedules rotate the
ongoing waveform at global time rather than restarting its phase, so a
switch at t1 relates the field just before and after by exactly the
rotation matrix of the heading step.
"""

from __future__ import annotations

import numpy as np

from .signals import ConstPlusSine, ControlSignal, Rotating, Schedule


def translate_signal(B0: float = 1.0, omega: float = 2.0 * np.pi,
                     heading: float = 0.0) -> ConstPlusSine:
    """Steady-translation drive B(t) = B0 R_heading (1, sin(omega t)).

    The swimmer settles into translation along the constant component, i.e.
    along ``heading``.
    """
    return ConstPlusSine(amplitude=B0, frequency=omega, heading=heading)


def rectangle_schedule(B0: float, omega: float,
                       switch_times: tuple[float, float, float, float],
                       ) -> Schedule:
    """Four-leg schedule turning the field counterclockwise by pi/2 at each
    switch time; leg k covers (t_{k-1}, t_k] with heading k pi/2."""
    t1, t2, t3, t4 = switch_times
    if not 0 < t1 < t2 < t3 < t4:
        raise ValueError("switch times must satisfy 0 < t1 < t2 < t3 < t4")
    starts = (0.0, t1, t2, t3)
    ends = (t1, t2, t3, t4)
    segments = tuple(
        (end - start, translate_signal(B0, omega, heading=k * np.pi / 2))
        for k, (start, end) in enumerate(zip(starts, ends)))
    return Schedule(segments)


def turn_in_place_signal(B0: float, omega: float,
                         omega_slow: float) -> ControlSignal:
    """Slowly rotating translation drive R_{omega_slow t} u_trans(t).

    The swimmer's mean orientation tracks the slow rotation with bounded
    positional drift.  ``omega_slow = 0`` degenerates to translate_signal.
    """
    if not omega_slow < omega:
        raise ValueError("omega_slow must be below the drive frequency")
    base = translate_signal(B0, omega)
    if omega_slow == 0.0:
        return base
    return Rotating(base, omega_slow)


def heading_schedule(B0: float, omega: float,
                     legs: list[tuple[float, float]]) -> Schedule:
    """Schedule of rotated translation drives, one (heading, duration) per
    leg, with global-time phase continuity between legs."""
    if not legs:
        raise ValueError("need at least one leg")
    for _, duration in legs:
        if not duration > 0:
            raise ValueError("leg durations must be > 0")
    return Schedule(tuple(
        (duration, translate_signal(B0, omega, heading=heading))
        for heading, duration in legs))
