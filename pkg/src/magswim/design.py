"""Design-space studies: magnetization sweeps and the turning-time model.

The magnetization sweep brute-forces the tangential components (c1, c2) of
the two links on a grid, simulating each candidate under the translation
drive and scoring per-cycle x displacement.  The turning-time model is the
single-link alignment ODE theta_dot = -k sin(theta), with an analytic
solution used as the oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import SwimmerParams
from .parallel import map_chunks
from .sim import rollout_batch
from .signals import ConstPlusSine, ControlSignal


@dataclass(frozen=True)
class MagnetizationSurface:
    """Objective surface of the (c1, c2) sweep.

    ``first_cycle_dx`` is |x| after the first cycle from rest (the original
    optimization objective); ``steady_cycle_dx`` is the per-cycle |dx| of the
    final full cycle, which is independent of the start transient.  The
    argmax is taken over the first-cycle column.
    """

    c1: np.ndarray               # (r1,)
    c2: np.ndarray               # (r2,)
    first_cycle_dx: np.ndarray   # (r1, r2)
    steady_cycle_dx: np.ndarray  # (r1, r2)
    cycles: int

    @property
    def argmax(self) -> tuple[float, float]:
        i, j = np.unravel_index(np.argmax(self.first_cycle_dx),
                                self.first_cycle_dx.shape)
        return (float(self.c1[i]), float(self.c2[j]))


def optimize_magnetization(base: SwimmerParams,
                           c1_range=(0.25, 2.0), c2_range=(0.25, 4.0),
                           resolution: int = 16,
                           signal: ControlSignal | None = None,
                           cycles: int = 8,
                           steps_per_period: int = 1000,
                           threads: int = 1) -> MagnetizationSurface:
    """Sweep m = (c1, c2, 0, 0) over a grid and score |dx| per cycle.

    Every cell rolls out from q(0) = 0 under the shared drive (default
    B = (1, sin(2 pi t))).  Deterministic: identical grids give bit-identical
    surfaces.
    """
    if resolution < 8:
        raise ValueError("resolution must be >= 8")
    if signal is None:
        signal = ConstPlusSine()
    T = signal.period
    if T is None:
        raise ValueError("sweep drive must be periodic")
    c1 = np.linspace(c1_range[0], c1_range[1], resolution)
    c2 = np.linspace(c2_range[0], c2_range[1], resolution)
    C1, C2 = np.meshgrid(c1, c2, indexing="ij")
    mags = np.zeros((resolution * resolution, 4))
    mags[:, 0] = C1.ravel()
    mags[:, 1] = C2.ravel()
    steps_per_unit = int(round(steps_per_period / T))

    def sweep(mchunk):
        q0 = np.zeros((len(mchunk), 4))
        after_one = rollout_batch(base, signal, q0, T, steps_per_unit,
                                  magnetizations=mchunk)
        q = after_one
        prev = q0
        for _ in range(cycles - 1):
            prev = q
            q = rollout_batch(base, signal, q, T, steps_per_unit,
                              magnetizations=mchunk)
        return np.column_stack([np.abs(after_one[:, 0]),
                                np.abs(q[:, 0] - prev[:, 0])])

    out = map_chunks(sweep, mags, threads)
    return MagnetizationSurface(c1, c2,
                                out[:, 0].reshape(C1.shape),
                                out[:, 1].reshape(C1.shape), cycles)


def turning_time_analytic(rate: float, delta: float) -> float:
    """Exact alignment time of theta_dot = -rate sin(theta) from pi/2 to
    delta: t = ln(cot(delta / 2)) / rate."""
    return math.log(1.0 / math.tan(delta / 2.0)) / rate


def turning_time(drag_rotational: float, torque_gain: float,
                 delta: float = 0.05, step: float = 1e-4) -> float:
    """Numeric time for a single link to align with the field.

    A uniform field exerts no net force on one link, so its center is
    stationary and the dynamics reduce to theta_dot = -k sin(theta) with
    k = torque_gain / drag_rotational, starting perpendicular to the field
    (theta = pi/2) and ending at the threshold ``delta``.  RK4 with linear
    interpolation of the threshold crossing.
    """
    if not torque_gain > 0:
        raise ValueError("torque_gain must be > 0")
    if not drag_rotational > 0:
        raise ValueError("drag_rotational must be > 0")
    if not 0 < delta <= math.pi / 2:
        raise ValueError("delta must be in (0, pi/2]")
    k = torque_gain / drag_rotational
    if delta >= math.pi / 2:
        return 0.0  # starts exactly at the threshold
    theta = math.pi / 2
    t = 0.0
    f = lambda x: -k * math.sin(x)
    while True:
        k1 = f(theta)
        k2 = f(theta + step / 2 * k1)
        k3 = f(theta + step / 2 * k2)
        k4 = f(theta + step * k3)
        theta_next = theta + step / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if theta_next <= delta:
            frac = (theta - delta) / (theta - theta_next)
            return t + frac * step
        theta = theta_next
        t += step
        if t > 1e4 / k:
            raise RuntimeError("alignment did not reach threshold")


def rotational_drag(params: SwimmerParams) -> float:
    """Rotational drag of one link about its center: xi_n L^3 / 12."""
    return params.drag_normal * params.link_length**3 / 12.0


def turning_time_sweep(gains, drag_rotational: float, delta: float = 0.05,
                       step: float = 1e-4) -> np.ndarray:
    """Rows (k, time_numeric, time_analytic) for each torque gain."""
    rows = []
    for g in gains:
        k = g / drag_rotational
        rows.append((k, turning_time(drag_rotational, g, delta, step),
                     turning_time_analytic(k, delta)))
    return np.array(rows)
