"""Stroboscopic-map analysis of the orientation subsystem.

Under a periodic drive the orientations obey the self-contained system
theta_dot = H(theta) u(t).  The stroboscopic map S advances theta by one
period; its fixed points are limit cycles and the eigenvalue magnitudes of
dS/dtheta (Floquet multipliers) decide local stability.  The drive here is
strongly contracting, so plain Picard iteration finds fixed points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import model
from .errors import ConvergenceError, NonFiniteStateError
from .model import SwimmerParams
from .parallel import map_chunks
from .sim import _signal_fn
from .signals import ControlSignal

DEFAULT_STEPS_PER_PERIOD = 2000


def _signal_period(signal: ControlSignal, period: float | None) -> float:
    if period is None:
        period = getattr(signal, "period", None)
    if period is None or not period > 0:
        raise ValueError("signal has no well-defined period; pass one")
    return float(period)


def strobe_map(params: SwimmerParams, signal: ControlSignal, theta0,
               period: float | None = None,
               steps_per_period: int = DEFAULT_STEPS_PER_PERIOD,
               t0: float = 0.0) -> np.ndarray:
    """Advance orientations over exactly one period of the drive.

    ``theta0`` may be a single (theta1, theta2) pair or a batch (k, 2);
    positions are ignored (the orientation subsystem is self-contained).
    """
    T = _signal_period(signal, period)
    theta0 = np.asarray(theta0, dtype=float)
    scalar = theta0.ndim == 1
    th = np.atleast_2d(theta0).copy()
    n = int(steps_per_period)
    dt = T / n
    u_of = _signal_fn(signal)
    half = dt / 2.0

    def f(th_arr, u):
        G = model.mobility(params, th_arr, check_condition=False)
        return G[..., 2:4, 0] * u[0] + G[..., 2:4, 1] * u[1]

    for i in range(n):
        t = t0 + i * dt
        ua, um, ub = u_of(t), u_of(t + half), u_of(t + dt)
        k1 = f(th, ua)
        k2 = f(th + half * k1, um)
        k3 = f(th + half * k2, um)
        k4 = f(th + dt * k3, ub)
        th = th + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.all(np.isfinite(th)):
        raise NonFiniteStateError("strobe integration produced non-finite "
                                  "orientation")
    return th[0] if scalar else th


@dataclass(frozen=True)
class StrobeResult:
    """Converged limit cycle: fixed point, Floquet multiplier magnitudes
    (sorted descending), iteration count and final residual."""

    fixed_point: tuple[float, float]
    multipliers: tuple[float, float]
    iterations: int
    residual: float

    def to_dict(self) -> dict:
        return {"fixed_point": list(self.fixed_point),
                "multipliers": list(self.multipliers),
                "iterations": self.iterations,
                "residual": self.residual}


def _eig2_magnitudes(A: np.ndarray) -> tuple[float, float]:
    """Eigenvalue magnitudes of a real 2x2 matrix, closed form."""
    tr = A[0, 0] + A[1, 1]
    det = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
    disc = tr * tr - 4.0 * det
    if disc >= 0.0:
        r = math.sqrt(disc)
        mags = (abs((tr + r) / 2.0), abs((tr - r) / 2.0))
    else:
        mag = math.sqrt(abs(det))  # complex pair: |lambda| = sqrt(det)
        mags = (mag, mag)
    return (max(mags), min(mags))


def find_limit_cycle(params: SwimmerParams, signal: ControlSignal,
                     theta_guess=(0.0, 0.0), tol: float = 1e-10,
                     max_iter: int = 200, period: float | None = None,
                     steps_per_period: int = DEFAULT_STEPS_PER_PERIOD,
                     jacobian_step: float = 1e-6,
                     t0: float = 0.0) -> StrobeResult:
    """Picard-iterate the strobe map to a fixed point, then compute Floquet
    multipliers from a central finite-difference Jacobian of the map."""
    if not tol > 0:
        raise ValueError("tol must be > 0")
    T = _signal_period(signal, period)
    th = np.asarray(theta_guess, dtype=float).copy()
    residual = np.inf
    for it in range(1, max_iter + 1):
        th_next = strobe_map(params, signal, th, T, steps_per_period, t0)
        residual = float(np.linalg.norm(th_next - th))
        th = th_next
        if residual < tol:
            break
    else:
        raise ConvergenceError(
            f"no fixed point within {max_iter} iterations "
            f"(residual {residual:.3g}); cycle unstable or absent")

    # central-difference Jacobian dS/dtheta in one batched strobe call
    eps = jacobian_step
    probes = np.array([th + [eps, 0], th - [eps, 0],
                       th + [0, eps], th - [0, eps]])
    images = strobe_map(params, signal, probes, T, steps_per_period, t0)
    Jm = np.column_stack([(images[0] - images[1]) / (2 * eps),
                          (images[2] - images[3]) / (2 * eps)])
    return StrobeResult(fixed_point=(float(th[0]), float(th[1])),
                        multipliers=_eig2_magnitudes(Jm),
                        iterations=it, residual=residual)


@dataclass(frozen=True)
class BasinResult:
    """Convergence map of strobe iteration over a grid of initial
    orientations; distances are to ``fixed_point`` in the angular metric
    (componentwise modulo 2 pi)."""

    theta1_0: np.ndarray       # (r1,)
    theta2_0: np.ndarray       # (r2,)
    final_distance: np.ndarray  # (r1, r2)
    converged: np.ndarray       # (r1, r2) bool
    fixed_point: tuple[float, float]
    cycles: int


def angular_distance(theta_a, theta_b) -> np.ndarray:
    """Norm of the componentwise wrapped angle difference."""
    d = np.asarray(theta_a, dtype=float) - np.asarray(theta_b, dtype=float)
    d = (d + np.pi) % (2.0 * np.pi) - np.pi
    return np.linalg.norm(d, axis=-1)


def basin_sample(params: SwimmerParams, signal: ControlSignal,
                 bounds=((-np.pi, np.pi), (-np.pi, np.pi)),
                 resolution: int = 17, cycles: int = 40,
                 period: float | None = None,
                 steps_per_period: int = 400,
                 reference: tuple[float, float] | None = None,
                 tolerance: float = 1e-6,
                 threads: int = 1) -> BasinResult:
    """Iterate the strobe map from a grid of initial orientations.

    Each cell reports its final angular distance to the reference fixed
    point (found automatically when not given).  Divergent cells are
    reported, not fatal.
    """
    if cycles < 20:
        raise ValueError("cycles must be >= 20")
    T = _signal_period(signal, period)
    if reference is None:
        ref = find_limit_cycle(params, signal, (0.0, 0.0), period=T,
                               steps_per_period=steps_per_period).fixed_point
    else:
        ref = tuple(reference)
    (a1, b1), (a2, b2) = bounds
    th1 = np.linspace(a1, b1, resolution)
    th2 = np.linspace(a2, b2, resolution)
    T1, T2 = np.meshgrid(th1, th2, indexing="ij")
    grid = np.stack([T1.ravel(), T2.ravel()], axis=-1)

    def iterate(chunk):
        th = chunk.copy()
        for _ in range(cycles):
            th = strobe_map(params, signal, th, T, steps_per_period)
        return th

    final = map_chunks(iterate, grid, threads)
    dist = angular_distance(final, np.asarray(ref)).reshape(T1.shape)
    return BasinResult(th1, th2, dist, dist < tolerance, ref, cycles)
