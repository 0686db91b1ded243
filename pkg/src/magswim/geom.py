"""Geometric gait machinery in (theta1, theta2) orientation space.

The mobility matrix splits into a position response P and an orientation
response H.  When H is invertible the local Jacobian J = P H^-1 maps
orientation rates to position rates, and the displacement over a closed
shape loop is the line integral of J d(theta), equal by Stokes' theorem to
the integral of curl J over the enclosed region.  H degenerates when the
swimmer straightens (theta1 = theta2 mod pi); that set is detected by a
condition-number guard and masked rather than regularized away.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import signal as _spsignal

from . import model
from .errors import (LoopInfeasibleError, LoopOutsideFieldError,
                     MaskedRegionError, SingularOrientationError)
from .model import SwimmerParams
from .parallel import map_chunks
from .signals import Sampled, rotation

H_CONDITION_LIMIT = 1e8
# Exclusion threshold for control inversion along a loop.  The hard 1e8
# guard only trips essentially on the singular set itself; samples merely
# near a crossing still produce spikes large enough to dominate the
# normalization, so inversion excludes much earlier.
INVERSION_CONDITION_LIMIT = 100.0


# ---------------------------------------------------------------------------
# shape loops

@dataclass(frozen=True)
class PhasedSine:
    """theta_i(t) = a_i sin(w t + phi_i) + c_i, one closed cycle per 2 pi/w."""

    a1: float
    phi1: float
    c1: float
    a2: float
    phi2: float
    c2: float
    omega: float = 2.0 * np.pi

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError("omega must be > 0")

    @property
    def period(self) -> float:
        return 2.0 * np.pi / self.omega

    def point(self, t):
        t = np.asarray(t, dtype=float)
        w = self.omega
        return np.stack([self.a1 * np.sin(w * t + self.phi1) + self.c1,
                         self.a2 * np.sin(w * t + self.phi2) + self.c2],
                        axis=-1)

    def velocity(self, t):
        t = np.asarray(t, dtype=float)
        w = self.omega
        return np.stack([self.a1 * w * np.cos(w * t + self.phi1),
                         self.a2 * w * np.cos(w * t + self.phi2)], axis=-1)


@dataclass(frozen=True)
class RotatedEllipse:
    """Ellipse with semi-axes (r1, r2), tilted by ``rotation`` about ``center``."""

    r1: float
    r2: float
    rotation: float
    center: tuple[float, float]
    omega: float = 2.0 * np.pi

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError("omega must be > 0")
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))

    @property
    def period(self) -> float:
        return 2.0 * np.pi / self.omega

    def point(self, t):
        t = np.asarray(t, dtype=float)
        w = self.omega
        local = np.stack([self.r1 * np.cos(w * t),
                          self.r2 * np.sin(w * t)], axis=-1)
        return local @ rotation(self.rotation).T + np.asarray(self.center)

    def velocity(self, t):
        t = np.asarray(t, dtype=float)
        w = self.omega
        local = np.stack([-self.r1 * w * np.sin(w * t),
                          self.r2 * w * np.cos(w * t)], axis=-1)
        return local @ rotation(self.rotation).T


@dataclass(frozen=True)
class SampledLoop:
    """Closed polyline in (theta1, theta2); parametrized uniformly per edge
    over one unit of loop time."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 3:
            raise ValueError("need a (n, 2) polyline with n >= 3")
        if not np.all(np.isfinite(pts)):
            raise ValueError("polyline must be finite")
        if not np.allclose(pts[0], pts[-1], atol=1e-12):
            raise ValueError("polyline must be closed (first == last)")
        object.__setattr__(self, "points", pts)

    @property
    def period(self) -> float:
        return 1.0

    def point(self, t):
        t = np.asarray(t, dtype=float)
        n = len(self.points) - 1
        x = (t % 1.0) * n
        i = np.minimum(x.astype(int), n - 1)
        frac = x - i
        p0 = self.points[i]
        p1 = self.points[i + 1]
        return p0 + frac[..., None] * (p1 - p0)

    def velocity(self, t):
        t = np.asarray(t, dtype=float)
        n = len(self.points) - 1
        i = np.minimum(((t % 1.0) * n).astype(int), n - 1)
        return (self.points[i + 1] - self.points[i]) * n


ShapeLoop = PhasedSine | RotatedEllipse | SampledLoop


def loop_to_json(loop: ShapeLoop) -> dict:
    if isinstance(loop, PhasedSine):
        return {"type": "phased_sine", "a1": loop.a1, "phi1": loop.phi1,
                "c1": loop.c1, "a2": loop.a2, "phi2": loop.phi2,
                "c2": loop.c2, "omega": loop.omega}
    if isinstance(loop, RotatedEllipse):
        return {"type": "rotated_ellipse", "r1": loop.r1, "r2": loop.r2,
                "rotation": loop.rotation, "center": list(loop.center),
                "omega": loop.omega}
    if isinstance(loop, SampledLoop):
        return {"type": "sampled", "points": loop.points.tolist()}
    raise TypeError(f"not a shape loop: {loop!r}")


def loop_from_json(data: dict) -> ShapeLoop:
    if not isinstance(data, dict) or "type" not in data:
        raise ValueError("loop spec must be an object with a 'type' key")
    kind = data["type"]
    fields = {k: v for k, v in data.items() if k != "type"}
    try:
        if kind == "phased_sine":
            return PhasedSine(**fields)
        if kind == "rotated_ellipse":
            fields["center"] = tuple(fields["center"])
            return RotatedEllipse(**fields)
        if kind == "sampled":
            return SampledLoop(np.asarray(fields.pop("points"), dtype=float))
    except TypeError as exc:
        raise ValueError(f"bad '{kind}' loop spec: {exc}") from exc
    raise ValueError(f"unknown loop type {kind!r}")


# ---------------------------------------------------------------------------
# P/H decomposition and local Jacobian

def decompose(params: SwimmerParams, theta) -> tuple[np.ndarray, np.ndarray]:
    """Split mobility into position response P and orientation response H.

    [P; H] stacks back to mobility(theta) exactly.  Batched like mobility.
    """
    G = model.mobility(params, theta)
    return G[..., 0:2, :], G[..., 2:4, :]


def _jacobian_batch(params: SwimmerParams, theta):
    """J = P H^-1 and cond(H) for batched theta; singular entries are NaN."""
    G = model.mobility(params, theta, check_condition=False)
    P = G[..., 0:2, :]
    H = G[..., 2:4, :]
    cond = np.linalg.cond(H)
    cond = np.where(np.isfinite(cond), cond, np.inf)
    # adjugate inverse of the 2x2 H; exactly singular cells flow through
    # as inf/NaN and are masked below
    det = H[..., 0, 0] * H[..., 1, 1] - H[..., 0, 1] * H[..., 1, 0]
    adj = np.empty_like(H)
    adj[..., 0, 0] = H[..., 1, 1]
    adj[..., 0, 1] = -H[..., 0, 1]
    adj[..., 1, 0] = -H[..., 1, 0]
    adj[..., 1, 1] = H[..., 0, 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        J = (P @ adj) / det[..., None, None]
    bad = (det == 0.0) | ~np.isfinite(cond)
    J[bad] = np.nan
    cond[bad] = np.inf
    return J, cond


def local_jacobian(params: SwimmerParams, theta,
                   cond_limit: float = H_CONDITION_LIMIT) -> np.ndarray:
    """Local Jacobian J(theta) = P H^-1 mapping theta_dot to (x_dot, y_dot).

    Raises SingularOrientationError near the straightened-swimmer singular
    set (cond(H) above ``cond_limit``) instead of returning garbage.
    """
    J, cond = _jacobian_batch(params, np.asarray(theta, dtype=float))
    if np.any(cond > cond_limit):
        raise SingularOrientationError(
            f"cond(H) = {np.max(cond):.3g} exceeds {cond_limit:g} "
            "(orientation near the theta1 = theta2 singular set)")
    return J


# ---------------------------------------------------------------------------
# curvature field

@dataclass(frozen=True)
class CurvatureField:
    """Gridded curl J over orientation space; NaN + mask flag singular cells.

    Arrays are indexed [i, j] for (theta1[i], theta2[j]).
    """

    theta1: np.ndarray
    theta2: np.ndarray
    curl_x: np.ndarray
    curl_y: np.ndarray
    mask: np.ndarray  # True where the finite-difference stencil was singular

    @property
    def spacing(self) -> tuple[float, float]:
        return (float(self.theta1[1] - self.theta1[0]),
                float(self.theta2[1] - self.theta2[0]))

    @property
    def bounds(self) -> tuple[tuple[float, float], tuple[float, float]]:
        return ((float(self.theta1[0]), float(self.theta1[-1])),
                (float(self.theta2[0]), float(self.theta2[-1])))


DEFAULT_FIELD_BOUNDS = ((-np.pi, 2.0 * np.pi), (-np.pi, 2.0 * np.pi))


def curvature_field(params: SwimmerParams,
                    bounds=DEFAULT_FIELD_BOUNDS,
                    resolution: int = 256,
                    threads: int = 1) -> CurvatureField:
    """curl J on a uniform grid via central finite differences.

    curl_k = d J[k,1] / d theta1 - d J[k,0] / d theta2 with the grid spacing
    as the difference step.  Nodes whose stencil touches a singular-H
    evaluation (or the grid border) are masked, not fatal.
    """
    if resolution < 64:
        raise ValueError("resolution must be >= 64")
    (a1, b1), (a2, b2) = bounds
    th1 = np.linspace(a1, b1, resolution)
    th2 = np.linspace(a2, b2, resolution)
    T1, T2 = np.meshgrid(th1, th2, indexing="ij")
    nodes = np.stack([T1.ravel(), T2.ravel()], axis=-1)

    def eval_nodes(chunk):
        J, cond = _jacobian_batch(params, chunk)
        J[cond > H_CONDITION_LIMIT] = np.nan
        return J

    J_flat = map_chunks(eval_nodes, nodes, threads)
    J = J_flat.reshape(resolution, resolution, 2, 2)

    h1 = th1[1] - th1[0]
    h2 = th2[1] - th2[0]
    curl = np.full((2, resolution, resolution), np.nan)
    for k in range(2):
        d1 = np.full((resolution, resolution), np.nan)
        d2 = np.full((resolution, resolution), np.nan)
        d1[1:-1, :] = (J[2:, :, k, 1] - J[:-2, :, k, 1]) / (2.0 * h1)
        d2[:, 1:-1] = (J[:, 2:, k, 0] - J[:, :-2, k, 0]) / (2.0 * h2)
        curl[k] = d1 - d2
    # a node is masked when its own Jacobian is singular or any stencil
    # neighbor was (the central difference skips the node itself)
    mask = (~np.isfinite(curl[0]) | ~np.isfinite(curl[1])
            | ~np.isfinite(J).all(axis=(2, 3)))
    curl[:, mask] = np.nan
    return CurvatureField(th1, th2, curl[0], curl[1], mask)


# ---------------------------------------------------------------------------
# loop displacement: line and surface integrals

def loop_displacement_line(params: SwimmerParams, loop: ShapeLoop,
                           samples: int = 1024) -> np.ndarray:
    """Trapezoidal line integral of J d(theta) around one loop traversal."""
    if samples < 256:
        raise ValueError("samples must be >= 256")
    ts = np.linspace(0.0, loop.period, samples + 1)
    theta = loop.point(ts)
    J, cond = _jacobian_batch(params, theta)
    if np.any(cond > H_CONDITION_LIMIT):
        raise SingularOrientationError(
            "loop passes through the singular set; line integral undefined")
    integrand = np.einsum("tij,tj->ti", J, loop.velocity(ts))
    return np.trapezoid(integrand, ts, axis=0)


def _loop_polygon(loop: ShapeLoop, samples: int = 720) -> np.ndarray:
    if isinstance(loop, SampledLoop):
        return loop.points
    ts = np.linspace(0.0, loop.period, samples + 1)
    return loop.point(ts)


def _points_in_polygon(points: np.ndarray, poly: np.ndarray) -> np.ndarray:
    """Even-odd (crossing number) containment test, vectorized over points."""
    x, y = points[:, 0], points[:, 1]
    inside = np.zeros(len(points), dtype=bool)
    x0, y0 = poly[:-1, 0], poly[:-1, 1]
    x1, y1 = poly[1:, 0], poly[1:, 1]
    for k in range(len(x0)):
        crosses = (y0[k] > y) != (y1[k] > y)
        if not crosses.any():
            continue
        xi = x0[k] + (y - y0[k]) / (y1[k] - y0[k]) * (x1[k] - x0[k])
        inside ^= crosses & (x < xi)
    return inside


def loop_displacement_surface(field: CurvatureField,
                              loop: ShapeLoop) -> np.ndarray:
    """Surface-integral displacement: sum of curl over enclosed grid cells.

    Cells are counted by even-odd containment of their centers.  Raises if
    the loop leaves the field bounds or encloses masked cells.
    """
    poly = _loop_polygon(loop)
    (a1, b1), (a2, b2) = field.bounds
    if (poly[:, 0].min() < a1 or poly[:, 0].max() > b1
            or poly[:, 1].min() < a2 or poly[:, 1].max() > b2):
        raise LoopOutsideFieldError("loop leaves the curvature-field bounds")
    T1, T2 = np.meshgrid(field.theta1, field.theta2, indexing="ij")
    centers = np.stack([T1.ravel(), T2.ravel()], axis=-1)
    inside = _points_in_polygon(centers, poly).reshape(T1.shape)
    if np.any(inside & field.mask):
        raise MaskedRegionError(
            "loop encloses masked (singular) cells; surface integral "
            "undefined for this loop")
    area = field.spacing[0] * field.spacing[1]
    return np.array([np.sum(field.curl_x[inside]) * area,
                     np.sum(field.curl_y[inside]) * area])


# ---------------------------------------------------------------------------
# control inversion and regularization

def loop_to_control(params: SwimmerParams, loop: ShapeLoop,
                    samples: int = 2048,
                    exclusion_condition: float = INVERSION_CONDITION_LIMIT,
                    ) -> Sampled:
    """Point-wise control inversion u(t) = H^-1(theta_d(t)) theta_d_dot(t).

    Samples where cond(H) exceeds ``exclusion_condition`` are flagged as
    excluded (the raw values keep the near-singular spikes when finite).
    Raises LoopInfeasibleError when more than 20% of samples are excluded.
    """
    if samples < 256:
        raise ValueError("samples must be >= 256 per period")
    T = loop.period
    ts = np.arange(samples) * (T / samples)
    theta = loop.point(ts)
    vel = loop.velocity(ts)
    G = model.mobility(params, theta, check_condition=False)
    H = G[..., 2:4, :]
    cond = np.linalg.cond(H)
    cond = np.where(np.isfinite(cond), cond, np.inf)
    excluded = cond > exclusion_condition
    n_excl = int(excluded.sum())
    if n_excl > 0.2 * samples:
        raise LoopInfeasibleError(
            f"{n_excl}/{samples} samples on the singular set; "
            "loop control is not recoverable")
    det = H[..., 0, 0] * H[..., 1, 1] - H[..., 0, 1] * H[..., 1, 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        u = np.stack([(H[..., 1, 1] * vel[..., 0]
                       - H[..., 0, 1] * vel[..., 1]) / det,
                      (-H[..., 1, 0] * vel[..., 0]
                       + H[..., 0, 0] * vel[..., 1]) / det], axis=-1)
    u[~np.all(np.isfinite(u), axis=-1)] = np.nan
    return Sampled(ts, u, interpolation="linear", period=T, excluded=excluded)


def regularize_control(raw: Sampled, cutoff: float | None = None) -> Sampled:
    """Recover a smooth normalized control from a raw inverted one.

    Excluded or non-finite samples are gap-filled by linear interpolation
    (periodically when the signal is periodic), a first-order low-pass
    filter (bilinear discretization) is applied forward-backward for zero
    phase, and each component is normalized by its own peak magnitude.
    ``cutoff`` is in rad per unit time; default is twice the fundamental of
    a periodic input.
    """
    times = raw.times
    dt = np.diff(times)
    if not np.allclose(dt, dt[0], rtol=1e-9):
        raise ValueError("regularize_control needs uniform sampling")
    dt = float(dt[0])
    if cutoff is None:
        if raw.period is None:
            raise ValueError("cutoff required for aperiodic input")
        cutoff = 2.0 * (2.0 * np.pi / raw.period)

    values = raw.values.copy()
    bad = ~np.all(np.isfinite(values), axis=1)
    if raw.excluded is not None:
        bad |= raw.excluded
    if bad.all():
        raise ValueError("all samples excluded; nothing to regularize")
    if bad.any():
        period = raw.period if raw.period is not None else None
        for k in range(2):
            values[bad, k] = np.interp(times[bad], times[~bad],
                                       values[~bad, k], period=period)

    # first-order Butterworth == first-order low-pass, bilinear transform
    nyquist = 0.5 / dt
    b, a = _spsignal.butter(1, (cutoff / (2.0 * np.pi)) / nyquist)
    if raw.period is not None:
        n = len(values)
        tiled = np.vstack([values, values, values])
        smooth = _spsignal.filtfilt(b, a, tiled, axis=0)[n:2 * n]
    else:
        smooth = _spsignal.filtfilt(b, a, values, axis=0)

    peaks = np.abs(smooth).max(axis=0)
    peaks[peaks == 0.0] = 1.0
    return Sampled(times, smooth / peaks, interpolation="linear",
                   period=raw.period)
