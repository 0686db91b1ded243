"""Two-link magnetic swimmer: parameters and quasi-static driftless dynamics.

The swimmer is two rigid slender links of length L hinged at a shared joint
located at (x, y).  Link 1 occupies the segment from (x, y) - L*t1_hat to the
joint, link 2 from the joint to (x, y) + L*t2_hat, where ti_hat is the unit
tangent of link i.  A spatially uniform field B(t) exerts pure torques on the
permanently magnetized links; resistive-force-theory drag balances them
quasi-statically, which yields a driftless control-affine system

    q_dot = G(theta, m) u,    q = (x, y, theta1, theta2),  u = (Bx, By).

All functions are pure and accept batched orientation arrays: ``theta`` may
have any shape (..., 2) and matrices come back stacked accordingly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularDragError

DRAG_CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class SwimmerParams:
    """Geometry, drag coefficients and internal magnetization of one swimmer.

    ``magnetization`` is (m_t1, m_t2, m_n1, m_n2): dimensionless tangential and
    normal components per link, scaled by ``magnetization_scale``.
    """

    link_length: float = 1.0
    drag_tangential: float = 1.0
    drag_normal: float = 2.0
    link_volume: float = 1.0
    magnetization_scale: float = 1.0
    magnetization: tuple[float, float, float, float] = (1.0, 2.0, 0.0, 0.0)

    def __post_init__(self):
        for name in ("link_length", "drag_tangential", "drag_normal",
                     "link_volume", "magnetization_scale"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be finite and > 0, got {v!r}")
        m = np.asarray(self.magnetization, dtype=float)
        if m.shape != (4,) or not np.all(np.isfinite(m)):
            raise ValueError("magnetization must be 4 finite numbers")
        object.__setattr__(self, "magnetization", tuple(m))

    def replace_magnetization(self, magnetization) -> "SwimmerParams":
        return SwimmerParams(self.link_length, self.drag_tangential,
                             self.drag_normal, self.link_volume,
                             self.magnetization_scale, tuple(magnetization))


@dataclass(frozen=True)
class State:
    """World-frame configuration q = (x, y, theta1, theta2).

    (x, y) is the joint position; angles are link orientations in radians and
    are deliberately never wrapped (limit-cycle analysis needs continuous
    angle evolution).
    """

    x: float = 0.0
    y: float = 0.0
    theta1: float = 0.0
    theta2: float = 0.0

    def __post_init__(self):
        if not np.all(np.isfinite([self.x, self.y, self.theta1, self.theta2])):
            raise ValueError("state entries must be finite")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.theta1, self.theta2])

    @staticmethod
    def from_array(q) -> "State":
        q = np.asarray(q, dtype=float)
        return State(q[0], q[1], q[2], q[3])


def magnetization_world(params: SwimmerParams, link: int, theta: float) -> np.ndarray:
    """World-frame magnetization M of one link at orientation ``theta``.

    M = h * (m_t cos(theta) - m_n sin(theta), m_t sin(theta) + m_n cos(theta)),
    with (m_t, m_n) taken from the given link (1 or 2).
    """
    if link not in (1, 2):
        raise ValueError("link must be 1 or 2")
    mt = params.magnetization[link - 1]
    mn = params.magnetization[link + 1]
    h = params.magnetization_scale
    c, s = np.cos(theta), np.sin(theta)
    return h * np.array([mt * c - mn * s, mt * s + mn * c])


def magnetic_torque(M, B, volume: float) -> float:
    """Planar magnetic torque V * (M x B), z-component of the cross product."""
    M = np.asarray(M, dtype=float)
    B = np.asarray(B, dtype=float)
    return float(volume * (M[0] * B[1] - M[1] * B[0]))


def _unit_vectors(theta):
    """Tangent and normal unit vectors for an array of angles, shape (..., 2)."""
    c, s = np.cos(theta), np.sin(theta)
    t = np.stack([c, s], axis=-1)
    n = np.stack([-s, c], axis=-1)
    return t, n


def drag_matrix(theta, link_length: float, drag_tangential: float,
                drag_normal: float) -> np.ndarray:
    """RFT drag matrix D with D(theta) q_dot = generalized drag resistances.

    Rows, in order: world-x force balance, world-y force balance, total
    moment about the joint, moment of link 2 alone about the joint.  The
    per-unit-length drag law -[xi_t (v.t)t + xi_n (v.n)n] is integrated along
    each link in closed form (velocity is affine in arclength).

    ``theta`` has shape (..., 2); the result has shape (..., 4, 4).
    """
    theta = np.asarray(theta, dtype=float)
    L, xt, xn = link_length, drag_tangential, drag_normal
    t1, n1 = _unit_vectors(theta[..., 0])
    t2, n2 = _unit_vectors(theta[..., 1])

    D = np.zeros(theta.shape[:-1] + (4, 4))
    # Force rows: -(F1 + F2) against (x_dot, y_dot, th1_dot, th2_dot).
    outer = lambda v: v[..., :, None] * v[..., None, :]
    D[..., 0:2, 0:2] = L * (xt * (outer(t1) + outer(t2))
                            + xn * (outer(n1) + outer(n2)))
    D[..., 0:2, 2] = -xn * L**2 / 2 * n1
    D[..., 0:2, 3] = xn * L**2 / 2 * n2
    # Total hydrodynamic moment about the joint.
    D[..., 2, 0:2] = xn * L**2 / 2 * (n2 - n1)
    D[..., 2, 2] = xn * L**3 / 3
    D[..., 2, 3] = xn * L**3 / 3
    # Moment of link 2 alone about the joint.
    D[..., 3, 0:2] = xn * L**2 / 2 * n2
    D[..., 3, 3] = xn * L**3 / 3
    return D


def input_matrix(theta, magnetization, volume: float, scale: float) -> np.ndarray:
    """Magnetic input matrix E with torque rows linear in u = (Bx, By).

    ``magnetization`` broadcasts against ``theta``: shapes (..., 2) and
    (..., 4) give E of shape (..., 4, 2).  Force rows are zero (a uniform
    field exerts no net force).
    """
    theta = np.asarray(theta, dtype=float)
    m = np.broadcast_to(np.asarray(magnetization, dtype=float),
                        theta.shape[:-1] + (4,))
    h = scale
    c1, s1 = np.cos(theta[..., 0]), np.sin(theta[..., 0])
    c2, s2 = np.cos(theta[..., 1]), np.sin(theta[..., 1])
    M1x = h * (m[..., 0] * c1 - m[..., 2] * s1)
    M1y = h * (m[..., 0] * s1 + m[..., 2] * c1)
    M2x = h * (m[..., 1] * c2 - m[..., 3] * s2)
    M2y = h * (m[..., 1] * s2 + m[..., 3] * c2)

    E = np.zeros(theta.shape[:-1] + (4, 2))
    # tau = V (Mx By - My Bx) => row = V * (-My, Mx).
    E[..., 2, 0] = -volume * (M1y + M2y)
    E[..., 2, 1] = volume * (M1x + M2x)
    E[..., 3, 0] = -volume * M2y
    E[..., 3, 1] = volume * M2x
    return E


def assemble_dynamics(params: SwimmerParams, theta,
                      magnetization=None) -> tuple[np.ndarray, np.ndarray]:
    """Drag and input matrices (D, E) of the balance D(theta) q_dot = E u.

    D depends only on theta and drag parameters; E only on theta and the
    magnetization (``magnetization`` overrides the one in ``params`` and may
    be batched for design sweeps).
    """
    theta = np.asarray(theta, dtype=float)
    if magnetization is None:
        magnetization = params.magnetization
    D = drag_matrix(theta, params.link_length, params.drag_tangential,
                    params.drag_normal)
    E = input_matrix(theta, magnetization, params.link_volume,
                     params.magnetization_scale)
    return D, E


def mobility(params: SwimmerParams, theta, magnetization=None,
             check_condition: bool = True) -> np.ndarray:
    """Mobility matrix G = D^-1 E, shape (..., 4, 2).

    Columns are the configuration-velocity responses to unit Bx and unit By.
    G depends on theta only, never on (x, y).  Raises SingularDragError when
    D is numerically singular (condition number above 1e12), which signals
    invalid drag parameters rather than a physical configuration.
    """
    D, E = assemble_dynamics(params, theta, magnetization)
    if check_condition:
        cond = np.linalg.cond(D)
        if not np.all(np.isfinite(cond)) or np.any(cond > DRAG_CONDITION_LIMIT):
            raise SingularDragError(
                f"drag matrix condition number exceeds {DRAG_CONDITION_LIMIT:g}")
    try:
        G = np.linalg.solve(D, E)
    except np.linalg.LinAlgError as exc:
        raise SingularDragError(str(exc)) from exc
    if not np.all(np.isfinite(G)):
        raise SingularDragError("drag solve produced non-finite mobility")
    return G
