"""Wheel-speed maps for the agent's four omniwheels.

A single 4x5 configuration matrix V maps the velocity input
ups = (v1, v2, u0, v0, r0) to wheel angular rates omega = V @ ups:

  - v1, v2   tangential speeds of the two units while the fibre deforms
             (soft regime, at least one segment molten)
  - u0, v0   body-frame linear velocity of the middle link (rigid regime)
  - r0       body angular rate (rigid regime)

The two input groups are exclusive: when any segment is soft only the first
two columns are active, otherwise only the last three.  Wheel headings enter
body-relative; the world heading of the body drops out of the wheel map.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractError, SingularityError
from .geometry import AgentConfig, GeometryParams, StiffnessState, wheel_poses_body

# wheel rate magnitude treated as the drive limit (rad/s)
OMEGA_MAX_DEFAULT = 4.0 * math.pi

_RANK_TOL = 1e-10


@dataclass(frozen=True)
class VelocityInput:
    """Velocity input ups = (v1, v2, u0, v0, r0)."""

    v1: float = 0.0
    v2: float = 0.0
    u0: float = 0.0
    v0: float = 0.0
    r0: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.v1, self.v2, self.u0, self.v0, self.r0])

    @classmethod
    def from_array(cls, v) -> "VelocityInput":
        v = np.asarray(v, dtype=float)
        if v.shape != (5,):
            raise ContractError(f"velocity input must have 5 entries, got {v.shape}")
        return cls(*v.tolist())


@dataclass(frozen=True)
class WheelSpeeds:
    """Angular rates of wheels 1..4 plus a drive-limit flag."""

    omega: np.ndarray
    saturated: bool = False
    scale: float = 1.0


def soft_block(geom: GeometryParams) -> np.ndarray:
    """Columns of V active while the fibre deforms, (4, 2).

    Wheel 1 drives the unit at {b1} with omega1 = v1 / wheel_radius; wheel 3
    drives the unit at {b2} mounted mirrored, omega3 = -v2 / wheel_radius.
    The lateral wheels idle.
    """
    m = np.zeros((4, 2))
    m[0, 0] = 1.0
    m[2, 1] = -1.0
    return m / geom.wheel_radius


def rigid_block(q: AgentConfig, geom: GeometryParams) -> np.ndarray:
    """Columns of V active for rigid-body rolling, (4, 3).

    Row i is (cos psi_i, sin psi_i, x_i sin psi_i - y_i cos psi_i) scaled by
    1 / wheel_radius, with wheel poses in the body frame.
    """
    positions, headings = wheel_poses_body(q.kappa1, q.kappa2, geom)
    rows = np.empty((4, 3))
    for i in range(4):
        c, s = math.cos(headings[i]), math.sin(headings[i])
        x, y = positions[i]
        rows[i] = (c, s, x * s - y * c)
    return rows / geom.wheel_radius


def config_matrix(q: AgentConfig, s: StiffnessState, geom: GeometryParams) -> np.ndarray:
    """Unified wheel configuration matrix V, (4, 5), gated by stiffness."""
    v = np.zeros((4, 5))
    if s.any_soft:
        v[:, :2] = soft_block(geom)
    else:
        v[:, 2:] = rigid_block(q, geom)
    return v


def _check_exclusive(ups: np.ndarray, s: StiffnessState) -> None:
    if s.any_soft and np.any(ups[2:] != 0.0):
        raise ContractError(
            f"stiffness {s.label()} is soft: rigid-body inputs (u0, v0, r0) "
            f"must be zero, got {ups[2:]}")
    if not s.any_soft and np.any(ups[:2] != 0.0):
        raise ContractError(
            f"stiffness {s.label()} is rigid: deformation inputs (v1, v2) "
            f"must be zero, got {ups[:2]}")


def wheel_speeds(q: AgentConfig, s: StiffnessState, ups,
                 geom: GeometryParams,
                 omega_max: float = OMEGA_MAX_DEFAULT) -> WheelSpeeds:
    """Wheel rates for a velocity input, uniformly rescaled at the drive limit.

    The input must respect regime exclusivity.  If any |omega| exceeds
    omega_max the whole vector is scaled down so the demanded motion
    direction is preserved, and the result is flagged.
    """
    ups = np.asarray(ups, dtype=float)
    if ups.shape != (5,):
        raise ContractError(f"velocity input must have 5 entries, got {ups.shape}")
    _check_exclusive(ups, s)
    omega = config_matrix(q, s, geom) @ ups
    peak = np.max(np.abs(omega))
    if peak > omega_max:
        scale = omega_max / peak
        return WheelSpeeds(omega * scale, saturated=True, scale=scale)
    return WheelSpeeds(omega, saturated=False)


def body_twist_from_wheels(q: AgentConfig, s: StiffnessState, omega,
                           geom: GeometryParams) -> np.ndarray:
    """Least-squares velocity input recovered from wheel rates.

    Inverts only the active block of V with the Moore-Penrose pseudoinverse
    and pads the inactive entries with zeros.
    """
    omega = np.asarray(omega, dtype=float)
    if omega.shape != (4,):
        raise ContractError(f"wheel rates must have 4 entries, got {omega.shape}")
    v = config_matrix(q, s, geom)
    block = v[:, :2] if s.any_soft else v[:, 2:]
    sv = np.linalg.svd(block, compute_uv=False)
    if sv[-1] / sv[0] < _RANK_TOL:
        regime = "soft" if s.any_soft else "rigid"
        raise SingularityError(
            f"{regime} wheel block is rank deficient at kappa="
            f"({q.kappa1:.4g}, {q.kappa2:.4g})")
    part = np.linalg.pinv(block) @ omega
    ups = np.zeros(5)
    if s.any_soft:
        ups[:2] = part
    else:
        ups[2:] = part
    return ups
