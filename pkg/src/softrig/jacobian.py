"""Configuration-rate Jacobians for the two drive regimes.

Soft regime: wheel speeds of the two units map to curvature, heading and
position rates through the per-mode spiral gains.  Which rows a unit's
speed reaches depends on the stiffness pattern:

  only segment 2 soft   v1 acts through mode 2 (far-side drive, the whole
                        pose plus kappa2), v2 through mode 1 (kappa2 only,
                        body frame stationary)
  only segment 1 soft   mirror image of the above
  both soft             mode 3 from either side; the segment next to the
                        stationary unit governs the pose rows, both
                        curvatures rate together

Rigid regime: the agent is a single omnidirectional body and the planar
twist (u0, v0, r0) maps to world rates by the heading rotation.

Pose rows come from an exact kinematic chain: the segment-end frame on the
stationary side is frozen and the body origin is differentiated along the
arc shape, so the spiral model only enters through the shared gain K.  The
heading rate is +/- seg_len * K * v, positive for segment 1 (the body
heading leads the stationary end by the bend angle) and negative for
segment 2.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import ContractError
from .geometry import (AgentConfig, GeometryParams, Pose2, StiffnessState,
                       cc_transform, global_pose)
from .spiral import rate_coeffs, spiral_model

# fit-frame x axes for modes 2 and 3 are mirrored against the reference
# table; flip the tabulated centre x so the centre lands on the curve side
_CX_SIGN = (1.0, -1.0, -1.0)

_FD_REL_STEP = 1e-6


def body_origin_in_segment_frame(kappa: float, j: int,
                                 geom: GeometryParams) -> np.ndarray:
    """Body-frame origin seen from the segment-end frame {b_j}."""
    return cc_transform(kappa, j, geom).inverse().xy


def spiral_center_frame(q: AgentConfig, mode: int, j: int,
                        geom: GeometryParams) -> Pose2:
    """World pose of the spiral-centre frame for a deformation mode.

    The centre sits at the tabulated offset from the segment-end frame
    {b_j} on the side that holds still (modes 2 and 3) or on the moving
    side seen relatively (mode 1), mirrored to the bend direction, axes
    aligned with {b_j}.
    """
    sp = spiral_model(mode)
    if j not in (1, 2):
        raise ContractError(f"segment index must be 1 or 2, got {j}")
    kap = q.kappa(j)
    bend = -1.0 if kap < 0 else 1.0
    centre = Pose2.from_xytheta(_CX_SIGN[mode - 1] * sp.cx_over_l * geom.seg_len,
                                bend * sp.cy_over_l * geom.seg_len, 0.0)
    return global_pose(q).compose(cc_transform(kap, j, geom)).compose(centre)


def F_point_global(q: AgentConfig, mode: int, j: int, geom: GeometryParams,
                   kappa: float | None = None) -> np.ndarray:
    """World position of the body origin as segment j bends.

    The segment-end frame {b_j} is frozen at the current configuration and
    the body origin is placed along the arc for the requested curvature
    (default: the current one, which returns (q.x, q.y) exactly).  The
    value is routed through the mode's spiral-centre frame, which cancels
    algebraically; the mode only selects that frame.
    """
    centre_frame = spiral_center_frame(q, mode, j, geom)
    anchor = global_pose(q).compose(cc_transform(q.kappa(j), j, geom))
    kap = q.kappa(j) if kappa is None else kappa
    local = body_origin_in_segment_frame(kap, j, geom)
    centre_to_anchor = centre_frame.inverse().compose(anchor)
    return centre_frame.apply(centre_to_anchor.apply(local))


def delta_coeff(q: AgentConfig, mode: int, j: int,
                geom: GeometryParams) -> np.ndarray:
    """Position-rate column entry: d(body origin)/d(kappa_j) * K_mode.

    Central finite difference of the frozen-anchor chain, one sided at the
    curvature bound.  Mode 1 leaves the body frame stationary, so its
    pose contribution is identically zero and is not defined here.
    """
    if mode not in (2, 3):
        raise ContractError(
            f"pose coupling exists for modes 2 and 3 only, got {mode}")
    if j not in (1, 2):
        raise ContractError(f"segment index must be 1 or 2, got {j}")
    kap = q.kappa(j)
    k_gain, _, _ = rate_coeffs(mode, kap, geom.seg_len)
    bound = geom.kappa_max
    step = _FD_REL_STEP * bound
    hi = min(kap + step, bound)
    lo = max(kap - step, -bound)
    f_hi = body_origin_in_segment_frame(hi, j, geom)
    f_lo = body_origin_in_segment_frame(lo, j, geom)
    d_local = (f_hi - f_lo) / (hi - lo)
    alpha = kap * geom.seg_len
    ang = q.phi + (-alpha if j == 1 else alpha)
    c, s = math.cos(ang), math.sin(ang)
    return k_gain * np.array([c * d_local[0] - s * d_local[1],
                              s * d_local[0] + c * d_local[1]])


def rigid_jacobian(q: AgentConfig) -> np.ndarray:
    """World rates of (x, y, phi, kappa1, kappa2) per body twist (u0, v0, r0)."""
    c, s = math.cos(q.phi), math.sin(q.phi)
    jac = np.zeros((5, 3))
    jac[0, 0] = c
    jac[0, 1] = -s
    jac[1, 0] = s
    jac[1, 1] = c
    jac[2, 2] = 1.0
    return jac


def soft_jacobian(q: AgentConfig, s: StiffnessState,
                  geom: GeometryParams) -> np.ndarray:
    """Configuration rates per unit drive speed (v1, v2), 5 x 2.

    Zero when both segments are rigid.  Column 0 is the unit on the
    segment-1 side, column 1 the unit on the segment-2 side.
    """
    l = geom.seg_len
    jac = np.zeros((5, 2))
    if s.index == 1:
        # segment 2 soft: v1 drives it from the far side, v2 from next door
        k2, p2, _ = rate_coeffs(2, q.kappa2, l)
        k1, _, _ = rate_coeffs(1, q.kappa2, l)
        jac[0:2, 0] = delta_coeff(q, 2, 2, geom)
        jac[2, 0] = -p2
        jac[4, 0] = k2
        jac[4, 1] = k1
    elif s.index == 2:
        # segment 1 soft: mirror pairing
        k2, p2, _ = rate_coeffs(2, q.kappa1, l)
        k1, _, _ = rate_coeffs(1, q.kappa1, l)
        jac[3, 0] = k1
        jac[0:2, 1] = delta_coeff(q, 2, 1, geom)
        jac[2, 1] = p2
        jac[3, 1] = k2
    elif s.index == 3:
        # both soft: the segment by the stationary unit carries the pose
        k31, p31, _ = rate_coeffs(3, q.kappa1, l)
        k32, p32, _ = rate_coeffs(3, q.kappa2, l)
        jac[0:2, 0] = delta_coeff(q, 3, 2, geom)
        jac[2, 0] = -p32
        jac[3, 0] = k31
        jac[4, 0] = k32
        jac[0:2, 1] = delta_coeff(q, 3, 1, geom)
        jac[2, 1] = p31
        jac[3, 1] = k31
        jac[4, 1] = k32
    return jac


def hybrid_jacobian(q: AgentConfig, s: StiffnessState,
                    geom: GeometryParams) -> np.ndarray:
    """Full 5 x 5 Jacobian over (v1, v2, u0, v0, r0), regime gated.

    The soft columns and the rigid columns are never active together: the
    rigid block is zeroed while any segment is soft and vice versa.
    """
    jac = np.zeros((5, 5))
    if s.any_soft:
        jac[:, 0:2] = soft_jacobian(q, s, geom)
    else:
        jac[:, 2:5] = rigid_jacobian(q)
    return jac
