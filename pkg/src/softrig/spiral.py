"""Logarithmic-spiral deformation model of the fibre.

While a soft segment bends, the joint between the moving side of the agent
and the fibre traces a curve that is well approximated by a logarithmic
spiral rho = a * exp(b * theta) about a centre fixed on the stationary side.
Three deformation modes have their own fitted spirals:

  mode 1  one segment soft, driven by the unit next to it; the middle link
          stays put and the moving joint is the segment's outer end
  mode 2  one segment soft, driven by the unit on the far side; the whole
          rigid side (unit, rigid segment, middle link) swings around the
          stationary unit
  mode 3  both segments soft with equal curvature, one unit driving while
          the other holds

The spiral angle theta is tied to segment curvature by an affine map
theta = pi + alpha / m (alpha = kappa * seg_len), so each spiral yields a
speed-to-curvature-rate gain K and a speed-to-heading-rate gain Phi used by
the deformation Jacobian.  Bending is mirror symmetric: the radius law
depends on |kappa| and the tabulated b takes the sign opposite to the bend.

Fit frames (used by ``sweep_curve`` and ``refit_oracle``): the curve is
expressed in the frame of the segment end where the spiral centre is
anchored, x pointing away from the moving side, positive bend curling
toward +y.  In this frame the fitted centres land at the tabulated
positions; the centre x for modes 2 and 3 has the opposite sign to the
reference table, which quotes the magnitudes in a mirrored axis convention.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from .errors import ContractError, DomainError, FitError
from .geometry import GeometryParams, cc_transform

_THETA_TOL = 1e-9


@dataclass(frozen=True)
class SpiralModel:
    """Fitted constants of one deformation mode, lengths relative to seg_len."""

    mode: int
    a_over_l: float
    b_mag: float
    cx_over_l: float
    cy_over_l: float
    m: float                  # curvature map slope: kappa = m * (theta - pi) / l
    theta_lo: float
    theta_hi: float

    @property
    def kappa_bound(self) -> float:
        """Largest |kappa| the mode covers, in units of 1/seg_len."""
        return self.m * (self.theta_hi - math.pi)

    def radius(self, kappa: float, seg_len: float) -> float:
        """Distance from the spiral centre to the moving joint, metres.

        Symmetric in the bend direction; shrinks monotonically as the bend
        tightens toward the meeting point of the two units.
        """
        bound = self.kappa_bound / seg_len
        if abs(kappa) > bound * (1 + _THETA_TOL):
            raise DomainError(
                f"mode {self.mode} curvature {kappa:.6g} outside [-{bound:.6g}, "
                f"{bound:.6g}]")
        theta_abs = math.pi + abs(kappa) * seg_len / self.m
        return self.a_over_l * seg_len * math.exp(-self.b_mag * theta_abs)


# reference spiral table for the desk-scale fibre
SPIRALS = (
    SpiralModel(1, 2.325, 0.3165, -0.1223, 0.1782, 1.5, -math.pi / 3, 7 * math.pi / 3),
    SpiralModel(2, 3.3041, 0.083, 0.1988, 0.1640, 1.0, -math.pi, 3 * math.pi),
    SpiralModel(3, 2.4471, 0.2229, -0.2722, 0.3949, 0.75, -math.pi / 3, 7 * math.pi / 3),
)


def spiral_model(mode: int) -> SpiralModel:
    if mode not in (1, 2, 3):
        raise ContractError(f"deformation mode must be 1, 2 or 3, got {mode}")
    return SPIRALS[mode - 1]


def theta_from_kappa(mode: int, kappa: float, seg_len: float) -> float:
    """Spiral angle for a curvature, theta = pi + kappa * l / m."""
    sp = spiral_model(mode)
    theta = math.pi + kappa * seg_len / sp.m
    if not (sp.theta_lo - _THETA_TOL <= theta <= sp.theta_hi + _THETA_TOL):
        raise DomainError(
            f"mode {mode} curvature {kappa:.6g} maps to theta {theta:.6g} outside "
            f"[{sp.theta_lo:.6g}, {sp.theta_hi:.6g}]")
    return theta


def kappa_from_theta(mode: int, theta: float, seg_len: float) -> float:
    """Curvature for a spiral angle, inverse of theta_from_kappa."""
    sp = spiral_model(mode)
    if not (sp.theta_lo - _THETA_TOL <= theta <= sp.theta_hi + _THETA_TOL):
        raise DomainError(
            f"mode {mode} theta {theta:.6g} outside [{sp.theta_lo:.6g}, "
            f"{sp.theta_hi:.6g}]")
    return sp.m * (theta - math.pi) / seg_len


def spiral_point(mode: int, theta: float, seg_len: float,
                 bend_sign: int = 1) -> np.ndarray:
    """Point on the mode's spiral in the centre frame.

    b takes the sign opposite to the bend: b = -bend_sign * b_mag.
    """
    sp = spiral_model(mode)
    if bend_sign not in (1, -1):
        raise ContractError(f"bend_sign must be +1 or -1, got {bend_sign}")
    if not (sp.theta_lo - _THETA_TOL <= theta <= sp.theta_hi + _THETA_TOL):
        raise DomainError(
            f"mode {mode} theta {theta:.6g} outside [{sp.theta_lo:.6g}, "
            f"{sp.theta_hi:.6g}]")
    b = -bend_sign * sp.b_mag
    rho = sp.a_over_l * seg_len * math.exp(b * theta)
    return np.array([rho * math.cos(theta), rho * math.sin(theta)])


def rate_coeffs(mode: int, kappa: float, seg_len: float):
    """Speed-to-rate gains of a deformation mode at one curvature.

    Returns (K, Phi, rho): kappa_dot = K * v and phi-side rate Phi = m / rho
    for a unit driving speed v along the spiral, with rho the current
    centre-to-joint distance.  K = m / (seg_len * rho) and Phi = seg_len * K.
    """
    sp = spiral_model(mode)
    rho = sp.radius(kappa, seg_len)
    k_gain = sp.m / (seg_len * rho)
    return k_gain, sp.m / rho, rho


# ---------------------------------------------------------------------------
# geometric sweep and refit
# ---------------------------------------------------------------------------

def sweep_curve(mode: int, geom: GeometryParams, kappas) -> np.ndarray:
    """Moving-joint trajectory from arc geometry, in the mode's fit frame.

    kappas are bend magnitudes (>= 0).  Mode 1 tracks the outer end of
    segment 2 around the stationary middle link, expressed about the
    segment's middle-link joint with x away from the segment; modes 2 and 3
    track the far segment-end joint in the stationary end frame.
    """
    if mode not in (1, 2, 3):
        raise ContractError(f"deformation mode must be 1, 2 or 3, got {mode}")
    kappas = np.asarray(kappas, dtype=float)
    if np.any(kappas < 0):
        raise DomainError("sweep kappas are bend magnitudes and must be >= 0")
    half_mid = geom.mid_link / 2
    pts = np.empty((len(kappas), 2))
    for i, kap in enumerate(kappas):
        if mode == 1:
            p = cc_transform(kap, 2, geom).xy
            pts[i] = (half_mid - p[0], p[1])
        elif mode == 2:
            t2 = cc_transform(kap, 2, geom)
            p1 = cc_transform(0.0, 1, geom).xy
            pts[i] = t2.inverse().apply(p1)
        else:
            t1 = cc_transform(kap, 1, geom)
            t2 = cc_transform(kap, 2, geom)
            pts[i] = t1.inverse().apply(t2.xy)
    return pts


@dataclass(frozen=True)
class SpiralFit:
    """Result of refitting a mode's spiral from arc geometry."""

    mode: int
    a_over_l: float
    b: float
    cx_over_l: float
    cy_over_l: float
    rms_residual: float       # metres, against the fitted radii
    theta_span: float         # radians covered by one bend branch


def _fit_log_spiral(pts: np.ndarray):
    """Least-squares log-spiral fit with a nonlinearly refined centre."""

    def log_linear(centre):
        d = pts - centre
        theta = np.unwrap(np.arctan2(d[:, 1], d[:, 0]))
        rho = np.hypot(d[:, 0], d[:, 1])
        coef = np.polynomial.polynomial.polyfit(theta, np.log(rho), 1)
        return math.exp(coef[0]), coef[1], theta, rho

    def residual(centre):
        a, b, theta, rho = log_linear(centre)
        return rho - a * np.exp(b * theta)

    span = pts.max(axis=0) - pts.min(axis=0)
    inits = [pts.mean(axis=0),
             pts.mean(axis=0) + 0.25 * span,
             pts.mean(axis=0) - 0.25 * span,
             pts[0] * 0.5,
             np.zeros(2)]
    best = None
    for c0 in inits:
        try:
            sol = least_squares(residual, c0, method="lm", xtol=1e-14, ftol=1e-14)
        except (ValueError, np.linalg.LinAlgError):
            continue
        rms = float(np.sqrt(np.mean(sol.fun ** 2)))
        if best is None or rms < best[0]:
            best = (rms, sol.x)
    if best is None:
        raise FitError("log-spiral fit failed for every centre initialisation")
    rms, centre = best
    a, b, theta, _ = log_linear(centre)
    return a, b, centre, theta, rms


def refit_oracle(mode: int, geom: GeometryParams, n_samples: int = 200,
                 bend_sign: int = 1, max_rel_residual: float = 0.10) -> SpiralFit:
    """Refit a mode's spiral from pure arc geometry.

    Sweeps the bend from straight to the mode bound, fits
    rho = a * exp(b * theta) about a refined centre and reports the
    constants in the reference convention: b carries the sign opposite to
    the bend, the centre y is mirrored with it.
    """
    if bend_sign not in (1, -1):
        raise ContractError(f"bend_sign must be +1 or -1, got {bend_sign}")
    if n_samples < 10:
        raise ContractError(f"need at least 10 sweep samples, got {n_samples}")
    sp = spiral_model(mode)
    bound = sp.kappa_bound / geom.seg_len
    kappas = np.linspace(0.0, bound, n_samples)
    pts = sweep_curve(mode, geom, kappas)
    a, b, centre, theta, rms = _fit_log_spiral(pts)
    mean_radius = float(np.mean(np.hypot(*(pts - centre).T)))
    if rms > max_rel_residual * mean_radius:
        raise FitError(
            f"mode {mode} spiral fit residual {rms:.3g} m exceeds "
            f"{max_rel_residual:.0%} of the mean radius {mean_radius:.3g} m",
            residual=rms)
    l = geom.seg_len
    return SpiralFit(
        mode=mode,
        a_over_l=a / l,
        b=-bend_sign * abs(b),
        cx_over_l=centre[0] / l,
        cy_over_l=bend_sign * centre[1] / l,
        rms_residual=rms,
        theta_span=float(abs(theta[-1] - theta[0])),
    )
