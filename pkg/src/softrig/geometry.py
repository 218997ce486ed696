"""Planar geometry of a two-unit agent joined by a variable-stiffness fibre.

The agent is two wheeled locomotion units connected by a flexible fibre.  The
fibre has five pieces in a row: end link, soft segment 1, middle link, soft
segment 2, end link.  Each soft segment bends as a circular arc of fixed
length ``seg_len`` and signed curvature kappa (constant-curvature model).

Frames and conventions:
  - {b0}  body frame, at the centre of the middle link, x along the link
  - {b1}  end frame of segment 1 (outer end, where the left unit attaches)
  - {b2}  end frame of segment 2 (outer end, where the right unit attaches)
  - world poses are (x, y, phi) with phi wrapped to (-pi, pi]
  - segment 1 extends toward -x of {b0}, segment 2 toward +x
  - all lengths in metres, angles in radians, curvature in 1/m

Wheel numbering: wheels 1, 2 ride on the unit at {b1}; wheels 3, 4 on the
unit at {b2}.  Wheels 1, 3 sit on the outer block faces (axles along the
fibre), wheels 2, 4 on the lateral faces.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError, DomainError

TWO_PI = 2.0 * math.pi

# wheel mounting angles relative to the segment-end frame, wheels 1..4
BETA = (math.pi / 2, 0.0, -math.pi / 2, math.pi)


def wrap_angle(a: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    a = math.fmod(a + math.pi, TWO_PI)
    if a <= 0.0:
        a += TWO_PI
    return a - math.pi


# ---------------------------------------------------------------------------
# parameter and state records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeometryParams:
    """Fixed dimensions of the agent.

    Defaults describe the desk-scale build: 40 mm soft segments, 30 mm
    plastic links, 46 mm unit blocks with 10 mm thick omniwheels.
    """

    seg_len: float = 0.04      # arc length of each soft segment
    mid_link: float = 0.03     # middle plastic link joining the segments
    end_link: float = 0.03     # plastic link between a segment end and a unit
    block_side: float = 0.046  # side of a locomotion unit block
    wheel_thickness: float = 0.01
    wheel_radius: float = 0.01

    def __post_init__(self):
        for name in ("seg_len", "mid_link", "end_link", "block_side",
                     "wheel_thickness", "wheel_radius"):
            if getattr(self, name) <= 0.0:
                raise DomainError(f"{name} must be positive, got {getattr(self, name)}")

    # wheel anchor offsets along the unit, from the segment-end frame
    @property
    def h1(self) -> float:
        """Outer-face wheel offset: end link + block + half wheel."""
        return (2 * self.end_link + 2 * self.block_side + self.wheel_thickness) / 2

    @property
    def h2(self) -> float:
        """Lateral-face wheel offset along x: end link + half block."""
        return (2 * self.end_link + self.block_side) / 2

    @property
    def h3(self) -> float:
        """Lateral-face wheel offset along y: half block + half wheel."""
        return (self.block_side + self.wheel_thickness) / 2

    @property
    def kappa_max(self) -> float:
        """Full-circle curvature bound for a single soft segment."""
        return TWO_PI / self.seg_len

    @property
    def kappa_max_uniform(self) -> float:
        """Curvature bound when both segments bend together."""
        return math.pi / self.seg_len

    def scaled(self, seg_len: float) -> "GeometryParams":
        """Geometry with all fibre lengths scaled to a new segment length."""
        r = seg_len / self.seg_len
        return GeometryParams(
            seg_len=seg_len,
            mid_link=self.mid_link * r,
            end_link=self.end_link * r,
            block_side=self.block_side,
            wheel_thickness=self.wheel_thickness,
            wheel_radius=self.wheel_radius,
        )


@dataclass(frozen=True)
class AgentConfig:
    """Configuration q = (x, y, phi, kappa1, kappa2).

    Pose of the body frame plus the two segment curvatures.  phi is wrapped
    to (-pi, pi] on construction; curvature bounds are enforced where a
    geometry is in scope, not here.
    """

    x: float
    y: float
    phi: float
    kappa1: float
    kappa2: float

    def __post_init__(self):
        object.__setattr__(self, "phi", wrap_angle(self.phi))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.phi, self.kappa1, self.kappa2])

    @classmethod
    def from_array(cls, q) -> "AgentConfig":
        q = np.asarray(q, dtype=float)
        if q.shape != (5,):
            raise ContractError(f"configuration must have 5 entries, got shape {q.shape}")
        return cls(*q.tolist())

    def kappa(self, j: int) -> float:
        _check_segment(j)
        return self.kappa1 if j == 1 else self.kappa2


@dataclass(frozen=True)
class StiffnessState:
    """Which segments are soft.  soft1/soft2 are the per-segment flags."""

    soft1: bool
    soft2: bool

    @property
    def any_soft(self) -> bool:
        return self.soft1 or self.soft2

    @property
    def index(self) -> int:
        """Position in the canonical hypothesis order: 00, 01, 10, 11."""
        return int(self.soft1) * 2 + int(self.soft2)

    def soft(self, j: int) -> bool:
        _check_segment(j)
        return self.soft1 if j == 1 else self.soft2

    def label(self) -> str:
        return f"{int(self.soft1)}{int(self.soft2)}"


STIFFNESS_STATES = (
    StiffnessState(False, False),
    StiffnessState(False, True),
    StiffnessState(True, False),
    StiffnessState(True, True),
)


# ---------------------------------------------------------------------------
# planar rigid transforms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Pose2:
    """A planar rigid transform, stored as a 3x3 homogeneous matrix."""

    mat: np.ndarray = field(default_factory=lambda: np.eye(3))

    def __post_init__(self):
        m = np.asarray(self.mat, dtype=float)
        if m.shape != (3, 3):
            raise ContractError(f"pose matrix must be 3x3, got {m.shape}")
        object.__setattr__(self, "mat", m)

    @classmethod
    def from_xytheta(cls, x: float, y: float, theta: float) -> "Pose2":
        c, s = math.cos(theta), math.sin(theta)
        return cls(np.array([[c, -s, x], [s, c, y], [0.0, 0.0, 1.0]]))

    @property
    def xy(self) -> np.ndarray:
        return self.mat[:2, 2].copy()

    @property
    def theta(self) -> float:
        return math.atan2(self.mat[1, 0], self.mat[0, 0])

    @property
    def rot(self) -> np.ndarray:
        return self.mat[:2, :2].copy()

    def compose(self, other: "Pose2") -> "Pose2":
        return Pose2(self.mat @ other.mat)

    def inverse(self) -> "Pose2":
        R = self.mat[:2, :2]
        t = self.mat[:2, 2]
        out = np.eye(3)
        out[:2, :2] = R.T
        out[:2, 2] = -R.T @ t
        return Pose2(out)

    def apply(self, p) -> np.ndarray:
        """Transform a point or an (n, 2) array of points."""
        p = np.asarray(p, dtype=float)
        return p @ self.mat[:2, :2].T + self.mat[:2, 2]


def _check_segment(j: int) -> None:
    if j not in (1, 2):
        raise ContractError(f"segment index must be 1 or 2, got {j}")


# ---------------------------------------------------------------------------
# constant-curvature kinematics
# ---------------------------------------------------------------------------

def cc_transform(kappa: float, j: int, geom: GeometryParams) -> Pose2:
    """Transform from the body frame {b0} to the segment-end frame {bj}.

    The segment bends as an arc of length seg_len and curvature kappa; the
    middle link contributes a straight mid_link/2 run before the arc.  The
    end frame rotates by -alpha for segment 1 and +alpha for segment 2,
    alpha = kappa * seg_len.  Near kappa = 0 the translation uses the series
    limit so the map is smooth through the straight configuration.
    """
    _check_segment(j)
    l, half_mid = geom.seg_len, geom.mid_link / 2
    if abs(kappa) > geom.kappa_max * (1 + 1e-9):
        raise DomainError(
            f"segment {j} curvature {kappa:.6g} exceeds the full-circle bound "
            f"{geom.kappa_max:.6g}")
    alpha = kappa * l
    if abs(alpha) < 1e-6:
        # sin(a)/kappa = l*(1 - a^2/6), (1-cos(a))/kappa = l*a/2 to O(a^3)
        chord_x = l * (1.0 - alpha * alpha / 6.0)
        chord_y = l * alpha / 2.0
    else:
        chord_x = math.sin(alpha) / kappa
        chord_y = (1.0 - math.cos(alpha)) / kappa
    if j == 1:
        return Pose2.from_xytheta(-(half_mid + chord_x), chord_y, -alpha)
    return Pose2.from_xytheta(half_mid + chord_x, chord_y, alpha)


def segment_joint(j: int, geom: GeometryParams) -> np.ndarray:
    """Body-frame position of the joint between segment j and the middle link."""
    _check_segment(j)
    x = -geom.mid_link / 2 if j == 1 else geom.mid_link / 2
    return np.array([x, 0.0])


def wheel_anchor_points(geom: GeometryParams) -> np.ndarray:
    """Wheel contact positions relative to their segment-end frames, (2, 4).

    Columns are wheels 1..4.  Wheels 1, 2 are expressed in {b1}; wheels 3, 4
    in {b2}.
    """
    h1, h2, h3 = geom.h1, geom.h2, geom.h3
    return np.array([[-h1, -h2, h1, h2],
                     [0.0, h3, 0.0, -h3]])


def wheel_poses_body(kappa1: float, kappa2: float, geom: GeometryParams):
    """Wheel positions and axle headings in the body frame.

    Returns (positions, headings): positions is (4, 2), headings is (4,)
    with the body-relative wheel orientation -alpha_j + beta_i for wheels on
    segment 1 and +alpha_j + beta_i for wheels on segment 2.
    """
    anchors = wheel_anchor_points(geom)
    t1 = cc_transform(kappa1, 1, geom)
    t2 = cc_transform(kappa2, 2, geom)
    a1, a2 = kappa1 * geom.seg_len, kappa2 * geom.seg_len
    positions = np.empty((4, 2))
    headings = np.empty(4)
    for i in range(4):
        seg = 1 if i < 2 else 2
        frame = t1 if seg == 1 else t2
        positions[i] = frame.apply(anchors[:, i])
        rel = -a1 if seg == 1 else a2
        headings[i] = rel + BETA[i]
    return positions, headings


def global_pose(q: AgentConfig) -> Pose2:
    """World pose of the body frame."""
    return Pose2.from_xytheta(q.x, q.y, q.phi)
