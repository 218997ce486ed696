"""Kinematics and motion planning for a stiffness-switching wheeled agent.

Two omnidirectional wheel units joined by a two-segment fibre whose
segments can be melted soft or frozen rigid.  The package models the
constant-curvature geometry, the wheel-to-configuration kinematics in both
regimes, a log-spiral deformation rate model, a greedy stiffness-switching
planner, the segment thermal loops and deterministic CSV/SVG outputs.
"""

__version__ = "0.1.0"

from .errors import (ContractError, DomainError, FitError, ScenarioError,
                     SingularityError, SoftrigError, StallError,
                     ThermalTimeoutError)
from .geometry import (BETA, STIFFNESS_STATES, AgentConfig, GeometryParams,
                       Pose2, StiffnessState, cc_transform, global_pose,
                       segment_joint, wheel_anchor_points, wheel_poses_body,
                       wrap_angle)
from .jacobian import (F_point_global, delta_coeff, hybrid_jacobian,
                       rigid_jacobian, soft_jacobian, spiral_center_frame)
from .planner import (PlannerParams, PlanResult, PlanStep, config_error,
                      damped_speeds, fk_reference, plan_motion,
                      weighted_distance)
from .scenario import (Scenario, example_scenario_dict, load_scenario,
                       sample_scenario, scenario_from_dict)
from .simulator import SimRow, Trajectory, fk_step, fk_step_detailed, rollout
from .spiral import (SPIRALS, SpiralFit, SpiralModel, kappa_from_theta,
                     rate_coeffs, refit_oracle, spiral_model, spiral_point,
                     sweep_curve, theta_from_kappa)
from .thermal import (ThermalParams, ThermalState, command, duty,
                      initial_state, is_ready, sensor_voltage, thermal_step,
                      transition_time)
from .wheelmodel import (VelocityInput, WheelSpeeds, body_twist_from_wheels,
                         config_matrix, rigid_block, soft_block, wheel_speeds)
