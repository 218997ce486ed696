"""Forward kinematics stepping and plan playback.

``fk_step`` advances the configuration under the regime-gated Jacobian and
is the single integration path shared by the planner and the simulator, so
plans replay to the same trajectory they were made with.  ``rollout``
replays a plan with the segment thermal loops in the loop: at every
stiffness change the motion pauses (drive speeds zero) until both segments
report the commanded phase, unless gating is disabled.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

from . import thermal as th
from .errors import ContractError, ThermalTimeoutError
from .geometry import AgentConfig, GeometryParams, StiffnessState
from .jacobian import hybrid_jacobian

if TYPE_CHECKING:
    from .planner import PlanResult

_SAT_TOL = 1e-12


def _kappa_bound(s: StiffnessState, geom: GeometryParams) -> float:
    # the equal-curvature mode only covers half the single-segment range
    return geom.kappa_max_uniform if s.index == 3 else geom.kappa_max


def _clipped(arr: np.ndarray, bound: float) -> AgentConfig:
    return AgentConfig(arr[0], arr[1], arr[2],
                       float(np.clip(arr[3], -bound, bound)),
                       float(np.clip(arr[4], -bound, bound)))


def fk_step_detailed(q: AgentConfig, s: StiffnessState, speeds,
                     dt: float, geom: GeometryParams,
                     integrator: str = "euler",
                     jac: np.ndarray | None = None
                     ) -> tuple[AgentConfig, bool]:
    """One integration step; returns (new config, curvature saturated).

    Curvatures are clamped to the regime bound after the step; the flag
    reports whether the clamp engaged.
    """
    if dt <= 0:
        raise ContractError(f"step dt must be positive, got {dt}")
    ups = np.asarray(speeds, dtype=float)
    if ups.shape != (5,):
        raise ContractError(f"speed vector must have shape (5,), got {ups.shape}")
    bound = _kappa_bound(s, geom)
    if integrator == "euler":
        j0 = hybrid_jacobian(q, s, geom) if jac is None else jac
        arr = q.as_array() + dt * (j0 @ ups)
    elif integrator == "rk4":
        def rate(arr_in):
            return hybrid_jacobian(_clipped(arr_in, bound), s, geom) @ ups

        a0 = q.as_array()
        k1 = (hybrid_jacobian(q, s, geom) if jac is None else jac) @ ups
        k2 = rate(a0 + 0.5 * dt * k1)
        k3 = rate(a0 + 0.5 * dt * k2)
        k4 = rate(a0 + dt * k3)
        arr = a0 + dt * (k1 + 2 * k2 + 2 * k3 + k4) / 6
    else:
        raise ContractError(f"unknown integrator {integrator!r}")
    saturated = bool(max(abs(arr[3]), abs(arr[4])) > bound + _SAT_TOL)
    return _clipped(arr, bound), saturated


def fk_step(q: AgentConfig, s: StiffnessState, speeds, dt: float,
            geom: GeometryParams, integrator: str = "euler",
            jac: np.ndarray | None = None) -> AgentConfig:
    return fk_step_detailed(q, s, speeds, dt, geom, integrator, jac)[0]


@dataclass(frozen=True)
class SimRow:
    t: float
    config: AgentConfig
    stiffness: StiffnessState
    speeds: np.ndarray
    temp1: float
    duty1: float
    phase1: str
    temp2: float
    duty2: float
    phase2: str
    paused: bool
    saturated: bool


@dataclass
class Trajectory:
    rows: list[SimRow]
    dt: float
    integrator: str
    thermal_gating: bool

    @property
    def final_config(self) -> AgentConfig:
        return self.rows[-1].config

    def pause_blocks(self) -> list[tuple[int, int]]:
        """Contiguous paused spans as (first row index, row count)."""
        blocks = []
        start = None
        for i, row in enumerate(self.rows):
            if row.paused and start is None:
                start = i
            elif not row.paused and start is not None:
                blocks.append((start, i - start))
                start = None
        if start is not None:
            blocks.append((start, len(self.rows) - start))
        return blocks

    def stiffness_runs(self) -> list[tuple[str, int]]:
        """Plan-order stiffness labels with motion-row counts."""
        runs: list[tuple[str, int]] = []
        for row in self.rows[:-1]:
            if row.paused:
                continue
            label = row.stiffness.label()
            if runs and runs[-1][0] == label:
                runs[-1] = (label, runs[-1][1] + 1)
            else:
                runs.append((label, 1))
        return runs


def rollout(q0: AgentConfig, plan, geom: GeometryParams,
            thermal_params: th.ThermalParams | None = None,
            thermal_gating: bool = True,
            integrator: str | None = None,
            dt: float | None = None,
            max_wait: float = 60.0) -> Trajectory:
    """Replay a plan from q0; returns the full row-per-step trajectory.

    ``plan`` needs ``steps`` (each with ``stiffness`` and ``speeds``) and a
    ``params`` carrying default dt and integrator.  With gating on, motion
    holds (speeds zero) after each stiffness change until both segments
    reach the commanded phase; longer than max_wait raises
    ThermalTimeoutError.
    """
    params = thermal_params if thermal_params is not None else th.ThermalParams()
    dt = float(dt if dt is not None else plan.params.dt)
    integrator = integrator if integrator is not None else getattr(
        plan.params, "integrator", "euler")
    st1 = th.initial_state(params)
    st2 = th.initial_state(params)
    q = q0
    t = 0.0
    rows: list[SimRow] = []
    prev_cmd: StiffnessState | None = None
    zero = np.zeros(5)
    for step in plan.steps:
        cmd = step.stiffness
        if cmd != prev_cmd:
            st1 = th.command(st1, cmd.soft1, params)
            st2 = th.command(st2, cmd.soft2, params)
            prev_cmd = cmd
        if thermal_gating:
            waited = 0.0
            while not (th.is_ready(st1, cmd.soft1) and th.is_ready(st2, cmd.soft2)):
                if waited >= max_wait:
                    raise ThermalTimeoutError(
                        f"segments stuck at {st1.temperature:.1f} / "
                        f"{st2.temperature:.1f} deg C after {waited:g} s",
                        temperatures=(st1.temperature, st2.temperature),
                        elapsed=waited)
                n1, u1 = th.thermal_step(st1, params, dt)
                n2, u2 = th.thermal_step(st2, params, dt)
                rows.append(SimRow(t, q, cmd, zero,
                                   st1.temperature, u1, st1.phase,
                                   st2.temperature, u2, st2.phase,
                                   paused=True, saturated=False))
                st1, st2 = n1, n2
                t += dt
                waited += dt
        ups = np.asarray(step.speeds, dtype=float)
        q_next, sat = fk_step_detailed(q, cmd, ups, dt, geom, integrator)
        n1, u1 = th.thermal_step(st1, params, dt)
        n2, u2 = th.thermal_step(st2, params, dt)
        rows.append(SimRow(t, q, cmd, ups,
                           st1.temperature, u1, st1.phase,
                           st2.temperature, u2, st2.phase,
                           paused=False, saturated=sat))
        st1, st2 = n1, n2
        q = q_next
        t += dt
    last_cmd = prev_cmd if prev_cmd is not None else StiffnessState(False, False)
    rows.append(SimRow(t, q, last_cmd, zero,
                       st1.temperature, th.duty(st1, params), st1.phase,
                       st2.temperature, th.duty(st2, params), st2.phase,
                       paused=False, saturated=False))
    return Trajectory(rows=rows, dt=dt, integrator=integrator,
                      thermal_gating=thermal_gating)
