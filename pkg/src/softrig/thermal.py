"""First-order thermal model of the variable-stiffness segments.

Each segment carries a heater driven by a PI duty cycle and a low-melting
alloy core: above the melt threshold the segment is soft, below the
solidify threshold rigid, with hysteresis in between.  The plant is a
single thermal pole,

    T_dot = (-(T - T_ambient) + gain * u) / tau

with u in [0, u_max].  The integrator only runs while the duty output is
unclamped and is kept non-negative, so the loop heats from ambient to the
soft setpoint without winding past the sensor ceiling.  A sensor map to
volts mirrors the bench instrumentation and flags out-of-range readings.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import ContractError, ThermalTimeoutError

PHASE_SOFT = "soft"
PHASE_RIGID = "rigid"


@dataclass(frozen=True)
class ThermalParams:
    tau: float = 8.0              # s, thermal time constant
    gain: float = 80.0            # K per unit duty at steady state
    t_ambient: float = 25.0      # deg C
    kp: float = 0.08
    ki: float = 0.01
    u_max: float = 1.0
    setpoint_soft: float = 65.0
    setpoint_rigid: float = 25.0
    t_melt: float = 62.0          # phase goes soft at or above
    t_solid: float = 55.0         # phase goes rigid at or below
    sensor_t_lo: float = 0.0
    sensor_t_hi: float = 85.0
    sensor_v_lo: float = 1.1
    sensor_v_hi: float = 3.3

    def __post_init__(self):
        if self.tau <= 0 or self.gain <= 0:
            raise ContractError("thermal tau and gain must be positive")
        if self.u_max <= 0 or self.kp < 0 or self.ki < 0:
            raise ContractError("duty limit must be positive, PI gains >= 0")
        if not self.t_solid < self.t_melt:
            raise ContractError("solidify threshold must sit below melt")
        if not self.sensor_t_lo < self.sensor_t_hi:
            raise ContractError("sensor range must be increasing")


@dataclass(frozen=True)
class ThermalState:
    temperature: float
    setpoint: float
    integral: float = 0.0
    phase: str = PHASE_RIGID


def initial_state(params: ThermalParams) -> ThermalState:
    """Segment at ambient, rigid, holding the rigid setpoint."""
    return ThermalState(temperature=params.t_ambient,
                        setpoint=params.setpoint_rigid)


def command(state: ThermalState, soft: bool, params: ThermalParams) -> ThermalState:
    """Retarget the loop for the requested stiffness."""
    target = params.setpoint_soft if soft else params.setpoint_rigid
    return replace(state, setpoint=target)


def duty(state: ThermalState, params: ThermalParams) -> float:
    """Clamped PI heater duty for the current state."""
    err = state.setpoint - state.temperature
    raw = params.kp * err + params.ki * state.integral
    return min(max(raw, 0.0), params.u_max)


def _phase_after(temperature: float, previous: str, params: ThermalParams) -> str:
    if temperature >= params.t_melt:
        return PHASE_SOFT
    if temperature <= params.t_solid:
        return PHASE_RIGID
    return previous


def thermal_step(state: ThermalState, params: ThermalParams,
                 dt: float) -> tuple[ThermalState, float]:
    """Advance the loop by dt; returns (new state, applied duty)."""
    if dt <= 0:
        raise ContractError(f"thermal step dt must be positive, got {dt}")
    err = state.setpoint - state.temperature
    raw = params.kp * err + params.ki * state.integral
    u = min(max(raw, 0.0), params.u_max)
    integral = state.integral
    if raw == u:
        # conditional integration: hold the integrator while clamped
        integral = min(max(integral + err * dt, 0.0), params.u_max / params.ki
                       if params.ki > 0 else 0.0)
    temp = state.temperature + dt * (
        -(state.temperature - params.t_ambient) + params.gain * u) / params.tau
    return replace(state, temperature=temp, integral=integral,
                   phase=_phase_after(temp, state.phase, params)), u


def is_ready(state: ThermalState, soft: bool) -> bool:
    """True when the alloy phase matches the requested stiffness."""
    return state.phase == (PHASE_SOFT if soft else PHASE_RIGID)


def sensor_voltage(temperature: float,
                   params: ThermalParams) -> tuple[float, bool]:
    """Bench sensor reading in volts and an in-range flag."""
    span_t = params.sensor_t_hi - params.sensor_t_lo
    span_v = params.sensor_v_hi - params.sensor_v_lo
    frac = (temperature - params.sensor_t_lo) / span_t
    in_range = 0.0 <= frac <= 1.0
    frac = min(max(frac, 0.0), 1.0)
    return params.sensor_v_lo + frac * span_v, in_range


def transition_time(params: ThermalParams, to_soft: bool, dt: float = 0.01,
                    t_limit: float = 120.0) -> float:
    """Simulated time for a settled segment to switch phase.

    Starts from the steady state of the opposite command (ambient for
    rigid, the soft equilibrium for soft) and integrates until the phase
    flips.  Raises ThermalTimeoutError past t_limit.
    """
    if to_soft:
        state = command(initial_state(params), soft=True, params=params)
    else:
        state = _settled_soft_state(params, dt)
        state = command(state, soft=False, params=params)
    t = 0.0
    while not is_ready(state, to_soft):
        if t >= t_limit:
            raise ThermalTimeoutError(
                f"no phase change after {t_limit:g} s",
                temperatures=(state.temperature,), elapsed=t)
        state, _ = thermal_step(state, params, dt)
        t += dt
    return t


def _settled_soft_state(params: ThermalParams, dt: float) -> ThermalState:
    state = command(initial_state(params), soft=True, params=params)
    for _ in range(int(round(60.0 / dt))):
        state, _ = thermal_step(state, params, dt)
    if state.phase != PHASE_SOFT:
        raise ThermalTimeoutError(
            "segment never reached the soft phase while settling",
            temperatures=(state.temperature,), elapsed=60.0)
    return state
