"""6-DOF rigid-body equations of motion and fixed-step integration.

The integration state packs position, body velocity, attitude quaternion,
body rates and the eight actuator states (four signed motor speeds, four
tilt angles). Motors and tilt servos are first-order lags so command
phase behaviour is meaningful. Everything is deterministic: identical
inputs produce bit-identical trajectories.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import allocation, hydro, propulsion
from .frames import (GeometryParams, VehicleState, quat_derivative,
                     quat_normalize, quat_to_matrix, rotate_body_to_world,
                     unit_mount_frame, vec3)


class SimulationFault(Exception):
    """Non-finite state or wrench encountered; carries the last state."""

    def __init__(self, message, state=None, t=None):
        super().__init__(message)
        self.state = state
        self.t = t


class Integrator(enum.Enum):
    RK4 = "rk4"
    SEMI_IMPLICIT_EULER = "semi_implicit_euler"


@dataclass(frozen=True)
class SimParams:
    dt: float = 0.002
    duration: float = 10.0
    gravity: float = 9.81
    integrator: Integrator = Integrator.RK4

    def __post_init__(self):
        if not 0.0 < self.dt <= 0.01:
            raise ValueError("dt must lie in (0, 0.01]")
        if self.duration <= 0:
            raise ValueError("duration must be positive")


@dataclass(frozen=True)
class PlantParams:
    """Everything the equations of motion need besides the state."""

    geometry: GeometryParams = field(default_factory=GeometryParams)
    prop: propulsion.PropellerCoeffs = field(default_factory=propulsion.PropellerCoeffs)
    gearbox: propulsion.Gearbox = field(default_factory=propulsion.Gearbox)
    motor: propulsion.MotorModel = field(default_factory=propulsion.MotorModel)
    air: hydro.Medium = field(default_factory=hydro.air_medium)
    water: hydro.Medium = field(default_factory=hydro.water_medium)
    buoyancy: hydro.BuoyancyModel = field(default_factory=hydro.BuoyancyModel)
    tau_motor: float = 0.05     # s, motor speed lag
    tau_servo: float = 0.12     # s, tilt servo lag
    floor_depth: float = 20.0   # m, hard stop


# state vector layout
_POS = slice(0, 3)
_VEL = slice(3, 6)
_QUAT = slice(6, 10)
_RATE = slice(10, 13)
_MOTOR = slice(13, 17)
_TILT = slice(17, 21)
STATE_SIZE = 21


def pack_state(s: VehicleState) -> np.ndarray:
    x = np.empty(STATE_SIZE)
    x[_POS] = s.position
    x[_VEL] = s.velocity
    x[_QUAT] = s.attitude
    x[_RATE] = s.body_rates
    x[_MOTOR] = s.motor_speed
    x[_TILT] = s.tilt
    return x


def unpack_state(x: np.ndarray) -> VehicleState:
    return VehicleState(
        position=x[_POS].copy(), velocity=x[_VEL].copy(),
        attitude=x[_QUAT].copy(), body_rates=x[_RATE].copy(),
        tilt=x[_TILT].copy(), motor_speed=x[_MOTOR].copy())


def propulsion_wrench(motor_speed: np.ndarray, tilt: np.ndarray,
                      plant: PlantParams):
    """Summed unit wrenches for signed motor speeds and tilt angles."""
    thrusts = np.empty(4)
    torques = np.empty(4)
    for i in range(4):
        mode = (propulsion.PropulsionMode.AQUATIC if motor_speed[i] < 0
                else propulsion.PropulsionMode.AERIAL)
        kt, km = propulsion.equivalent_coeffs(plant.prop, plant.gearbox, mode)
        sq = motor_speed[i] ** 2
        thrusts[i] = kt * sq
        torques[i] = km * sq
    return allocation.total_wrench(thrusts, torques, tilt, plant.geometry)


def environment_wrench(state: VehicleState, plant: PlantParams,
                       gravity: float):
    """Gravity + buoyancy + drag, plus the blended medium and fraction."""
    medium, fraction = hydro.medium_at_depth(
        state.position[2], plant.air, plant.water,
        plant.buoyancy.submersion_band)
    w = hydro.gravity_wrench(state, plant.geometry.mass, gravity)
    w = w + hydro.buoyancy_wrench(state, plant.buoyancy,
                                  plant.water.density, fraction, gravity)
    w = w + hydro.drag_wrench(state, medium)
    return w, medium, fraction


class _PlantCache:
    """Precomputed arrays so the derivative avoids per-call rebuilding."""

    def __init__(self, plant: PlantParams):
        g = plant.geometry
        frames = [unit_mount_frame(g, i + 1) for i in range(4)]
        self.origins = np.array([f[0] for f in frames])
        self.tangents = np.array([f[2] for f in frames])
        self.b = np.asarray(g.b, dtype=float)
        self.kt = np.array([
            propulsion.equivalent_coeffs(plant.prop, plant.gearbox, m)
            for m in (propulsion.PropulsionMode.AERIAL,
                      propulsion.PropulsionMode.AQUATIC)])
        self.mass = g.mass
        self.inertia = np.asarray(g.inertia, dtype=float)
        self.inertia_diag = np.diag(self.inertia)
        self.diagonal_inertia = bool(
            np.all(self.inertia == np.diag(self.inertia_diag)))
        self.air_am = plant.air.added_mass
        self.water_am = plant.water.added_mass
        self.cob = plant.buoyancy.cob_offset
        self.buoy_force = plant.water.density * plant.buoyancy.displaced_volume


def _cross(a, b):
    return np.array([a[1] * b[2] - a[2] * b[1],
                     a[2] * b[0] - a[0] * b[2],
                     a[0] * b[1] - a[1] * b[0]])


def derivative(x: np.ndarray, motor_cmd: np.ndarray, tilt_cmd: np.ndarray,
               plant: PlantParams, gravity: float,
               cache: "_PlantCache | None" = None) -> np.ndarray:
    """Time derivative of the packed state under held actuator commands."""
    cache = cache or _PlantCache(plant)
    q = x[_QUAT]
    qn = q / np.sqrt(q @ q)
    rot = quat_to_matrix(qn)  # body -> world
    v = x[_VEL]
    w = x[_RATE]
    speed = x[_MOTOR]
    beta = x[_TILT]

    # propulsion: thrust lines sweep tangent/-z planes about the arms
    sq = speed * speed
    aquatic = speed < 0.0
    kt = np.where(aquatic, cache.kt[1, 0], cache.kt[0, 0])
    km = np.where(aquatic, cache.kt[1, 1], cache.kt[0, 1])
    thrust = kt * sq
    torque = km * sq
    n = np.cos(beta)[:, None] * cache.tangents
    n[:, 2] -= np.sin(beta)
    unit_forces = thrust[:, None] * n
    force = unit_forces.sum(axis=0)
    moment = (np.cross(cache.origins, unit_forces)
              + (cache.b * torque)[:, None] * n).sum(axis=0)

    # environment: gravity/buoyancy rotated into the body, local drag
    medium, fraction = hydro.medium_at_depth(
        x[2], plant.air, plant.water, plant.buoyancy.submersion_band)
    buoy = cache.buoy_force * gravity * fraction
    grav_body = (cache.mass * gravity) * rot[2]  # R^T @ [0,0,mg]
    buoy_body = -buoy * rot[2]
    force += grav_body + buoy_body
    moment += _cross(cache.cob, buoy_body)
    force -= medium.drag_linear * v + medium.drag_quadratic * np.abs(v) * v
    moment -= medium.rot_drag_quadratic * np.abs(w) * w

    if not (np.all(np.isfinite(force)) and np.all(np.isfinite(moment))):
        raise SimulationFault("non-finite wrench", state=unpack_state(x))

    m_eff = cache.mass + fraction * medium.added_mass[:3]
    i_diag = cache.inertia_diag + fraction * medium.added_mass[3:]
    dv = (force - _cross(w, m_eff * v)) / m_eff
    if cache.diagonal_inertia:
        dw = (moment - _cross(w, i_diag * w)) / i_diag
    else:
        i_eff = cache.inertia + np.diag(fraction * medium.added_mass[3:])
        dw = np.linalg.solve(i_eff, moment - _cross(w, i_eff @ w))

    dx = np.empty(STATE_SIZE)
    dx[_POS] = rot @ v
    dx[_VEL] = dv
    dx[_QUAT] = quat_derivative(qn, w)
    dx[_RATE] = dw
    dx[_MOTOR] = (motor_cmd - speed) / plant.tau_motor
    dx[_TILT] = (tilt_cmd - beta) / plant.tau_servo
    return dx


def step(x: np.ndarray, motor_cmd: np.ndarray, tilt_cmd: np.ndarray,
         plant: PlantParams, params: SimParams,
         cache: _PlantCache | None = None) -> np.ndarray:
    """One fixed-step update; quaternion renormalized afterwards."""
    dt = params.dt
    cache = cache or _PlantCache(plant)
    f = lambda y: derivative(y, motor_cmd, tilt_cmd, plant, params.gravity,
                             cache)
    if params.integrator is Integrator.RK4:
        k1 = f(x)
        k2 = f(x + 0.5 * dt * k1)
        k3 = f(x + 0.5 * dt * k2)
        k4 = f(x + dt * k3)
        x_new = x + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    else:
        dx = f(x)
        x_new = x.copy()
        x_new[_VEL] += dt * dx[_VEL]
        x_new[_RATE] += dt * dx[_RATE]
        x_new[_MOTOR] += dt * dx[_MOTOR]
        x_new[_TILT] += dt * dx[_TILT]
        half = unpack_state(x_new)
        x_new[_POS] += dt * rotate_body_to_world(
            quat_normalize(x[_QUAT]), half.velocity)
        x_new[_QUAT] += dt * quat_derivative(x[_QUAT], half.body_rates)

    x_new[_QUAT] = quat_normalize(x_new[_QUAT])
    # hard floor: stop downward motion at the configured depth
    if x_new[2] > plant.floor_depth:
        x_new[2] = plant.floor_depth
        x_new[5] = min(x_new[5], 0.0)
    if not np.all(np.isfinite(x_new)):
        raise SimulationFault("non-finite state after step",
                              state=unpack_state(x))
    return x_new


def simulate(plant: PlantParams, params: SimParams, initial: VehicleState,
             controller, control_decimation: int = 2,
             record_decimation: int = 10):
    """Run the closed loop and collect decimated trajectory records.

    controller(t, state) -> (signed duties[4], tilt setpoints[4]); it is
    invoked every control_decimation physics ticks with commands held in
    between. Returns a list of record dicts; on a fault the partial list
    is attached to the raised SimulationFault.
    """
    x = pack_state(initial.normalized())
    cache = _PlantCache(plant)
    n_steps = int(round(params.duration / params.dt))
    motor_cmd = np.zeros(4)
    tilt_cmd = initial.tilt.copy()
    duties = np.zeros(4)
    records = []

    def record(k, x):
        state = unpack_state(x)
        w_prop = propulsion_wrench(state.motor_speed, state.tilt, plant)
        env, _, fraction = environment_wrench(state, plant, params.gravity)
        net = w_prop + env
        records.append({
            "t": k * params.dt,
            "state": state,
            "duty": duties.copy(),
            "fraction": fraction,
            "force": net.force,
            "moment": net.moment,
        })

    try:
        for k in range(n_steps):
            if k % control_decimation == 0:
                state = unpack_state(x)
                duties, tilt_cmd = controller(k * params.dt, state)
                duties = np.clip(np.asarray(duties, dtype=float), -1.0, 1.0)
                motor_cmd = duties * plant.motor.omega_max
            if k % record_decimation == 0:
                record(k, x)
            x = step(x, motor_cmd, np.asarray(tilt_cmd, dtype=float),
                     plant, params, cache)
        record(n_steps, x)
    except SimulationFault as fault:
        fault.records = records
        fault.t = len(records)
        raise
    return records
