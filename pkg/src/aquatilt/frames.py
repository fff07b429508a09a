"""Coordinate frames, quaternion attitude, vehicle state and geometry.

World frame is NED (z positive down); the water surface sits at z = 0 so
positive z is depth. Body frame: x forward, y right, z down. Quaternions
are stored as [w, x, y, z] arrays and map body vectors into the world
frame.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

QUAT_NORM_TOL = 1e-9


def vec3(x=0.0, y=0.0, z=0.0) -> np.ndarray:
    return np.array([x, y, z], dtype=float)


# ---------------------------------------------------------------------------
# quaternion helpers
# ---------------------------------------------------------------------------

def quat_identity() -> np.ndarray:
    return np.array([1.0, 0.0, 0.0, 0.0])


def quat_normalize(q: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(q)
    if n == 0.0:
        raise ValueError("zero quaternion cannot be normalized")
    return q / n


def quat_multiply(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return np.array([
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    ])


def quat_conjugate(q: np.ndarray) -> np.ndarray:
    return np.array([q[0], -q[1], -q[2], -q[3]])


def quat_from_axis_angle(axis: np.ndarray, angle: float) -> np.ndarray:
    axis = np.asarray(axis, dtype=float)
    n = np.linalg.norm(axis)
    if n == 0.0:
        return quat_identity()
    half = 0.5 * angle
    return np.concatenate(([np.cos(half)], np.sin(half) * axis / n))


def quat_from_euler(roll: float, pitch: float, yaw: float) -> np.ndarray:
    """Z-Y-X (yaw-pitch-roll) Euler angles to quaternion."""
    qz = quat_from_axis_angle(vec3(0, 0, 1), yaw)
    qy = quat_from_axis_angle(vec3(0, 1, 0), pitch)
    qx = quat_from_axis_angle(vec3(1, 0, 0), roll)
    return quat_multiply(quat_multiply(qz, qy), qx)


def quat_to_euler(q: np.ndarray) -> tuple[float, float, float]:
    """Quaternion to Z-Y-X Euler angles (roll, pitch, yaw)."""
    w, x, y, z = q
    roll = np.arctan2(2.0 * (w * x + y * z), 1.0 - 2.0 * (x * x + y * y))
    s = 2.0 * (w * y - z * x)
    pitch = np.arcsin(np.clip(s, -1.0, 1.0))
    yaw = np.arctan2(2.0 * (w * z + x * y), 1.0 - 2.0 * (y * y + z * z))
    return float(roll), float(pitch), float(yaw)


def quat_to_matrix(q: np.ndarray) -> np.ndarray:
    w, x, y, z = q
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])


def quat_derivative(q: np.ndarray, body_rates: np.ndarray) -> np.ndarray:
    """dq/dt for body angular rates (rad/s) expressed in the body frame."""
    omega_q = np.concatenate(([0.0], body_rates))
    return 0.5 * quat_multiply(q, omega_q)


def rotate_body_to_world(q: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Rotate a body-frame vector into the world frame.

    A quaternion whose norm has drifted beyond tolerance is renormalized
    with a warning rather than rejected.
    """
    n = np.linalg.norm(q)
    if abs(n - 1.0) > QUAT_NORM_TOL:
        warnings.warn(f"quaternion norm drifted to {n:.3e}; renormalizing")
        q = q / n
    return quat_to_matrix(q) @ np.asarray(v, dtype=float)


def rotate_world_to_body(q: np.ndarray, v: np.ndarray) -> np.ndarray:
    return rotate_body_to_world(quat_conjugate(q), v)


# ---------------------------------------------------------------------------
# vehicle geometry and state
# ---------------------------------------------------------------------------

# Arm azimuths for the X layout: unit 1 front-right, 2 rear-left,
# 3 front-left, 4 rear-right.
DEFAULT_DELTA = (np.pi / 4, -3 * np.pi / 4, -np.pi / 4, 3 * np.pi / 4)
DEFAULT_B = (1, 1, -1, -1)


@dataclass(frozen=True)
class GeometryParams:
    """Airframe geometry, mass properties and buoyancy volume."""

    delta: tuple = DEFAULT_DELTA          # arm azimuth from body x (rad)
    L_p: float = 0.19                     # horizontal arm offset (m), half wheelbase
    H_p: float = 0.02                     # vertical offset, +z below CoG (m)
    b: tuple = DEFAULT_B                  # per-unit torque direction
    mass: float = 1.63                    # kg
    inertia: np.ndarray = field(
        default_factory=lambda: np.diag([0.020, 0.020, 0.035]))
    displaced_volume: float = 1.63e-3     # m^3
    cob_offset: np.ndarray = field(default_factory=lambda: vec3(0, 0, -0.03))

    def __post_init__(self):
        if self.L_p <= 0:
            raise ValueError("L_p must be positive")
        if self.mass <= 0:
            raise ValueError("mass must be positive")
        inertia = np.asarray(self.inertia, dtype=float)
        if not np.allclose(inertia, inertia.T):
            raise ValueError("inertia must be symmetric")
        if np.any(np.linalg.eigvalsh(inertia) <= 0):
            raise ValueError("inertia must be positive definite")
        if len(self.delta) != 4 or len(self.b) != 4:
            raise ValueError("delta and b must have 4 entries")
        if any(s not in (1, -1) for s in self.b):
            raise ValueError("b entries must be +1 or -1")


@dataclass(frozen=True)
class VehicleState:
    """Full kinematic + actuator state; the simulation's source of truth."""

    position: np.ndarray = field(default_factory=vec3)   # m, NED world
    velocity: np.ndarray = field(default_factory=vec3)   # m/s, body frame
    attitude: np.ndarray = field(default_factory=quat_identity)
    body_rates: np.ndarray = field(default_factory=vec3)  # rad/s
    tilt: np.ndarray = field(default_factory=lambda: np.full(4, np.pi / 2))
    motor_speed: np.ndarray = field(default_factory=lambda: np.zeros(4))

    def normalized(self) -> "VehicleState":
        return VehicleState(
            position=self.position,
            velocity=self.velocity,
            attitude=quat_normalize(self.attitude),
            body_rates=self.body_rates,
            tilt=self.tilt,
            motor_speed=self.motor_speed,
        )


@dataclass(frozen=True)
class BodyWrench:
    """Force (N) and moment (N·m) in the body frame."""

    force: np.ndarray = field(default_factory=vec3)
    moment: np.ndarray = field(default_factory=vec3)

    def __add__(self, other: "BodyWrench") -> "BodyWrench":
        return BodyWrench(self.force + other.force, self.moment + other.moment)

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.force)) and np.all(np.isfinite(self.moment)))


ZERO_WRENCH = BodyWrench()


def unit_mount_frame(g: GeometryParams, i: int):
    """Mount frame of propulsion unit i (1-based).

    Returns (origin, arm_axis, tangent) in the body frame: origin of the
    tilt axis, the unit radial arm direction, and the horizontal tangent
    the thrust line sweeps through as the unit tilts.
    """
    if i not in (1, 2, 3, 4):
        raise ValueError("unit index must be 1..4")
    d = g.delta[i - 1]
    c, s = np.cos(d), np.sin(d)
    origin = np.array([g.L_p * c, g.L_p * s, g.H_p])
    arm_axis = np.array([c, s, 0.0])
    tangent = np.array([-s, c, 0.0])
    return origin, arm_axis, tangent
