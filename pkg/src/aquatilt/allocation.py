"""Tilt allocation mixer and per-unit vectored wrench models.

Each propulsion unit rotates about its radial mount arm: the thrust line
sweeps a vertical plane spanned by the horizontal tangent and body z.
beta = pi/2 points the thrust up (hover), -pi/2 down (dive), 0 or pi
purely tangential, which yields a yaw moment with zero net vertical
thrust.

Two wrench models ship: the arm-axis model (tangential horizontal
components, used by the simulator) and a radial-form closed expression
kept for cross-checking its printed formulas.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .frames import BodyWrench, GeometryParams, unit_mount_frame

# Per-unit sign rows mapping (surge, sway, yaw) sticks to tilt drive.
MIXER_SIGNS = np.array([
    [-1.0, 1.0, -1.0],
    [1.0, -1.0, -1.0],
    [1.0, 1.0, -1.0],
    [-1.0, -1.0, -1.0],
])

DEFAULT_CLAMP = (np.pi / 6, 5 * np.pi / 6)


class MixerVariant(enum.Enum):
    # HALF_RANGE uses the printed a*pi/2 coefficient and spans half a zone;
    # FULL_RANGE uses a*pi and spans the full (0, pi) / (-pi, 0) zone.
    HALF_RANGE = "half_range"
    FULL_RANGE = "full_range"


@dataclass(frozen=True)
class TiltConfig:
    beta: np.ndarray = field(default_factory=lambda: np.full(4, np.pi / 2))

    def __post_init__(self):
        beta = np.asarray(self.beta, dtype=float)
        if beta.shape != (4,):
            raise ValueError("beta must have 4 entries")
        if np.any(np.abs(beta) > np.pi + 1e-12):
            raise ValueError("tilt angles must lie in [-pi, pi]")
        object.__setattr__(self, "beta", beta)


@dataclass(frozen=True)
class JoystickInput:
    j_surge: float = 0.0
    j_sway: float = 0.0
    j_yaw: float = 0.0

    def __post_init__(self):
        for name in ("j_surge", "j_sway", "j_yaw"):
            v = getattr(self, name)
            object.__setattr__(self, name, max(-1.0, min(1.0, v)))

    def as_array(self) -> np.ndarray:
        return np.array([self.j_surge, self.j_sway, self.j_yaw])


@dataclass(frozen=True)
class MixerSettings:
    zone: int = -1                      # -1 selects the (0, pi) zone
    variant: MixerVariant = MixerVariant.FULL_RANGE
    gain: float = 4.0                   # sigmoid input gain
    clamp: tuple = DEFAULT_CLAMP

    def __post_init__(self):
        if self.zone not in (1, -1):
            raise ValueError("zone must be +1 or -1")
        if self.gain <= 0:
            raise ValueError("gain must be positive")
        lo, hi = self.clamp
        if not lo < hi:
            raise ValueError("clamp interval must be non-empty")


def sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def mixer(j: JoystickInput, s: MixerSettings) -> TiltConfig:
    """Map surge/sway/yaw sticks to the four tilt angles.

    beta_i = c * (S(k * row_i . j) - 1) with c = a*pi (full range) or
    a*pi/2 (half range), then clamped. Neutral sticks give beta = c/2
    below zero shifted into the zone midpoint (pi/2 for full range,
    zone -1).
    """
    coeff = s.zone * np.pi
    if s.variant is MixerVariant.HALF_RANGE:
        coeff *= 0.5
    drive = sigmoid(s.gain * (MIXER_SIGNS @ j.as_array()))
    beta = coeff * (drive - 1.0)
    return clamp_tilt(TiltConfig(beta), s.clamp)


def clamp_tilt(t: TiltConfig, interval: tuple) -> TiltConfig:
    lo, hi = interval
    if not lo < hi:
        raise ValueError("clamp interval must be non-empty")
    return TiltConfig(np.clip(t.beta, lo, hi))


def wrench_arm_axis(T: float, M: float, beta: float, frame, b: int) -> BodyWrench:
    """Wrench of one unit from rotation about its mount arm (simulator model).

    frame is (origin, arm_axis, tangent) from unit_mount_frame. Thrust
    direction n = cos(beta) * tangent - sin(beta) * z; the propeller
    reaction moment b * M acts along n.
    """
    origin, _, tangent = frame
    n = np.cos(beta) * tangent - np.sin(beta) * np.array([0.0, 0.0, 1.0])
    force = T * n
    moment = np.cross(origin, force) + b * M * n
    return BodyWrench(force, moment)


def wrench_radial_form(T: float, M: float, beta: float, delta: float,
                       b: int, L_p: float, H_p: float) -> BodyWrench:
    """Closed-form unit wrench with radial horizontal components.

    Kept verbatim for cross-checking: its horizontal thrust points along
    the arm rather than the tangent, so it disagrees with the arm-axis
    model (and with the tangential yaw mechanism) except where the terms
    coincide, e.g. the T*L_p*cos(beta) yaw term.
    """
    cb, sb = np.cos(beta), np.sin(beta)
    cd, sd = np.cos(delta), np.sin(delta)
    force = np.array([-T * cb * cd, -T * cb * sd, T * sb])
    moment = np.array([
        b * M * cd * cb + T * L_p * cd * sb - T * H_p * sd * cb,
        b * M * sd * cb + T * L_p * sd * sb + T * H_p * cd * cb,
        -b * M * sb + T * L_p * cb,
    ])
    return BodyWrench(force, moment)


def total_wrench(thrusts, torques, tilts, g: GeometryParams) -> BodyWrench:
    """Sum of the four arm-axis unit wrenches."""
    thrusts = np.asarray(thrusts, dtype=float)
    torques = np.asarray(torques, dtype=float)
    tilts = np.asarray(tilts, dtype=float)
    if not thrusts.shape == torques.shape == tilts.shape == (4,):
        raise ValueError("thrusts, torques, tilts must each have 4 entries")
    force = np.zeros(3)
    moment = np.zeros(3)
    for i in range(4):
        w = wrench_arm_axis(thrusts[i], torques[i], tilts[i],
                            unit_mount_frame(g, i + 1), g.b[i])
        force += w.force
        moment += w.moment
    return BodyWrench(force, moment)


class YawMode(enum.Enum):
    CONVENTIONAL_TORQUE = "torque"
    THRUST_VECTORING = "vectoring"


def yaw_coupling_analysis(mode: YawMode, omega_bar: float, delta_omega: float,
                          beta: float, k_thrust: float, k_torque: float,
                          L_p: float) -> tuple[float, float]:
    """Vertical thrust and yaw moment for the two yaw strategies.

    k_thrust / k_torque are motor-speed-referred equivalent coefficients.
    Conventional torque yaw uses the differential speed pattern
    (w+dw, w, w+dw, w); thrust vectoring uses uniform speed with all
    units at tilt beta, where the per-unit tilt directions absorb the
    alternating yaw signs so contributions add.
    """
    if mode is YawMode.CONVENTIONAL_TORQUE:
        sq = np.array([(omega_bar + delta_omega) ** 2, omega_bar ** 2,
                       (omega_bar + delta_omega) ** 2, omega_bar ** 2])
        t_z = k_thrust * sq.sum()
        m_yaw = k_torque * (sq[0] - sq[1] + sq[2] - sq[3])
        return t_z, m_yaw
    total_sq = 4.0 * omega_bar ** 2
    t_z = k_thrust * np.sin(beta) * total_sq
    m_yaw = (k_torque * np.sin(beta) + k_thrust * L_p * np.cos(beta)) * total_sq
    return t_z, m_yaw
