"""Cascade PID control with the six-channel command interface.

Channels mirror a thrust-vectoring transmitter layout: ROLL/PITCH/YAW1
drive the usual angle -> rate cascades and motor duty differentials;
SURGE/SWAY/YAW2 bypass the attitude loops (setpoints held level) and map
straight through the tilt mixer. THROTTLE commands vertical speed, with
altitude hold when centred.

Gain sets are scheduled per medium; the water set is deliberately soft
to cope with added mass and drag.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import allocation
from .frames import quat_to_euler, quat_to_matrix

# duty differential sign patterns per unit (X layout, b = (+,+,-,-))
ROLL_PATTERN = np.array([-1.0, 1.0, 1.0, -1.0])
PITCH_PATTERN = np.array([1.0, -1.0, 1.0, -1.0])
YAW_PATTERN = np.array([-1.0, -1.0, 1.0, 1.0])


@dataclass(frozen=True)
class ChannelCommands:
    roll: float = 0.0
    pitch: float = 0.0
    yaw1: float = 0.0
    throttle: float = 0.0
    surge: float = 0.0
    sway: float = 0.0
    yaw2: float = 0.0

    def __post_init__(self):
        for name in ("roll", "pitch", "yaw1", "throttle", "surge", "sway", "yaw2"):
            v = getattr(self, name)
            object.__setattr__(self, name, max(-1.0, min(1.0, v)))

    def vectoring_active(self) -> bool:
        return any(abs(v) > 1e-9 for v in (self.surge, self.sway, self.yaw2))


CHANNEL_ORDER = ("roll", "pitch", "yaw1", "throttle", "surge", "sway", "yaw2")


@dataclass(frozen=True)
class ChannelOptions:
    inverted: tuple = (False,) * 7
    deadband: float = 0.02


def channel_map(raw, options: ChannelOptions | None = None) -> ChannelCommands:
    """Raw transmitter frame (7 values in [-1, 1]) to channel commands."""
    options = options or ChannelOptions()
    raw = np.clip(np.asarray(raw, dtype=float), -1.0, 1.0)
    if raw.shape != (7,):
        raise ValueError("expected 7 channel values")
    out = []
    for value, inv in zip(raw, options.inverted):
        if abs(value) < options.deadband:
            value = 0.0
        out.append(-value if inv else value)
    return ChannelCommands(*out)


@dataclass(frozen=True)
class PidGains:
    p: float
    i: float = 0.0
    d: float = 0.0
    limit: float = 1.0       # symmetric output limit
    i_limit: float = 0.2     # integrator contribution limit

    def __post_init__(self):
        if self.p < 0 or self.i < 0 or self.d < 0:
            raise ValueError("gains must be non-negative")
        if self.limit <= 0 or self.i_limit <= 0:
            raise ValueError("limits must be positive")


@dataclass(frozen=True)
class CascadeGains:
    angle_p: float = 6.0                         # angle error -> rate setpoint
    rate: PidGains = field(default_factory=lambda: PidGains(0.05, 0.02, 0.002, 0.4))
    yaw_rate: PidGains = field(default_factory=lambda: PidGains(0.1, 0.05, 0.0, 0.3))
    vz: PidGains = field(default_factory=lambda: PidGains(0.25, 0.1, 0.0, 0.5))
    alt_p: float = 1.0                           # z error -> vz setpoint
    max_tilt_sp: float = np.radians(35.0)        # attitude stick scale
    max_rate_sp: float = 4.0                     # rad/s
    max_yaw_rate_sp: float = 2.0                 # rad/s
    max_vz_sp: float = 1.0                       # m/s
    hover_duty_ff: float = 0.0                   # collective feedforward


def air_gains() -> CascadeGains:
    # feedforward near the aerial hover duty so altitude hold converges fast
    return CascadeGains(hover_duty_ff=0.52)


def water_gains() -> CascadeGains:
    return CascadeGains(
        angle_p=2.0,
        rate=PidGains(0.15, 0.05, 0.01, 0.4),
        yaw_rate=PidGains(0.3, 0.1, 0.0, 0.3),
        vz=PidGains(0.6, 0.25, 0.0, 0.6),
        alt_p=0.8,
        max_rate_sp=2.0,
        max_vz_sp=0.5,
        hover_duty_ff=0.0,
    )


class _Pid:
    """Scalar PID with clamped integrator and derivative on error."""

    def __init__(self, gains: PidGains):
        self.g = gains
        self.integral = 0.0
        self.prev_error = None

    def reset(self):
        self.integral = 0.0
        self.prev_error = None

    def step(self, error: float, dt: float) -> float:
        g = self.g
        self.integral += g.i * error * dt
        self.integral = float(np.clip(self.integral, -g.i_limit, g.i_limit))
        d = 0.0
        if g.d > 0 and self.prev_error is not None and dt > 0:
            d = g.d * (error - self.prev_error) / dt
        self.prev_error = error
        out = g.p * error + self.integral + d
        return float(np.clip(out, -g.limit, g.limit))


class CascadeController:
    """Owns the integrator state; advance from exactly one thread."""

    def __init__(self, gains_air: CascadeGains | None = None,
                 gains_water: CascadeGains | None = None,
                 mixer_settings: allocation.MixerSettings | None = None,
                 collective_trim: float | None = None):
        self.gains_air = gains_air or air_gains()
        self.gains_water = gains_water or water_gains()
        self.mixer = mixer_settings or allocation.MixerSettings()
        # scripted collective duty replacing the vertical loop (used by
        # experiments that coordinate throttle by hand)
        self.collective_trim = collective_trim
        self._pids_for = {}
        self._alt_ref = None
        self._last_medium = None

    def _pids(self, key: str, gains: CascadeGains):
        if key not in self._pids_for:
            self._pids_for[key] = {
                "roll": _Pid(gains.rate),
                "pitch": _Pid(gains.rate),
                "yaw": _Pid(gains.yaw_rate),
                "vz": _Pid(gains.vz),
            }
        return self._pids_for[key]

    def reset(self):
        self._pids_for.clear()
        self._alt_ref = None
        self._last_medium = None

    def control_step(self, state, commands: ChannelCommands, dt: float,
                     medium_fraction: float):
        """One controller update.

        Returns (signed duties[4], tilt setpoints[4]). Duty sign encodes
        the propulsion mode: negative (reverse / aquatic gear) whenever
        the vehicle is predominantly submerged.
        """
        underwater = medium_fraction > 0.5
        key = "water" if underwater else "air"
        gains = self.gains_water if underwater else self.gains_air
        pids = self._pids(key, gains)
        if self._last_medium not in (None, key):
            self._alt_ref = None  # re-capture altitude after a transition
        self._last_medium = key

        # --- tilt allocation ----------------------------------------------
        stick = allocation.JoystickInput(commands.surge, commands.sway,
                                         commands.yaw2)
        tilt_sp = allocation.mixer(stick, self.mixer).beta

        # --- attitude cascades --------------------------------------------
        roll, pitch, _ = quat_to_euler(state.attitude)
        if commands.vectoring_active():
            roll_sp, pitch_sp = 0.0, 0.0  # hold level while vectoring
        else:
            roll_sp = commands.roll * gains.max_tilt_sp
            pitch_sp = commands.pitch * gains.max_tilt_sp
        rate_sp_x = np.clip(gains.angle_p * (roll_sp - roll),
                            -gains.max_rate_sp, gains.max_rate_sp)
        rate_sp_y = np.clip(gains.angle_p * (pitch_sp - pitch),
                            -gains.max_rate_sp, gains.max_rate_sp)
        d_roll = pids["roll"].step(rate_sp_x - state.body_rates[0], dt)
        d_pitch = pids["pitch"].step(rate_sp_y - state.body_rates[1], dt)

        yaw_rate_sp = commands.yaw1 * gains.max_yaw_rate_sp
        d_yaw = pids["yaw"].step(yaw_rate_sp - state.body_rates[2], dt)

        # --- vertical loop -------------------------------------------------
        if self.collective_trim is not None:
            duty = self.collective_trim + (
                ROLL_PATTERN * d_roll + PITCH_PATTERN * d_pitch
                + YAW_PATTERN * d_yaw)
            duty = np.clip(duty, 0.0, 1.0)
            return (-duty if underwater else duty), tilt_sp
        z = state.position[2]
        if abs(commands.throttle) > 1e-9:
            vz_sp = -commands.throttle * gains.max_vz_sp  # +throttle climbs
            self._alt_ref = None
        else:
            if self._alt_ref is None:
                self._alt_ref = z
            vz_sp = float(np.clip(gains.alt_p * (self._alt_ref - z),
                                  -gains.max_vz_sp, gains.max_vz_sp))
        vz_world = float((quat_to_matrix(state.attitude) @ state.velocity)[2])
        # positive collective raises thrust; climbing means vz_world < vz_sp
        collective = gains.hover_duty_ff + pids["vz"].step(vz_world - vz_sp, dt)

        duty = collective + (ROLL_PATTERN * d_roll + PITCH_PATTERN * d_pitch
                             + YAW_PATTERN * d_yaw)
        duty = np.clip(duty, 0.0, 1.0)
        if underwater:
            duty = -duty  # reverse rotation selects the aquatic gear chain
        return duty, tilt_sp
