"""Motor + dual-speed gearbox + propeller model.

The propulsion unit runs a single propeller through a direction-dependent
gearbox: forward motor rotation engages the low (aerial) ratio, reverse
engages the high (aquatic) ratio. Thrust and torque follow a quadratic
speed law with per-medium coefficients referenced to the propeller shaft;
the gearbox folds in as a 1/r^2 equivalent coefficient on the motor-side
speed.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass


class PropulsionMode(enum.Enum):
    AERIAL = "aerial"
    AQUATIC = "aquatic"


class InfeasibleOperatingPoint(Exception):
    """Electrical solve exceeds the available bus voltage."""


@dataclass(frozen=True)
class PropellerCoeffs:
    """Quadratic thrust/torque coefficients at the propeller shaft.

    Units N·s²/rad² and N·m·s²/rad². Defaults are calibrated against the
    static-test reference bands, not measured values.
    """

    K_T_ae: float = 5.86e-6
    K_T_aq: float = 1.90e-3
    K_M_ae: float = 4.00e-8
    K_M_aq: float = 1.90e-5

    def __post_init__(self):
        for name in ("K_T_ae", "K_T_aq", "K_M_ae", "K_M_aq"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        # thrust coefficient should dominate torque by a wide margin
        for kt, km, tag in ((self.K_T_ae, self.K_M_ae, "aerial"),
                            (self.K_T_aq, self.K_M_aq, "aquatic")):
            if kt / km < 10.0:
                warnings.warn(f"{tag} K_T/K_M = {kt / km:.1f} < 10; "
                              "torque coefficient unusually large")

    def thrust_coeff(self, mode: PropulsionMode) -> float:
        return self.K_T_ae if mode is PropulsionMode.AERIAL else self.K_T_aq

    def torque_coeff(self, mode: PropulsionMode) -> float:
        return self.K_M_ae if mode is PropulsionMode.AERIAL else self.K_M_aq


@dataclass(frozen=True)
class Gearbox:
    """Dual-ratio transmission with per-mode fractional power loss."""

    r_ae: float = 1.0
    r_aq: float = 12.33
    loss_ae: float = 0.051
    loss_aq: float = 0.213

    def __post_init__(self):
        if self.r_ae < 1.0:
            raise ValueError("aerial ratio must be >= 1")
        if self.r_aq <= self.r_ae:
            raise ValueError("aquatic ratio must exceed aerial ratio")
        for loss in (self.loss_ae, self.loss_aq):
            if not 0.0 <= loss < 1.0:
                raise ValueError("losses must lie in [0, 1)")

    def ratio(self, mode: PropulsionMode) -> float:
        return self.r_ae if mode is PropulsionMode.AERIAL else self.r_aq

    def loss(self, mode: PropulsionMode) -> float:
        return self.loss_ae if mode is PropulsionMode.AERIAL else self.loss_aq


@dataclass(frozen=True)
class MotorModel:
    """First-order DC motor electrical model.

    kv is in rad/s per volt; torque constant is its reciprocal. Defaults
    are calibrated so the peak combined efficiencies land inside the
    reference comparison bands (see designkit.ReferenceTable).
    """

    kv: float = 140.0          # rad·s⁻¹·V⁻¹
    resistance: float = 0.25   # ohm
    idle_current: float = 1.7  # A
    v_max: float = 16.8        # V (4S pack)
    omega_max: float = 1600.0  # rad/s, motor side, either direction
    duty_min_useful: float = 0.30

    def __post_init__(self):
        for name in ("kv", "resistance", "idle_current", "v_max", "omega_max"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not 0.0 <= self.duty_min_useful <= 1.0:
            raise ValueError("duty_min_useful must lie in [0, 1]")

    @property
    def k_t(self) -> float:
        return 1.0 / self.kv


def equivalent_coeffs(p: PropellerCoeffs, g: Gearbox,
                      mode: PropulsionMode) -> tuple[float, float]:
    """Motor-speed-referred thrust/torque coefficients K̃ = K/r² for a mode."""
    r2 = g.ratio(mode) ** 2
    return p.thrust_coeff(mode) / r2, p.torque_coeff(mode) / r2


def unit_output(omega: float, p: PropellerCoeffs, g: Gearbox,
                mode: PropulsionMode,
                omega_max: float | None = None) -> tuple[float, float]:
    """Thrust (N) and propeller torque (N·m) at motor speed omega (rad/s).

    omega must be non-negative; the rotation direction only selects the
    mode. Speeds above the envelope saturate with a warning.
    """
    if omega < 0:
        raise ValueError("omega must be non-negative; mode carries the sign")
    if omega_max is not None and omega > omega_max:
        warnings.warn(f"motor speed {omega:.0f} rad/s above envelope "
                      f"{omega_max:.0f}; saturating")
        omega = omega_max
    kt, km = equivalent_coeffs(p, g, mode)
    return kt * omega ** 2, km * omega ** 2


def motor_electrical(omega: float, shaft_torque: float, thrust: float,
                     m: MotorModel, g: Gearbox, mode: PropulsionMode):
    """Electrical operating point for a motor-side speed and output torque.

    shaft_torque is the delivered (post-gearbox-loss) output torque
    referred to the motor side, so output shaft power is shaft_torque *
    omega. Returns (V, I, eta_M, specific_thrust): efficiency is output
    shaft power over electrical power, specific thrust is thrust per
    electrical watt.
    """
    if omega < 0 or shaft_torque < 0:
        raise ValueError("omega and shaft_torque must be non-negative")
    motor_torque = shaft_torque / (1.0 - g.loss(mode))
    current = motor_torque / m.k_t + m.idle_current
    voltage = current * m.resistance + omega / m.kv
    if voltage > m.v_max:
        raise InfeasibleOperatingPoint(
            f"required {voltage:.2f} V exceeds bus limit {m.v_max:.2f} V")
    elec_power = voltage * current
    shaft_power = shaft_torque * omega
    eta = shaft_power / elec_power if elec_power > 0 else 0.0
    specific_thrust = thrust / elec_power if elec_power > 0 else 0.0
    return voltage, current, eta, specific_thrust


def command_to_mode(signed_duty: float, m: MotorModel) -> tuple[PropulsionMode, float]:
    """Map a signed duty command to (mode, motor speed magnitude).

    Positive duty drives forward rotation (aerial gear chain), negative
    drives reverse (aquatic chain). |duty| maps affinely onto
    [0, omega_max]; zero duty is aerial by convention.
    """
    duty = max(-1.0, min(1.0, signed_duty))
    mode = PropulsionMode.AQUATIC if duty < 0 else PropulsionMode.AERIAL
    return mode, abs(duty) * m.omega_max


def operating_point(signed_duty: float, p: PropellerCoeffs, g: Gearbox,
                    m: MotorModel):
    """Full static solve for a signed duty command.

    Returns (mode, omega, thrust, prop_torque, V, I, eta_M, specific_thrust),
    with prop_torque at the propeller shaft.
    """
    mode, omega = command_to_mode(signed_duty, m)
    thrust, prop_torque = unit_output(omega, p, g, mode)
    # output power = prop_torque * omega_prop = (prop_torque / r) * omega_motor
    torque_motor_ref = prop_torque / g.ratio(mode)
    volt, amp, eta, spec = motor_electrical(
        omega, torque_motor_ref, thrust, m, g, mode)
    return mode, omega, thrust, prop_torque, volt, amp, eta, spec
