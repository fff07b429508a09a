"""Static propulsion analysis and gear-ratio selection tools.

Covers the workbench side of the project: actuator-disk thrust
estimates, voltage/power-constrained gear-ratio sweeps and static duty
sweeps of the electrical model, plus the published comparison constants
used as calibration bands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .propulsion import (Gearbox, InfeasibleOperatingPoint, MotorModel,
                         PropellerCoeffs, PropulsionMode, operating_point)


@dataclass(frozen=True)
class ReferenceTable:
    """Published comparison constants for aerial-aquatic propulsion units.

    Reference values only; the calibrated model is checked against bands
    around the proposed-unit numbers, never against competitors.
    """

    aerial_efficiency: float = 0.633
    aquatic_efficiency: float = 0.525
    max_aquatic_specific_thrust: float = 0.265   # N/W
    max_aquatic_thrust: float = 32.0             # N
    unit_mass: float = 0.122                     # kg
    reference_gear_ratio: float = 12.33          # external blade-analysis result
    comparators: tuple = (
        ("AquaMAV", 0.500, 0.460, 0.172, 0.339),
        ("MAAQuad", 0.123, None, 0.400, 0.249),
        ("Loon-copter", None, None, 0.180, 0.092),
        ("Nezha-mini", None, None, 0.270, 0.180),
        ("TT100", None, 0.728, 0.302, 0.075),
    )


AERIAL_EFFICIENCY_BAND = (0.55, 0.70)
AQUATIC_EFFICIENCY_BAND = (0.45, 0.60)


def momentum_thrust(diameter: float, omega_prop: float, density: float,
                    thrust_coefficient: float = 0.11,
                    figure_of_merit: float = 0.6):
    """Actuator-disk thrust, torque and ideal power for a propeller.

    Thrust follows T = C_T * rho * n^2 * D^4 at fixed pitch ratio; torque
    is the induced power (ideal power over figure of merit) divided by
    shaft speed.
    """
    if diameter <= 0:
        raise ValueError("diameter must be positive")
    if omega_prop < 0:
        raise ValueError("omega_prop must be non-negative")
    if not 0 < figure_of_merit <= 1:
        raise ValueError("figure of merit must lie in (0, 1]")
    if omega_prop == 0:
        return 0.0, 0.0, 0.0
    n = omega_prop / (2 * math.pi)
    thrust = thrust_coefficient * density * n ** 2 * diameter ** 4
    disk_area = math.pi * (diameter / 2) ** 2
    p_ideal = thrust ** 1.5 / math.sqrt(2 * density * disk_area)
    torque = (p_ideal / figure_of_merit) / omega_prop
    return thrust, torque, p_ideal


@dataclass(frozen=True)
class SweepPoint:
    ratio: float
    feasible: bool
    omega: float = 0.0          # motor-side rad/s
    thrust: float = 0.0
    voltage: float = 0.0
    current: float = 0.0
    efficiency: float = 0.0


@dataclass(frozen=True)
class SweepResult:
    points: tuple
    r_best: float
    best_thrust: float


def _max_feasible_speed(motor: MotorModel, k_m_prop: float, ratio: float,
                        loss: float, power_budget: float) -> float:
    """Largest steady motor speed within voltage, power and envelope limits.

    Steady state: motor torque balances the referred propeller load
    tau(w) = K_M * (w/r)^2 / (r * (1 - loss)).
    """
    a = k_m_prop / (ratio ** 3 * (1.0 - loss) * motor.k_t)  # I = a w^2 + I0

    def current(w):
        return a * w * w + motor.idle_current

    def voltage(w):
        return current(w) * motor.resistance + w / motor.kv

    def power(w):
        return voltage(w) * current(w)

    w_hi = motor.omega_max
    if voltage(w_hi) <= motor.v_max and power(w_hi) <= power_budget:
        return w_hi
    # voltage and power are strictly increasing in w; bisect each limit
    w_lo = 0.0
    if voltage(0.0) > motor.v_max or power(0.0) > power_budget:
        return -1.0
    for _ in range(80):
        w_mid = 0.5 * (w_lo + w_hi)
        if voltage(w_mid) <= motor.v_max and power(w_mid) <= power_budget:
            w_lo = w_mid
        else:
            w_hi = w_mid
    return w_lo


def gear_ratio_sweep(motor: MotorModel, k_t_prop: float, k_m_prop: float,
                     loss: float, ratios=None,
                     power_budget: float = 400.0) -> SweepResult:
    """Max-thrust steady operating point over a grid of gear ratios.

    k_t_prop / k_m_prop are propeller-shaft coefficients for the medium of
    interest; loss is the gearbox loss of the engaged chain. r_best is the
    argmax of feasible thrust; refining the grid can only improve it.
    """
    if ratios is None:
        ratios = np.linspace(1.0, 30.0, 117)
    ratios = np.asarray(ratios, dtype=float)
    if ratios.size == 0:
        raise ValueError("ratio grid must be nonempty")
    points = []
    for r in ratios:
        w = _max_feasible_speed(motor, k_m_prop, r, loss, power_budget)
        if w <= 0.0:
            points.append(SweepPoint(ratio=r, feasible=False))
            continue
        w_prop = w / r
        thrust = k_t_prop * w_prop ** 2
        prop_torque = k_m_prop * w_prop ** 2
        torque_ref = prop_torque / r
        current = torque_ref / ((1.0 - loss) * motor.k_t) + motor.idle_current
        voltage = current * motor.resistance + w / motor.kv
        eta = torque_ref * w / (voltage * current)
        points.append(SweepPoint(ratio=r, feasible=True, omega=w,
                                 thrust=thrust, voltage=voltage,
                                 current=current, efficiency=eta))
    feasible = [p for p in points if p.feasible]
    if not feasible:
        raise InfeasibleOperatingPoint("no feasible ratio in the sweep range")
    best = max(feasible, key=lambda p: p.thrust)
    return SweepResult(points=tuple(points), r_best=best.ratio,
                       best_thrust=best.thrust)


@dataclass(frozen=True)
class StaticCurvePoint:
    duty: float
    feasible: bool
    omega: float = 0.0
    thrust: float = 0.0
    prop_torque: float = 0.0
    elec_power: float = 0.0
    efficiency: float = 0.0
    specific_thrust: float = 0.0


def static_test_curves(mode: PropulsionMode,
                       prop: PropellerCoeffs | None = None,
                       gearbox: Gearbox | None = None,
                       motor: MotorModel | None = None,
                       n_points: int = 36) -> list[StaticCurvePoint]:
    """Duty sweep of one propulsion unit from the useful floor to 100%."""
    prop = prop or PropellerCoeffs()
    gearbox = gearbox or Gearbox()
    motor = motor or MotorModel()
    duties = np.linspace(motor.duty_min_useful, 1.0, n_points)
    sign = 1.0 if mode is PropulsionMode.AERIAL else -1.0
    curve = []
    for duty in duties:
        try:
            _, omega, thrust, prop_torque, volt, amp, eta, spec = \
                operating_point(sign * duty, prop, gearbox, motor)
        except InfeasibleOperatingPoint:
            curve.append(StaticCurvePoint(duty=duty, feasible=False))
            continue
        curve.append(StaticCurvePoint(
            duty=duty, feasible=True, omega=omega, thrust=thrust,
            prop_torque=prop_torque, elec_power=volt * amp,
            efficiency=eta, specific_thrust=spec))
    return curve


def peak_efficiency(curve) -> float:
    return max((p.efficiency for p in curve if p.feasible), default=0.0)
