"""End-to-end acceptance checks.

Each test covers one headline requirement at its stated tolerance and
prints a single pass/fail line. Closed-loop comparisons reuse one run of
each builtin scenario pair via module-scoped fixtures.
"""

import math
import time

import numpy as np
import pytest

from aquatilt import scenarios
from aquatilt.allocation import (
    MixerSettings, JoystickInput, YawMode, mixer, total_wrench,
    yaw_coupling_analysis)
from aquatilt.designkit import (
    AERIAL_EFFICIENCY_BAND, AQUATIC_EFFICIENCY_BAND, gear_ratio_sweep,
    peak_efficiency, static_test_curves)
from aquatilt.dynamics import PlantParams, SimParams, pack_state, simulate, step
from aquatilt.frames import GeometryParams, VehicleState, vec3
from aquatilt.hydro import BuoyancyModel, vacuum_medium
from aquatilt.propulsion import (
    Gearbox, MotorModel, PropellerCoeffs, PropulsionMode, equivalent_coeffs,
    operating_point)


def check(name, ok):
    print(f"\n[PRIMARY] {name}: {'PASS' if ok else 'FAIL'}")
    assert ok, name


@pytest.fixture(scope="module")
def yaw_pair(tmp_path_factory):
    out = tmp_path_factory.mktemp("yaw_pair")
    start = time.perf_counter()
    _, report = scenarios.run_pair("yaw_torque_vs_tilt", str(out))
    return report, time.perf_counter() - start


@pytest.fixture(scope="module")
def translation_pair(tmp_path_factory):
    out = tmp_path_factory.mktemp("translation_pair")
    start = time.perf_counter()
    _, report = scenarios.run_pair("horizontal_pitch_vs_tilt", str(out))
    return report, time.perf_counter() - start


def test_decoupling_identity():
    start = time.perf_counter()
    prop, gear = PropellerCoeffs(), Gearbox()
    kt, km = equivalent_coeffs(prop, gear, PropulsionMode.AQUATIC)
    g = GeometryParams()
    omega_bar = 700.0
    t_z, m_yaw = yaw_coupling_analysis(
        YawMode.THRUST_VECTORING, omega_bar, 0.0, 0.0, kt, km, g.L_p)
    expected_yaw = 4.0 * kt * g.L_p * omega_bar ** 2
    vectoring_ok = (t_z == 0.0
                    and abs(m_yaw - expected_yaw) <= 1e-9 * expected_yaw)

    delta = 450.0
    t_z2, _ = yaw_coupling_analysis(
        YawMode.CONVENTIONAL_TORQUE, 0.0, delta, 0.0, kt, km, g.L_p)
    expected_tz = 2.0 * kt * delta ** 2
    conventional_ok = abs(t_z2 - expected_tz) <= 1e-9 * expected_tz
    elapsed = time.perf_counter() - start
    check("decoupling identity",
          vectoring_ok and conventional_ok and elapsed < 1.0)


def test_mixer_geometry_consistency():
    start = time.perf_counter()
    g = GeometryParams()
    settings = MixerSettings(zone=-1, gain=200.0, clamp=(-np.pi, np.pi))
    thrust = 2.5
    ok = True
    for stick, axis in (((1.0, 0.0, 0.0), "surge"),
                        ((0.0, 1.0, 0.0), "sway"),
                        ((0.0, 0.0, 1.0), "yaw")):
        beta = mixer(JoystickInput(*stick), settings).beta
        w = total_wrench(np.full(4, thrust), np.zeros(4), beta, g)
        # oracle: independent per-unit summation
        f_ref = np.zeros(3)
        m_ref = np.zeros(3)
        from aquatilt.frames import unit_mount_frame
        for i in range(4):
            origin, _, tangent = unit_mount_frame(g, i + 1)
            n = (np.cos(beta[i]) * tangent
                 - np.sin(beta[i]) * np.array([0.0, 0.0, 1.0]))
            f_ref += thrust * n
            m_ref += np.cross(origin, thrust * n)
        ok &= np.allclose(w.force, f_ref, atol=1e-9)
        ok &= np.allclose(w.moment, m_ref, atol=1e-9)
        if axis == "surge":
            ok &= w.force[0] > 0 and abs(w.force[1]) < 1e-9
            ok &= abs(w.moment[2]) < 1e-9
        elif axis == "sway":
            ok &= w.force[1] > 0 and abs(w.force[0]) < 1e-9
            ok &= abs(w.moment[2]) < 1e-9
        else:
            ok &= abs(w.force[0]) < 1e-9 and abs(w.force[1]) < 1e-9
            ok &= abs(abs(w.moment[2]) - 4 * thrust * g.L_p) < 1e-6
    elapsed = time.perf_counter() - start
    check("mixer/geometry consistency", bool(ok) and elapsed < 1.0)


def test_closed_loop_yaw_comparison(yaw_pair):
    report, elapsed = yaw_pair
    ratio_ok = report.yaw_rate_gain_ratio >= 3.0
    drift_ok = report.z_drift_tilt <= 0.2 * report.z_drift_torque
    print(f"\n  yaw_rate_gain_ratio={report.yaw_rate_gain_ratio:.2f} "
          f"z_drift tilt/torque={report.z_drift_tilt:.3f}"
          f"/{report.z_drift_torque:.3f} runtime={elapsed:.1f}s")
    check("closed-loop yaw comparison",
          ratio_ok and drift_ok and elapsed < 30.0)


def test_phase_lag_ordering(translation_pair):
    report, elapsed = translation_pair
    lag_pitch = report.phase_lag_deg["pitch_translation"]
    lag_tilt = report.phase_lag_deg["tilt_translation"]

    # fit oracle: synthetic first-order lag must be recovered within 2 deg
    tau, f, dt = 0.3, 0.2, 0.001
    t = np.arange(0.0, 40.0, dt)
    cmd = np.sin(2 * np.pi * f * t)
    resp = np.zeros_like(cmd)
    for k in range(1, len(t)):
        resp[k] = resp[k - 1] + dt * (cmd[k - 1] - resp[k - 1]) / tau
    window = t > 20
    measured = scenarios.phase_lag_deg(t[window], cmd[window], resp[window], f)
    oracle_ok = abs(measured
                    - math.degrees(math.atan(2 * math.pi * f * tau))) <= 2.0

    print(f"\n  phase lag tilt={lag_tilt:.1f} deg pitch={lag_pitch:.1f} deg "
          f"runtime={elapsed:.1f}s")
    check("phase-lag ordering",
          lag_tilt <= 0.6 * lag_pitch and oracle_ok and elapsed < 30.0)


def test_propulsion_properties():
    prop, gear, motor = PropellerCoeffs(), Gearbox(), MotorModel()
    eta_ok = True
    for mode, sign in ((PropulsionMode.AERIAL, 1.0),
                       (PropulsionMode.AQUATIC, -1.0)):
        for duty in np.linspace(motor.duty_min_useful, 1.0, 60):
            *_, eta, _ = operating_point(sign * duty, prop, gear, motor)
            eta_ok &= eta < 1.0

    # delivered vs motor shaft power through the aquatic chain
    _, omega, _, prop_torque, _, amp, _, _ = operating_point(
        -0.7, prop, gear, motor)
    motor_torque = (amp - motor.idle_current) * motor.k_t
    loss_ratio = ((prop_torque / gear.r_aq) * omega) / (motor_torque * omega)
    loss_ok = abs(loss_ratio - 0.787) < 1e-9

    ae = peak_efficiency(static_test_curves(PropulsionMode.AERIAL))
    aq = peak_efficiency(static_test_curves(PropulsionMode.AQUATIC))
    band_ok = (AERIAL_EFFICIENCY_BAND[0] <= ae <= AERIAL_EFFICIENCY_BAND[1]
               and AQUATIC_EFFICIENCY_BAND[0] <= aq
               <= AQUATIC_EFFICIENCY_BAND[1])
    print(f"\n  peak eta aerial={ae:.3f} aquatic={aq:.3f} "
          f"aquatic chain ratio={loss_ratio:.3f}")
    check("propulsion properties", eta_ok and loss_ok and band_ok)


def test_dynamics_suite(tmp_path):
    # determinism: byte-identical telemetry on rerun
    cfg = scenarios.BUILTIN_SCENARIOS["hover_air"]().with_values(
        "scenario", duration=2.0)
    r1 = scenarios.run_scenario(cfg, str(tmp_path / "a"))
    r2 = scenarios.run_scenario(cfg, str(tmp_path / "b"))
    determinism_ok = (open(r1.telemetry_path, "rb").read()
                      == open(r2.telemetry_path, "rb").read())

    # convergence order on a coasting tumble in the vacuum preset
    plant = PlantParams(air=vacuum_medium(), water=vacuum_medium(),
                        buoyancy=BuoyancyModel(displaced_volume=1e-12),
                        geometry=GeometryParams(
                            inertia=np.diag([0.020, 0.024, 0.035])))
    initial = VehicleState(position=vec3(0, 0, -20.0),
                           velocity=vec3(1.0, -0.5, 0.3),
                           body_rates=vec3(2.0, -1.5, 1.0))
    tilt = np.full(4, np.pi / 2)
    zero4 = np.zeros(4)

    def endpoint(dt):
        params = SimParams(dt=dt, duration=1.0)
        x = pack_state(initial)
        for _ in range(int(round(1.0 / dt))):
            x = step(x, zero4, tilt, plant, params)
        return x

    ref = endpoint(0.000625)
    errs = [np.linalg.norm(endpoint(dt)[:13] - ref[:13])
            for dt in (0.01, 0.005)]
    order = float(np.log2(errs[0] / errs[1]))
    order_ok = order >= 3.8

    # drag dissipativity on random states
    from aquatilt.hydro import drag_wrench, water_medium
    rng = np.random.default_rng(0)
    dissipative_ok = True
    medium = water_medium()
    for _ in range(1000):
        s = VehicleState(velocity=rng.normal(scale=3, size=3),
                         body_rates=rng.normal(scale=3, size=3))
        w = drag_wrench(s, medium)
        dissipative_ok &= (w.force @ s.velocity
                           + w.moment @ s.body_rates) <= 0.0

    # neutral buoyancy: resting depth holds to < 1 mm over 10 s
    neutral = PlantParams()
    records = simulate(neutral, SimParams(dt=0.002, duration=10.0),
                       VehicleState(position=vec3(0, 0, 5.0)),
                       lambda t, s: (zero4, s.tilt))
    drift = max(abs(r["state"].position[2] - 5.0) for r in records)
    drift_ok = drift < 1e-3

    print(f"\n  rk4 order={order:.2f} neutral drift={drift:.2e} m")
    check("dynamics suite",
          determinism_ok and order_ok and dissipative_ok and drift_ok)


def test_gear_ratio_sweep_property():
    prop, gear, motor = PropellerCoeffs(), Gearbox(), MotorModel()
    water = gear_ratio_sweep(motor, prop.K_T_aq, prop.K_M_aq, gear.loss_aq)
    ratios = [p.ratio for p in water.points]
    direct = next(p for p in water.points if p.ratio == 1.0)
    water_ok = (min(ratios) < water.r_best < max(ratios)
                and water.best_thrust > 2.0 * direct.thrust)
    air = gear_ratio_sweep(motor, prop.K_T_ae, prop.K_M_ae, gear.loss_ae)
    air_ok = air.r_best == 1.0
    print(f"\n  water r_best={water.r_best:.2f} "
          f"thrust gain={water.best_thrust / direct.thrust:.2f}x "
          f"air r_best={air.r_best:.2f}")
    check("gear-ratio sweep property", water_ok and air_ok)
