"""Builtin scenarios, telemetry output and experiment metrics.

A scenario run produces a run directory containing ``config.txt`` (the
resolved configuration), ``telemetry.csv`` (fixed schema, 9 significant
digits) and ``metrics.txt`` (key-value sidecar). Paired scenarios
(yaw-by-torque vs yaw-by-tilt, pitch vs tilt translation) add a combined
``report.txt`` with the comparison metrics.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import config as cfgmod
from . import dynamics, hydro
from .config import ScenarioConfig, parse_config, sample_commands, serialize_config

TELEMETRY_COLUMNS = (
    ["t", "px", "py", "pz", "qw", "qx", "qy", "qz",
     "vx", "vy", "vz", "wx", "wy", "wz"]
    + [f"beta{i}" for i in range(1, 5)]
    + [f"omega{i}" for i in range(1, 5)]
    + [f"duty{i}" for i in range(1, 5)]
    + [f"cmd_{ch}" for ch in cfgmod.CHANNELS]
    + ["medium_fraction", "fx", "fy", "fz", "mx", "my", "mz"]
)

FLOAT_FORMAT = "%.9g"


@dataclass(frozen=True)
class RunMetrics:
    """Quantities extracted from a single telemetry file."""

    name: str
    role: str = ""
    max_yaw_rate: float = 0.0
    z_drift: float = 0.0
    peak_speed: float = 0.0
    phase_channel: str = ""
    phase_lag_deg: float | None = None

    def as_lines(self):
        lines = [f"name = {self.name}", f"role = {self.role}",
                 f"max_yaw_rate = {FLOAT_FORMAT % self.max_yaw_rate}",
                 f"z_drift = {FLOAT_FORMAT % self.z_drift}",
                 f"peak_speed = {FLOAT_FORMAT % self.peak_speed}"]
        if self.phase_lag_deg is not None:
            lines.append(f"phase_channel = {self.phase_channel}")
            lines.append(f"phase_lag_deg = {FLOAT_FORMAT % self.phase_lag_deg}")
        return lines


@dataclass(frozen=True)
class MetricsReport:
    """Cross-run comparison in the style of the maneuverability figures."""

    yaw_rate_gain_ratio: float | None = None
    z_drift_torque: float | None = None
    z_drift_tilt: float | None = None
    phase_lag_deg: dict = field(default_factory=dict)
    peak_speeds: dict = field(default_factory=dict)

    def as_lines(self):
        lines = []
        if self.yaw_rate_gain_ratio is not None:
            lines.append("yaw_rate_gain_ratio = "
                         + FLOAT_FORMAT % self.yaw_rate_gain_ratio)
        if self.z_drift_torque is not None:
            lines.append("z_drift_torque = " + FLOAT_FORMAT % self.z_drift_torque)
        if self.z_drift_tilt is not None:
            lines.append("z_drift_tilt = " + FLOAT_FORMAT % self.z_drift_tilt)
        for key, value in self.phase_lag_deg.items():
            lines.append(f"phase_lag_deg.{key} = " + FLOAT_FORMAT % value)
        for key, value in self.peak_speeds.items():
            lines.append(f"peak_speed.{key} = " + FLOAT_FORMAT % value)
        return lines


# ---------------------------------------------------------------------------
# harmonic fitting
# ---------------------------------------------------------------------------

def first_harmonic(t, y, freq):
    """Least-squares fit y ~ A cos(wt) + B sin(wt) + C at a fixed frequency.

    Returns (amplitude, phase) with y ~ amp * cos(wt - phase) + C.
    """
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    if t.size < 4:
        raise ValueError("need at least 4 samples for a harmonic fit")
    w = 2 * math.pi * freq
    basis = np.column_stack([np.cos(w * t), np.sin(w * t), np.ones_like(t)])
    coef, *_ = np.linalg.lstsq(basis, y, rcond=None)
    a, b, _ = coef
    return float(math.hypot(a, b)), float(math.atan2(b, a))


def phase_lag_deg(t, command, response, freq):
    """Phase (deg, in [0, 180]) by which response trails command at freq."""
    _, phase_cmd = first_harmonic(t, command, freq)
    _, phase_resp = first_harmonic(t, response, freq)
    lag = phase_resp - phase_cmd
    lag = (lag + math.pi) % (2 * math.pi) - math.pi
    return abs(math.degrees(lag))


# ---------------------------------------------------------------------------
# telemetry
# ---------------------------------------------------------------------------

def records_to_columns(records, cfg: ScenarioConfig) -> dict:
    """Flatten simulate() records into named column arrays."""
    n = len(records)
    cols = {name: np.empty(n) for name in TELEMETRY_COLUMNS}
    for k, rec in enumerate(records):
        s = rec["state"]
        cmds = sample_commands(cfg, rec["t"])
        row = ([rec["t"], *s.position, *s.attitude, *s.velocity,
                *s.body_rates, *s.tilt, *s.motor_speed, *rec["duty"]]
               + [getattr(cmds, ch) for ch in cfgmod.CHANNELS]
               + [rec["fraction"], *rec["force"], *rec["moment"]])
        for name, value in zip(TELEMETRY_COLUMNS, row):
            cols[name][k] = value
    return cols


def write_telemetry(path: str, cols: dict):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(TELEMETRY_COLUMNS) + "\n")
        n = len(cols["t"])
        for k in range(n):
            fh.write(",".join(FLOAT_FORMAT % cols[name][k]
                              for name in TELEMETRY_COLUMNS) + "\n")


def read_telemetry(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        if header != list(TELEMETRY_COLUMNS):
            raise ValueError(f"unexpected telemetry header in {path}")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if data.size == 0:
        data = data.reshape(0, len(TELEMETRY_COLUMNS))
    return {name: data[:, i] for i, name in enumerate(TELEMETRY_COLUMNS)}


# ---------------------------------------------------------------------------
# metrics
# ---------------------------------------------------------------------------

def compute_metrics(cols: dict, cfg: ScenarioConfig) -> RunMetrics:
    m = cfg["metrics"]
    t = cols["t"]
    speed = np.sqrt(cols["vx"] ** 2 + cols["vy"] ** 2 + cols["vz"] ** 2)
    metrics = dict(
        name=cfg.name, role=m["role"],
        peak_speed=float(speed.max(initial=0.0)),
    )
    lo, hi = m["yaw_window_lo"], m["yaw_window_hi"]
    if hi > lo:
        mask = (t >= lo) & (t <= hi)
    else:
        mask = np.ones_like(t, dtype=bool)
    if mask.any():
        metrics["max_yaw_rate"] = float(np.abs(cols["wz"][mask]).max())
        z = cols["pz"][mask]
        metrics["z_drift"] = float(abs(z[-1] - z[0]))
    if m["phase_channel"]:
        ch = m["phase_channel"]
        freq = m["phase_frequency"]
        if freq <= 0:
            raise ValueError("phase_frequency must be positive for a phase fit")
        plo, phi = m["phase_window_lo"], m["phase_window_hi"]
        if phi <= plo:
            plo, phi = t[0], t[-1]
        if phi - plo < 2.0 / freq:
            raise ValueError("phase window must span at least two periods")
        wmask = (t >= plo) & (t <= phi)
        metrics["phase_channel"] = ch
        metrics["phase_lag_deg"] = phase_lag_deg(
            t[wmask], cols[f"cmd_{ch}"][wmask], cols["vx"][wmask], freq)
    return RunMetrics(**metrics)


# ---------------------------------------------------------------------------
# builtin scenarios
# ---------------------------------------------------------------------------

def sine_keyframes(amplitude, freq, t0, t1, points_per_period=32):
    """Dense piecewise-linear approximation of a sinusoid burst."""
    n = max(2, int(round((t1 - t0) * freq * points_per_period)))
    times = np.linspace(t0, t1, n + 1)
    return tuple((float(tt), float(amplitude * math.sin(2 * math.pi * freq
                                                        * (tt - t0))))
                 for tt in times)


PHASE_FREQ = 0.15  # Hz, shared by the two translation runs


def _base(name, duration, **scenario_kv) -> ScenarioConfig:
    return ScenarioConfig({}).with_values(
        "scenario", name=name, duration=duration, **scenario_kv)


def hover_air() -> ScenarioConfig:
    return (_base("hover_air", 12.0)
            .with_values("initial", z=-5.0))


def yaw_torque() -> ScenarioConfig:
    # depth-holding collective is scripted (constant stick): differential
    # speed then raises total thrust quadratically, so the depth drifts
    return (_base("yaw_torque", 24.0)
            .with_values("initial", z=8.0)
            .with_values("control", collective_trim=0.05)
            .with_values("trace.yaw1",
                         keyframes=((4.0, 0.0), (4.5, 1.0),
                                    (19.0, 1.0), (19.5, 0.0)))
            .with_values("metrics", role="yaw_torque",
                         yaw_window_lo=4.0, yaw_window_hi=19.0))


def yaw_tilt() -> ScenarioConfig:
    # near-full tilt range: yaw at beta ~ pi needs the clamp opened past
    # the conservative default window
    return (_base("yaw_tilt", 24.0)
            .with_values("initial", z=8.0)
            .with_values("allocation", clamp_lo=0.05,
                         clamp_hi=math.pi - 0.05)
            .with_values("trace.yaw2",
                         keyframes=((4.0, 0.0), (4.5, 1.0),
                                    (19.0, 1.0), (19.5, 0.0)))
            .with_values("metrics", role="yaw_tilt",
                         yaw_window_lo=4.0, yaw_window_hi=19.0))


def pitch_translation() -> ScenarioConfig:
    frames = sine_keyframes(0.8, PHASE_FREQ, 2.0, 26.0)
    return (_base("pitch_translation", 27.0)
            .with_values("initial", z=3.0)
            .with_values("trace.pitch", keyframes=frames)
            .with_values("metrics", role="pitch_translation",
                         phase_channel="pitch", phase_frequency=PHASE_FREQ,
                         phase_window_lo=26.0 - 2.0 / PHASE_FREQ,
                         phase_window_hi=26.0))


def tilt_translation() -> ScenarioConfig:
    frames = sine_keyframes(0.8, PHASE_FREQ, 2.0, 26.0)
    return (_base("tilt_translation", 27.0)
            .with_values("initial", z=3.0)
            .with_values("trace.surge", keyframes=frames)
            .with_values("metrics", role="tilt_translation",
                         phase_channel="surge", phase_frequency=PHASE_FREQ,
                         phase_window_lo=26.0 - 2.0 / PHASE_FREQ,
                         phase_window_hi=26.0))


def dive_mode() -> ScenarioConfig:
    # lower working zone: neutral stick sits at beta = -pi/2 (thrust down);
    # extra buoyancy mimics the added float block
    return (_base("dive_mode", 10.0)
            .with_values("initial", z=2.0)
            .with_values("buoyancy", ratio=1.05)
            .with_values("allocation", zone=1,
                         clamp_lo=-5 * math.pi / 6, clamp_hi=-math.pi / 6)
            .with_values("control", collective_trim=0.4))


def aerial_vectoring() -> ScenarioConfig:
    return (_base("aerial_vectoring", 14.0)
            .with_values("initial", z=-5.0)
            .with_values("trace.surge",
                         keyframes=((3.0, 0.0), (3.5, 0.3),
                                    (9.0, 0.3), (9.5, 0.0))))


def zero_command_water() -> ScenarioConfig:
    return (_base("zero_command_water", 10.0)
            .with_values("initial", z=3.0)
            .with_values("buoyancy", ratio=1.0)
            .with_values("control", collective_trim=0.0))


BUILTIN_SCENARIOS = {
    "hover_air": hover_air,
    "yaw_torque": yaw_torque,
    "yaw_tilt": yaw_tilt,
    "pitch_translation": pitch_translation,
    "tilt_translation": tilt_translation,
    "dive_mode": dive_mode,
    "aerial_vectoring": aerial_vectoring,
    "zero_command_water": zero_command_water,
}

PAIRED_SCENARIOS = {
    "yaw_torque_vs_tilt": ("yaw_torque", "yaw_tilt"),
    "horizontal_pitch_vs_tilt": ("pitch_translation", "tilt_translation"),
}


# ---------------------------------------------------------------------------
# running
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RunResult:
    run_dir: str
    telemetry_path: str
    metrics: RunMetrics
    columns: dict


def simulate_scenario(cfg: ScenarioConfig):
    """Run the closed loop for one config and return telemetry columns."""
    plant = cfgmod.build_plant(cfg)
    controller = cfgmod.build_controller(cfg)
    sc = cfg["scenario"]
    params = dynamics.SimParams(dt=sc["dt"], duration=sc["duration"])
    band = cfg["buoyancy"]["band"]
    dt_ctrl = sc["dt"] * sc["control_decimation"]

    def control_fn(t, state):
        commands = sample_commands(cfg, t)
        fraction = hydro.submerged_fraction(state.position[2], band)
        return controller.control_step(state, commands, dt_ctrl, fraction)

    records = dynamics.simulate(
        plant, params, cfgmod.build_initial_state(cfg), control_fn,
        control_decimation=sc["control_decimation"],
        record_decimation=sc["record_decimation"])
    return records_to_columns(records, cfg)


def run_scenario(cfg: ScenarioConfig, out_dir: str) -> RunResult:
    """Simulate one scenario into a run directory (telemetry + sidecars).

    On a simulation fault the partial telemetry is still written before
    the fault propagates.
    """
    run_dir = os.path.join(out_dir, cfg.name)
    os.makedirs(run_dir, exist_ok=True)
    telemetry_path = os.path.join(run_dir, "telemetry.csv")
    with open(os.path.join(run_dir, "config.txt"), "w", encoding="utf-8") as fh:
        fh.write(serialize_config(cfg))
    try:
        cols = simulate_scenario(cfg)
    except dynamics.SimulationFault as fault:
        partial = getattr(fault, "records", [])
        if partial:
            write_telemetry(telemetry_path, records_to_columns(partial, cfg))
        raise
    write_telemetry(telemetry_path, cols)
    metrics = compute_metrics(cols, cfg)
    with open(os.path.join(run_dir, "metrics.txt"), "w", encoding="utf-8") as fh:
        fh.write("\n".join(metrics.as_lines()) + "\n")
    return RunResult(run_dir, telemetry_path, metrics, cols)


def combine_pair(first: RunMetrics, second: RunMetrics) -> MetricsReport:
    """Comparison metrics from a (torque-style, tilt-style) run pair."""
    report = MetricsReport(
        phase_lag_deg={m.role: m.phase_lag_deg
                       for m in (first, second) if m.phase_lag_deg is not None},
        peak_speeds={m.role: m.peak_speed for m in (first, second)},
    )
    if {first.role, second.role} == {"yaw_torque", "yaw_tilt"}:
        torque = first if first.role == "yaw_torque" else second
        tilt = second if torque is first else first
        ratio = (tilt.max_yaw_rate / torque.max_yaw_rate
                 if torque.max_yaw_rate > 0 else math.inf)
        report = MetricsReport(
            yaw_rate_gain_ratio=ratio,
            z_drift_torque=torque.z_drift,
            z_drift_tilt=tilt.z_drift,
            phase_lag_deg=report.phase_lag_deg,
            peak_speeds=report.peak_speeds,
        )
    return report


def run_pair(pair_name: str, out_dir: str):
    """Run a builtin paired comparison; returns (results, MetricsReport)."""
    if pair_name not in PAIRED_SCENARIOS:
        raise KeyError(f"unknown paired scenario '{pair_name}'")
    names = PAIRED_SCENARIOS[pair_name]
    pair_dir = os.path.join(out_dir, pair_name)
    results = [run_scenario(BUILTIN_SCENARIOS[n](), pair_dir) for n in names]
    report = combine_pair(results[0].metrics, results[1].metrics)
    with open(os.path.join(pair_dir, "report.txt"), "w", encoding="utf-8") as fh:
        fh.write("\n".join(report.as_lines()) + "\n")
    return results, report
