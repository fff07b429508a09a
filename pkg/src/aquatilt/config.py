"""Scenario configuration: sectioned key-value text format.

Grammar (UTF-8):
  - ``[section]`` headers, ``key = value`` lines, ``#`` comments, blank
    lines ignored.
  - values are floats, ints, strings, comma-separated float lists, or
    keyframe lists ``t:v, t:v, ...`` with strictly increasing times.
  - unknown sections or keys are rejected with the offending line.

Every key has a default; a minimal file needs only ``[scenario]`` with
``name`` and ``duration``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import allocation, control, dynamics, hydro, propulsion
from .frames import GeometryParams, VehicleState, quat_from_euler, vec3


class ConfigError(Exception):
    def __init__(self, message, line=None, key=None):
        loc = ""
        if line is not None:
            loc = f"line {line}: "
        if key is not None:
            loc += f"key '{key}': "
        super().__init__(loc + message)
        self.line = line
        self.key = key


CHANNELS = control.CHANNEL_ORDER

# key -> (kind, default); kinds: f float, i int, s string, v3 float triple,
# kf keyframe list
_SCHEMA = {
    "scenario": {
        "name": ("s", "unnamed"),
        "duration": ("f", 10.0),
        "dt": ("f", 0.002),
        "record_decimation": ("i", 10),
        "control_decimation": ("i", 2),
    },
    "initial": {
        "x": ("f", 0.0), "y": ("f", 0.0), "z": ("f", 0.0),
        "roll": ("f", 0.0), "pitch": ("f", 0.0), "yaw": ("f", 0.0),
    },
    "geometry": {
        "L_p": ("f", 0.19), "H_p": ("f", 0.02), "mass": ("f", 1.63),
        "ixx": ("f", 0.020), "iyy": ("f", 0.020), "izz": ("f", 0.035),
        "cob_z": ("f", -0.03),
    },
    "propulsion": {
        "K_T_ae": ("f", 5.86e-6), "K_T_aq": ("f", 1.90e-3),
        "K_M_ae": ("f", 4.00e-8), "K_M_aq": ("f", 1.90e-5),
    },
    "gearbox": {
        "r_ae": ("f", 1.0), "r_aq": ("f", 12.33),
        "loss_ae": ("f", 0.051), "loss_aq": ("f", 0.213),
    },
    "motor": {
        "kv": ("f", 140.0), "resistance": ("f", 0.25),
        "idle_current": ("f", 1.7), "v_max": ("f", 16.8),
        "omega_max": ("f", 1600.0), "duty_min_useful": ("f", 0.30),
    },
    "buoyancy": {
        "ratio": ("f", 0.98),        # buoyant force / weight when submerged
        "band": ("f", 0.2),
    },
    "medium.air": {
        "density": ("f", 1.225),
        "drag_linear": ("v3", (0.0, 0.0, 0.0)),
        "drag_quadratic": ("v3", (0.25, 0.25, 0.35)),
        "rot_drag_quadratic": ("v3", (0.002, 0.002, 0.002)),
        "added_mass_linear": ("v3", (0.0, 0.0, 0.0)),
        "added_mass_rot": ("v3", (0.0, 0.0, 0.0)),
    },
    "medium.water": {
        "density": ("f", 1000.0),
        "drag_linear": ("v3", (8.0, 8.0, 10.0)),
        "drag_quadratic": ("v3", (45.0, 45.0, 55.0)),
        "rot_drag_quadratic": ("v3", (0.6, 0.6, 0.8)),
        "added_mass_linear": ("v3", (0.489, 0.489, 0.489)),
        "added_mass_rot": ("v3", (0.004, 0.004, 0.007)),
    },
    "actuators": {
        "tau_motor": ("f", 0.05), "tau_servo": ("f", 0.12),
        "floor_depth": ("f", 20.0),
    },
    "allocation": {
        "variant": ("s", "full_range"),
        "zone": ("i", -1),
        "gain": ("f", 4.0),
        "clamp_lo": ("f", math.pi / 6),
        "clamp_hi": ("f", 5 * math.pi / 6),
    },
    "control": {
        "collective_trim": ("f", float("nan")),  # NaN -> vertical loop active
        "max_tilt_deg": ("f", 35.0),
    },
    "metrics": {
        "role": ("s", ""),
        "phase_channel": ("s", ""),
        "phase_frequency": ("f", 0.0),
        "phase_window_lo": ("f", 0.0),
        "phase_window_hi": ("f", 0.0),
        "yaw_window_lo": ("f", 0.0),
        "yaw_window_hi": ("f", 0.0),
    },
}
for _ch in CHANNELS:
    _SCHEMA[f"trace.{_ch}"] = {"keyframes": ("kf", ())}

# controller gain keys share one sub-schema per medium
_GAIN_KEYS = {
    "angle_p": None, "rate_p": None, "rate_i": None, "rate_d": None,
    "rate_limit": None, "yaw_p": None, "yaw_i": None, "yaw_limit": None,
    "vz_p": None, "vz_i": None, "vz_limit": None, "alt_p": None,
    "hover_duty_ff": None, "max_rate_sp": None, "max_yaw_rate_sp": None,
    "max_vz_sp": None,
}


def _gains_to_dict(g: control.CascadeGains) -> dict:
    return {
        "angle_p": g.angle_p, "rate_p": g.rate.p, "rate_i": g.rate.i,
        "rate_d": g.rate.d, "rate_limit": g.rate.limit,
        "yaw_p": g.yaw_rate.p, "yaw_i": g.yaw_rate.i,
        "yaw_limit": g.yaw_rate.limit,
        "vz_p": g.vz.p, "vz_i": g.vz.i, "vz_limit": g.vz.limit,
        "alt_p": g.alt_p, "hover_duty_ff": g.hover_duty_ff,
        "max_rate_sp": g.max_rate_sp, "max_yaw_rate_sp": g.max_yaw_rate_sp,
        "max_vz_sp": g.max_vz_sp,
    }


def _gains_from_dict(d: dict, max_tilt_deg: float) -> control.CascadeGains:
    return control.CascadeGains(
        angle_p=d["angle_p"],
        rate=control.PidGains(d["rate_p"], d["rate_i"], d["rate_d"],
                              d["rate_limit"]),
        yaw_rate=control.PidGains(d["yaw_p"], d["yaw_i"], 0.0, d["yaw_limit"]),
        vz=control.PidGains(d["vz_p"], d["vz_i"], 0.0, d["vz_limit"],
                            i_limit=0.6),
        alt_p=d["alt_p"],
        max_tilt_sp=math.radians(max_tilt_deg),
        max_rate_sp=d["max_rate_sp"],
        max_yaw_rate_sp=d["max_yaw_rate_sp"],
        max_vz_sp=d["max_vz_sp"],
        hover_duty_ff=d["hover_duty_ff"],
    )


for _medium, _defaults in (("air", _gains_to_dict(control.air_gains())),
                           ("water", _gains_to_dict(control.water_gains()))):
    _SCHEMA[f"gains.{_medium}"] = {
        k: ("f", _defaults[k]) for k in _GAIN_KEYS}


@dataclass(frozen=True)
class ScenarioConfig:
    """Fully resolved scenario: a dict of section -> key -> value."""

    values: dict = field(default_factory=dict)

    def __post_init__(self):
        resolved = {sec: dict(keys) for sec, keys in defaults().items()}
        for sec, keys in self.values.items():
            resolved[sec].update(keys)
        object.__setattr__(self, "values", resolved)
        _validate(resolved)

    def __getitem__(self, section):
        return self.values[section]

    @property
    def name(self):
        return self.values["scenario"]["name"]

    @property
    def duration(self):
        return self.values["scenario"]["duration"]

    def with_values(self, section: str, **kv) -> "ScenarioConfig":
        values = {sec: dict(keys) for sec, keys in self.values.items()}
        for key, val in kv.items():
            if key not in _SCHEMA[section]:
                raise ConfigError(f"unknown key '{key}' in [{section}]")
            values[section][key] = val
        return ScenarioConfig(values)


def defaults() -> dict:
    return {sec: {k: spec[1] for k, spec in keys.items()}
            for sec, keys in _SCHEMA.items()}


def _validate(values: dict):
    sc = values["scenario"]
    if sc["duration"] <= 0:
        raise ConfigError("duration must be positive", key="duration")
    if not 0 < sc["dt"] <= 0.01:
        raise ConfigError("dt must lie in (0, 0.01]", key="dt")
    for ch in CHANNELS:
        frames = values[f"trace.{ch}"]["keyframes"]
        times = [t for t, _ in frames]
        if any(t2 <= t1 for t1, t2 in zip(times, times[1:])):
            raise ConfigError(
                f"keyframe times must be strictly increasing on channel {ch}",
                key="keyframes")
    alloc = values["allocation"]
    if alloc["variant"] not in ("full_range", "half_range"):
        raise ConfigError("variant must be full_range or half_range",
                          key="variant")
    if alloc["zone"] not in (1, -1):
        raise ConfigError("zone must be +1 or -1", key="zone")
    if not alloc["clamp_lo"] < alloc["clamp_hi"]:
        raise ConfigError("clamp interval must be non-empty", key="clamp_lo")


def _parse_value(kind, text, lineno, key):
    try:
        if kind == "f":
            return float(text)
        if kind == "i":
            return int(text)
        if kind == "s":
            return text.strip()
        if kind == "v3":
            parts = [float(p) for p in text.split(",")]
            if len(parts) != 3:
                raise ValueError("expected 3 components")
            return tuple(parts)
        if kind == "kf":
            frames = []
            for chunk in text.split(","):
                chunk = chunk.strip()
                if not chunk:
                    continue
                t, v = chunk.split(":")
                frames.append((float(t), float(v)))
            return tuple(frames)
    except ValueError as exc:
        raise ConfigError(str(exc), line=lineno, key=key) from exc
    raise AssertionError(f"unknown kind {kind}")


def parse_config(text: str) -> ScenarioConfig:
    """Parse and validate a scenario config document."""
    values: dict = {}
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in _SCHEMA:
                raise ConfigError(f"unknown section [{section}]", line=lineno)
            values.setdefault(section, {})
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", line=lineno)
        if section is None:
            raise ConfigError("key outside any section", line=lineno)
        key, _, val = line.partition("=")
        key = key.strip()
        if key not in _SCHEMA[section]:
            raise ConfigError(f"unknown key in [{section}]",
                              line=lineno, key=key)
        kind = _SCHEMA[section][key][0]
        values[section][key] = _parse_value(kind, val.strip(), lineno, key)
    return ScenarioConfig(values)


def _format_value(kind, value):
    if kind == "f":
        return repr(float(value))
    if kind == "i":
        return str(int(value))
    if kind == "s":
        return str(value)
    if kind == "v3":
        return ", ".join(repr(float(v)) for v in value)
    if kind == "kf":
        return ", ".join(f"{repr(float(t))}:{repr(float(v))}"
                         for t, v in value)
    raise AssertionError(f"unknown kind {kind}")


def serialize_config(cfg: ScenarioConfig) -> str:
    """Text form that parses back to an equal config."""
    lines = []
    for sec, keys in _SCHEMA.items():
        body = []
        for key, (kind, default) in keys.items():
            value = cfg.values[sec][key]
            if value == default or (isinstance(default, float)
                                    and isinstance(value, float)
                                    and math.isnan(default)
                                    and math.isnan(value)):
                continue
            body.append(f"{key} = {_format_value(kind, value)}")
        if body:
            lines.append(f"[{sec}]")
            lines.extend(body)
            lines.append("")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# config -> simulation objects
# ---------------------------------------------------------------------------

def build_geometry(cfg: ScenarioConfig) -> GeometryParams:
    g = cfg["geometry"]
    b = cfg["buoyancy"]
    volume = b["ratio"] * g["mass"] / cfg["medium.water"]["density"]
    return GeometryParams(
        L_p=g["L_p"], H_p=g["H_p"], mass=g["mass"],
        inertia=np.diag([g["ixx"], g["iyy"], g["izz"]]),
        displaced_volume=volume,
        cob_offset=vec3(0.0, 0.0, g["cob_z"]),
    )


def _build_medium(section: dict) -> hydro.Medium:
    return hydro.Medium(
        density=section["density"],
        drag_linear=np.array(section["drag_linear"]),
        drag_quadratic=np.array(section["drag_quadratic"]),
        added_mass=np.concatenate([section["added_mass_linear"],
                                   section["added_mass_rot"]]),
        rot_drag_quadratic=np.array(section["rot_drag_quadratic"]),
    )


def build_plant(cfg: ScenarioConfig) -> dynamics.PlantParams:
    geometry = build_geometry(cfg)
    p = cfg["propulsion"]
    gb = cfg["gearbox"]
    mo = cfg["motor"]
    act = cfg["actuators"]
    return dynamics.PlantParams(
        geometry=geometry,
        prop=propulsion.PropellerCoeffs(
            K_T_ae=p["K_T_ae"], K_T_aq=p["K_T_aq"],
            K_M_ae=p["K_M_ae"], K_M_aq=p["K_M_aq"]),
        gearbox=propulsion.Gearbox(
            r_ae=gb["r_ae"], r_aq=gb["r_aq"],
            loss_ae=gb["loss_ae"], loss_aq=gb["loss_aq"]),
        motor=propulsion.MotorModel(
            kv=mo["kv"], resistance=mo["resistance"],
            idle_current=mo["idle_current"], v_max=mo["v_max"],
            omega_max=mo["omega_max"],
            duty_min_useful=mo["duty_min_useful"]),
        air=_build_medium(cfg["medium.air"]),
        water=_build_medium(cfg["medium.water"]),
        buoyancy=hydro.BuoyancyModel(
            displaced_volume=geometry.displaced_volume,
            cob_offset=geometry.cob_offset,
            submersion_band=cfg["buoyancy"]["band"]),
        tau_motor=act["tau_motor"], tau_servo=act["tau_servo"],
        floor_depth=act["floor_depth"],
    )


def build_mixer(cfg: ScenarioConfig) -> allocation.MixerSettings:
    a = cfg["allocation"]
    return allocation.MixerSettings(
        zone=a["zone"],
        variant=allocation.MixerVariant(a["variant"]),
        gain=a["gain"],
        clamp=(a["clamp_lo"], a["clamp_hi"]),
    )


def build_controller(cfg: ScenarioConfig) -> control.CascadeController:
    max_tilt = cfg["control"]["max_tilt_deg"]
    trim = cfg["control"]["collective_trim"]
    return control.CascadeController(
        gains_air=_gains_from_dict(cfg["gains.air"], max_tilt),
        gains_water=_gains_from_dict(cfg["gains.water"], max_tilt),
        mixer_settings=build_mixer(cfg),
        collective_trim=None if math.isnan(trim) else trim,
    )


def build_initial_state(cfg: ScenarioConfig) -> VehicleState:
    ini = cfg["initial"]
    # tilt starts at the mixer's neutral-stick output
    neutral = allocation.mixer(allocation.JoystickInput(), build_mixer(cfg))
    return VehicleState(
        position=vec3(ini["x"], ini["y"], ini["z"]),
        attitude=quat_from_euler(ini["roll"], ini["pitch"], ini["yaw"]),
        tilt=neutral.beta,
    )


def sample_trace(cfg: ScenarioConfig, channel: str, t: float) -> float:
    """Piecewise-linear command value; zero outside the keyframes."""
    frames = cfg[f"trace.{channel}"]["keyframes"]
    if not frames:
        return 0.0
    times = [f[0] for f in frames]
    vals = [f[1] for f in frames]
    if t <= times[0]:
        return vals[0] if t == times[0] else 0.0
    if t >= times[-1]:
        return vals[-1]
    return float(np.interp(t, times, vals))


def sample_commands(cfg: ScenarioConfig, t: float) -> control.ChannelCommands:
    return control.ChannelCommands(
        **{ch: sample_trace(cfg, ch, t) for ch in CHANNELS})
