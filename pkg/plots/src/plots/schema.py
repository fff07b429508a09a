"""File-format contract for run directories.

The telemetry header below restates the documented CSV contract of the
simulator's run output; it is the single schema source for this package.
"""

from __future__ import annotations

import numpy as np

EXPECTED_HEADER = (
    "t,px,py,pz,qw,qx,qy,qz,vx,vy,vz,wx,wy,wz,"
    "beta1,beta2,beta3,beta4,omega1,omega2,omega3,omega4,"
    "duty1,duty2,duty3,duty4,"
    "cmd_roll,cmd_pitch,cmd_yaw1,cmd_throttle,cmd_surge,cmd_sway,cmd_yaw2,"
    "medium_fraction,fx,fy,fz,mx,my,mz"
).split(",")

STATIC_HEADER = ("duty,omega,thrust,prop_torque,elec_power,"
                 "efficiency,specific_thrust").split(",")


class SchemaError(ValueError):
    """Input file does not match the documented contract."""


class EmptyTelemetryError(ValueError):
    """Telemetry file has a valid header but no data rows."""


def _column_diff(found: list[str], expected: list[str]) -> str:
    missing = [c for c in expected if c not in found]
    extra = [c for c in found if c not in expected]
    parts = []
    if missing:
        parts.append("missing columns: " + ", ".join(missing))
    if extra:
        parts.append("unexpected columns: " + ", ".join(extra))
    if not parts:  # same set, different order
        parts.append("columns out of order: got " + ",".join(found))
    return "; ".join(parts)


def _load_csv(path: str, expected: list[str]) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        if header != expected:
            raise SchemaError(f"{path}: {_column_diff(header, expected)}")
        body = fh.read()
        if not body.strip():
            raise EmptyTelemetryError(f"{path}: no data rows")
        data = np.loadtxt(body.splitlines(), delimiter=",", ndmin=2)
    if data.shape[1] != len(expected):
        raise SchemaError(f"{path}: row width {data.shape[1]} != "
                          f"{len(expected)} header columns")
    return {name: data[:, i] for i, name in enumerate(expected)}


def load_telemetry(path: str) -> dict:
    """Parse a telemetry CSV into named column arrays."""
    return _load_csv(path, EXPECTED_HEADER)


def load_static_curve(path: str) -> dict:
    """Parse a static bench-curve CSV into named column arrays."""
    return _load_csv(path, STATIC_HEADER)


def load_metrics(path: str) -> dict:
    """Parse a ``key = value`` sidecar into a string/float dict."""
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            if "=" not in line:
                raise SchemaError(f"{path} line {lineno}: expected key = value")
            key, _, value = line.partition("=")
            value = value.strip()
            try:
                out[key.strip()] = float(value)
            except ValueError:
                out[key.strip()] = value
    return out
