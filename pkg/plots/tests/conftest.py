import math

import pytest

import numpy as np

# tolerate a missing install here: each test module skips itself via
# importorskip, but a conftest must stay importable either way
try:
    from plots.schema import EXPECTED_HEADER, STATIC_HEADER
except ImportError:  # pragma: no cover - exercised when plots is absent
    EXPECTED_HEADER = STATIC_HEADER = []


def synthetic_columns(n=200, yaw_rate=1.0, duration=10.0):
    t = np.linspace(0.0, duration, n)
    cols = {name: np.zeros(n) for name in EXPECTED_HEADER}
    cols["t"] = t
    cols["wz"] = yaw_rate * np.sin(2 * math.pi * 0.2 * t)
    cols["pz"] = 3.0 + 0.01 * t
    cols["vx"] = 0.5 * np.sin(2 * math.pi * 0.15 * t)
    cols["cmd_yaw2"] = np.clip(np.sin(2 * math.pi * 0.2 * t), -1, 1)
    cols["cmd_surge"] = 0.8 * np.sin(2 * math.pi * 0.15 * t)
    cols["qw"] = np.ones(n)
    for i in range(1, 5):
        cols[f"beta{i}"] = math.pi / 2 + 0.1 * i * np.sin(t)
        cols[f"omega{i}"] = 100.0 * i * np.ones(n)
        cols[f"duty{i}"] = 0.4 * np.ones(n)
    return cols


def write_csv(path, header, cols):
    n = len(cols[header[0]])
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for k in range(n):
            fh.write(",".join("%.9g" % cols[name][k]
                              for name in header) + "\n")


def make_run_dir(base, name="demo", metrics=True, **kwargs):
    run = base / name
    run.mkdir(parents=True, exist_ok=True)
    write_csv(str(run / "telemetry.csv"), EXPECTED_HEADER,
              synthetic_columns(**kwargs))
    if metrics:
        (run / "metrics.txt").write_text(
            f"name = {name}\nrole = demo\nmax_yaw_rate = 1.0\n"
            "z_drift = 0.1\npeak_speed = 0.5\n")
    return run


def make_static_csv(path):
    duty = np.linspace(0.3, 1.0, 20)
    cols = {
        "duty": duty,
        "omega": 1600.0 * duty,
        "thrust": 30.0 * duty ** 2,
        "prop_torque": 0.3 * duty ** 2,
        "elec_power": 120.0 * duty ** 2 + 5.0,
        "efficiency": 0.5 * duty,
        "specific_thrust": 0.25 * np.ones_like(duty),
    }
    write_csv(str(path), STATIC_HEADER, cols)


@pytest.fixture
def run_dir(tmp_path):
    return make_run_dir(tmp_path)


@pytest.fixture
def pair_dir(tmp_path):
    pair = tmp_path / "pair"
    make_run_dir(pair, "yaw_torque", yaw_rate=0.3)
    make_run_dir(pair, "yaw_tilt", yaw_rate=1.3)
    (pair / "report.txt").write_text(
        "yaw_rate_gain_ratio = 4.3\nz_drift_torque = 4.2\n"
        "z_drift_tilt = 0.06\n")
    return pair
