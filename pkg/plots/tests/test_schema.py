import pytest

pytest.importorskip("plots.schema")
pytest.importorskip("matplotlib")

from plots.schema import (EXPECTED_HEADER, EmptyTelemetryError, SchemaError,
                          load_metrics, load_telemetry)

from conftest import make_run_dir


GOLDEN_HEADER = (
    "t,px,py,pz,qw,qx,qy,qz,vx,vy,vz,wx,wy,wz,"
    "beta1,beta2,beta3,beta4,omega1,omega2,omega3,omega4,"
    "duty1,duty2,duty3,duty4,"
    "cmd_roll,cmd_pitch,cmd_yaw1,cmd_throttle,cmd_surge,cmd_sway,cmd_yaw2,"
    "medium_fraction,fx,fy,fz,mx,my,mz")


def test_header_contract_pinned():
    assert ",".join(EXPECTED_HEADER) == GOLDEN_HEADER
    assert len(EXPECTED_HEADER) == 40


def test_round_trip(run_dir):
    cols = load_telemetry(str(run_dir / "telemetry.csv"))
    assert set(cols) == set(EXPECTED_HEADER)
    assert len(cols["t"]) == 200


def test_header_only_is_empty_error(tmp_path):
    path = tmp_path / "telemetry.csv"
    path.write_text(",".join(EXPECTED_HEADER) + "\n")
    with pytest.raises(EmptyTelemetryError):
        load_telemetry(str(path))


def test_column_diff_reported(tmp_path):
    path = tmp_path / "telemetry.csv"
    bad = [c for c in EXPECTED_HEADER if c != "wz"] + ["bogus"]
    path.write_text(",".join(bad) + "\n" + ",".join("0" * 1 for _ in bad)
                    + "\n")
    with pytest.raises(SchemaError) as err:
        load_telemetry(str(path))
    assert "missing columns: wz" in str(err.value)
    assert "unexpected columns: bogus" in str(err.value)


def test_column_order_matters(tmp_path):
    path = tmp_path / "telemetry.csv"
    shuffled = list(EXPECTED_HEADER)
    shuffled[0], shuffled[1] = shuffled[1], shuffled[0]
    path.write_text(",".join(shuffled) + "\n")
    with pytest.raises(SchemaError, match="out of order"):
        load_telemetry(str(path))


def test_metrics_sidecar(tmp_path):
    run = make_run_dir(tmp_path)
    m = load_metrics(str(run / "metrics.txt"))
    assert m["name"] == "demo"
    assert m["max_yaw_rate"] == pytest.approx(1.0)


def test_metrics_bad_line(tmp_path):
    path = tmp_path / "metrics.txt"
    path.write_text("just words\n")
    with pytest.raises(SchemaError, match="line 1"):
        load_metrics(str(path))
