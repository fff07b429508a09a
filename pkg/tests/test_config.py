import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from aquatilt import allocation
from aquatilt.config import (
    ConfigError, ScenarioConfig, build_controller, build_geometry,
    build_initial_state, build_mixer, build_plant, defaults, parse_config,
    sample_commands, sample_trace, serialize_config)

MINIMAL = """
[scenario]
name = smoke
duration = 2.0
"""


class TestParsing:
    def test_minimal_gets_defaults(self):
        cfg = parse_config(MINIMAL)
        assert cfg.name == "smoke"
        assert cfg.duration == 2.0
        assert cfg["scenario"]["dt"] == 0.002
        assert cfg["geometry"]["mass"] == 1.63
        assert cfg["allocation"]["variant"] == "full_range"

    def test_comments_and_blank_lines(self):
        cfg = parse_config("# header\n\n[scenario]\nname = x  # inline\n")
        assert cfg.name == "x"

    def test_unknown_section(self):
        with pytest.raises(ConfigError, match="unknown section"):
            parse_config("[nonsense]\nfoo = 1\n")

    def test_unknown_key_reports_line(self):
        with pytest.raises(ConfigError, match="line 2"):
            parse_config("[scenario]\nbogus = 1\n")

    def test_key_outside_section(self):
        with pytest.raises(ConfigError, match="outside"):
            parse_config("name = x\n")

    def test_bad_float(self):
        with pytest.raises(ConfigError, match="duration"):
            parse_config("[scenario]\nduration = banana\n")

    def test_decreasing_keyframes_name_channel(self):
        text = MINIMAL + "[trace.pitch]\nkeyframes = 1.0:0.5, 0.5:0.1\n"
        with pytest.raises(ConfigError, match="pitch"):
            parse_config(text)

    def test_vector_needs_three(self):
        text = MINIMAL + "[medium.water]\ndrag_linear = 1.0, 2.0\n"
        with pytest.raises(ConfigError):
            parse_config(text)

    def test_validation_dt(self):
        with pytest.raises(ConfigError, match="dt"):
            parse_config("[scenario]\nname = x\ndt = 0.5\n")

    def test_bad_variant(self):
        with pytest.raises(ConfigError, match="variant"):
            parse_config(MINIMAL + "[allocation]\nvariant = wild\n")


class TestRoundTrip:
    def test_defaults_round_trip(self):
        cfg = ScenarioConfig({})
        assert parse_config(serialize_config(cfg)).values == cfg.values

    def test_modified_round_trip(self):
        cfg = (ScenarioConfig({})
               .with_values("scenario", name="loop", duration=7.5)
               .with_values("initial", z=4.0, roll=0.1)
               .with_values("allocation", zone=1, clamp_lo=-2.0, clamp_hi=2.0)
               .with_values("trace.surge",
                            keyframes=((0.5, 0.0), (1.0, 0.7), (2.0, -0.3)))
               .with_values("gains.water", rate_p=0.22)
               .with_values("control", collective_trim=0.4))
        text = serialize_config(cfg)
        again = parse_config(text)
        assert again.values == cfg.values

    @given(st.floats(0.1, 100.0), st.floats(1e-4, 0.01),
           st.integers(1, 50))
    def test_scalar_round_trip_property(self, duration, dt, decim):
        cfg = (ScenarioConfig({})
               .with_values("scenario", duration=duration, dt=dt,
                            record_decimation=decim))
        again = parse_config(serialize_config(cfg))
        assert again["scenario"]["duration"] == duration
        assert again["scenario"]["dt"] == dt
        assert again["scenario"]["record_decimation"] == decim

    def test_with_values_rejects_unknown(self):
        with pytest.raises(ConfigError):
            ScenarioConfig({}).with_values("scenario", nonsense=1)


class TestBuilders:
    def test_geometry_buoyancy_ratio(self):
        cfg = ScenarioConfig({})
        g = build_geometry(cfg)
        ratio = 1000.0 * g.displaced_volume / g.mass
        assert ratio == pytest.approx(0.98)

    def test_plant_wiring(self):
        plant = build_plant(ScenarioConfig({}))
        assert plant.motor.omega_max == 1600.0
        assert plant.gearbox.r_aq == pytest.approx(12.33)
        assert plant.water.density == 1000.0

    def test_mixer_settings(self):
        cfg = ScenarioConfig({}).with_values("allocation", variant="half_range",
                                             zone=1)
        m = build_mixer(cfg)
        assert m.variant is allocation.MixerVariant.HALF_RANGE
        assert m.zone == 1

    def test_controller_trim_nan_means_off(self):
        assert build_controller(ScenarioConfig({})).collective_trim is None
        cfg = ScenarioConfig({}).with_values("control", collective_trim=0.3)
        assert build_controller(cfg).collective_trim == pytest.approx(0.3)

    def test_initial_state_tilt_is_mixer_neutral(self):
        cfg = ScenarioConfig({})
        state = build_initial_state(cfg)
        np.testing.assert_allclose(state.tilt, np.pi / 2, atol=1e-12)


class TestTraces:
    def test_zero_before_first_keyframe(self):
        cfg = ScenarioConfig({}).with_values(
            "trace.yaw1", keyframes=((1.0, 0.5), (2.0, 1.0)))
        assert sample_trace(cfg, "yaw1", 0.5) == 0.0
        assert sample_trace(cfg, "yaw1", 1.5) == pytest.approx(0.75)
        assert sample_trace(cfg, "yaw1", 3.0) == 1.0

    def test_empty_trace_zero(self):
        assert sample_trace(ScenarioConfig({}), "sway", 1.0) == 0.0

    def test_sample_commands(self):
        cfg = ScenarioConfig({}).with_values(
            "trace.surge", keyframes=((0.5, 1.0),))
        cmds = sample_commands(cfg, 1.0)
        assert cmds.surge == 1.0
        assert cmds.roll == 0.0


def test_defaults_complete():
    d = defaults()
    assert math.isnan(d["control"]["collective_trim"])
    assert d["metrics"]["role"] == ""
