"""Command line entry point.

Subcommands:
  run <config>   simulate one scenario (builtin name or config file)
  suite          run every builtin scenario and comparison pair
  static-test    bench-style thrust / efficiency curves for both gears
  gear-sweep     reduction-ratio sweep under the voltage / power budget
  report <dir>   recompute metrics from an existing run directory

Exit codes: 0 success, 2 configuration error, 3 simulation fault,
4 metric check failure (suite --check).
"""

from __future__ import annotations

import argparse
import os
import sys

from . import designkit, propulsion, scenarios
from .config import ConfigError, ScenarioConfig, build_plant, parse_config
from .dynamics import SimulationFault

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_FAULT = 3
EXIT_CHECK = 4


def _load_config(spec: str) -> ScenarioConfig:
    if spec in scenarios.BUILTIN_SCENARIOS:
        return scenarios.BUILTIN_SCENARIOS[spec]()
    if not os.path.exists(spec):
        raise ConfigError(
            f"'{spec}' is neither a builtin scenario nor a config file "
            f"(builtins: {', '.join(sorted(scenarios.BUILTIN_SCENARIOS))})")
    with open(spec, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def _apply_overrides(cfg: ScenarioConfig, args) -> ScenarioConfig:
    if args.dt is not None:
        cfg = cfg.with_values("scenario", dt=args.dt)
    if args.duration is not None:
        cfg = cfg.with_values("scenario", duration=args.duration)
    if args.mixer_variant is not None:
        cfg = cfg.with_values("allocation", variant=args.mixer_variant)
    return cfg


def cmd_run(args) -> int:
    cfg = _apply_overrides(_load_config(args.config), args)
    result = scenarios.run_scenario(cfg, args.out)
    print(f"run '{cfg.name}' -> {result.run_dir}")
    for line in result.metrics.as_lines():
        print("  " + line)
    return EXIT_OK


def cmd_suite(args) -> int:
    singles = [n for n in scenarios.BUILTIN_SCENARIOS
               if not any(n in pair for pair in
                          scenarios.PAIRED_SCENARIOS.values())]
    for name in singles:
        result = scenarios.run_scenario(
            _apply_overrides(scenarios.BUILTIN_SCENARIOS[name](), args),
            args.out)
        print(f"{name}: peak_speed={result.metrics.peak_speed:.3f} m/s "
              f"z_drift={result.metrics.z_drift:.3f} m")

    checks = []
    for pair_name in scenarios.PAIRED_SCENARIOS:
        _, report = scenarios.run_pair(pair_name, args.out)
        print(pair_name + ":")
        for line in report.as_lines():
            print("  " + line)
        if report.yaw_rate_gain_ratio is not None:
            checks.append(("yaw_rate_gain_ratio >= 3",
                           report.yaw_rate_gain_ratio >= 3.0))
            checks.append(("tilt z-drift <= 20% of torque z-drift",
                           report.z_drift_tilt
                           <= 0.2 * report.z_drift_torque))
        lags = report.phase_lag_deg
        if {"pitch_translation", "tilt_translation"} <= set(lags):
            checks.append(("tilt phase lag <= 0.6 * pitch phase lag",
                           lags["tilt_translation"]
                           <= 0.6 * lags["pitch_translation"]))

    if args.check:
        failed = False
        for label, ok in checks:
            print(f"[{'PASS' if ok else 'FAIL'}] {label}")
            failed = failed or not ok
        if failed:
            return EXIT_CHECK
    return EXIT_OK


def cmd_static_test(args) -> int:
    plant = build_plant(ScenarioConfig({}))
    header = ("duty,omega,thrust,prop_torque,elec_power,"
              "efficiency,specific_thrust")
    for mode in propulsion.PropulsionMode:
        curve = designkit.static_test_curves(mode, plant.prop, plant.gearbox,
                                             plant.motor)
        feasible = [p for p in curve if p.feasible]
        print(f"{mode.value}: peak efficiency "
              f"{designkit.peak_efficiency(curve):.4f}, "
              f"max thrust {max(p.thrust for p in feasible):.2f} N, "
              f"max specific thrust "
              f"{max(p.specific_thrust for p in feasible):.3f} N/W")
        if args.out:
            os.makedirs(args.out, exist_ok=True)
            path = os.path.join(args.out, f"static_{mode.value}.csv")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(header + "\n")
                for p in feasible:
                    fh.write(",".join("%.9g" % v for v in (
                        p.duty, p.omega, p.thrust, p.prop_torque,
                        p.elec_power, p.efficiency,
                        p.specific_thrust)) + "\n")
            print(f"  wrote {path}")
    return EXIT_OK


def cmd_gear_sweep(args) -> int:
    plant = build_plant(ScenarioConfig({}))
    for label, k_t, k_m, loss in (
            ("aerial", plant.prop.K_T_ae, plant.prop.K_M_ae,
             plant.gearbox.loss_ae),
            ("aquatic", plant.prop.K_T_aq, plant.prop.K_M_aq,
             plant.gearbox.loss_aq)):
        sweep = designkit.gear_ratio_sweep(plant.motor, k_t, k_m, loss)
        print(f"{label}: best ratio {sweep.r_best:.2f}, "
              f"max thrust {sweep.best_thrust:.2f} N "
              f"(direct drive {sweep.points[0].thrust:.2f} N)")
        if args.out:
            os.makedirs(args.out, exist_ok=True)
            path = os.path.join(args.out, f"gear_sweep_{label}.csv")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write("ratio,omega,thrust,voltage,current,efficiency\n")
                for p in sweep.points:
                    if not p.feasible:
                        continue
                    fh.write(",".join("%.9g" % v for v in (
                        p.ratio, p.omega, p.thrust, p.voltage,
                        p.current, p.efficiency)) + "\n")
            print(f"  wrote {path}")
    return EXIT_OK


def cmd_report(args) -> int:
    cfg_path = os.path.join(args.run_dir, "config.txt")
    telem_path = os.path.join(args.run_dir, "telemetry.csv")
    for path in (cfg_path, telem_path):
        if not os.path.exists(path):
            raise ConfigError(f"missing {path}")
    with open(cfg_path, "r", encoding="utf-8") as fh:
        cfg = parse_config(fh.read())
    cols = scenarios.read_telemetry(telem_path)
    metrics = scenarios.compute_metrics(cols, cfg)
    for line in metrics.as_lines():
        print(line)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aquatilt",
        description="aerial-aquatic tilt-quadrotor simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default="runs", help="output directory")
        p.add_argument("--dt", type=float, default=None)
        p.add_argument("--duration", type=float, default=None)
        p.add_argument("--mixer-variant", dest="mixer_variant",
                       choices=("full_range", "half_range"), default=None)
        p.add_argument("--seed", type=int, default=None,
                       help="reserved; the simulation is deterministic")

    p_run = sub.add_parser("run", help="simulate one scenario")
    p_run.add_argument("config", help="builtin scenario name or config file")
    common(p_run)
    p_run.set_defaults(fn=cmd_run)

    p_suite = sub.add_parser("suite", help="run all builtin scenarios")
    p_suite.add_argument("--check", action="store_true",
                         help="verify the maneuverability metric thresholds")
    common(p_suite)
    p_suite.set_defaults(fn=cmd_suite)

    p_static = sub.add_parser("static-test", help="static bench curves")
    p_static.add_argument("--out", default=None)
    p_static.set_defaults(fn=cmd_static_test)

    p_sweep = sub.add_parser("gear-sweep", help="gear ratio sweep")
    p_sweep.add_argument("--out", default=None)
    p_sweep.set_defaults(fn=cmd_gear_sweep)

    p_report = sub.add_parser("report", help="recompute metrics for a run")
    p_report.add_argument("run_dir")
    p_report.set_defaults(fn=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, ValueError, KeyError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SimulationFault as exc:
        print(f"simulation fault: {exc}", file=sys.stderr)
        return EXIT_FAULT


if __name__ == "__main__":
    sys.exit(main())
