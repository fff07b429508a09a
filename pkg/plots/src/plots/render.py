"""Figure builders and the render entry point.

All inputs are parsed before any file is created, so a bad run directory
never leaves a partial image behind. Figures are styled deterministically
(fixed fonts and sizes, no timestamps in the output metadata), so the
same inputs always produce identical bytes.
"""

from __future__ import annotations

import glob
import os

import matplotlib
from matplotlib.figure import Figure

from .schema import (SchemaError, load_metrics, load_static_curve,
                     load_telemetry)

KINDS = ("maneuver", "static", "suite-summary")

matplotlib.rcParams["svg.hashsalt"] = "plots"

_STYLE = {
    "figure.dpi": 110,
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.2,
}


def _save(fig: Figure, path: str):
    fmt = os.path.splitext(path)[1].lstrip(".")
    metadata = {"Date": None} if fmt == "svg" else {"Software": "plots"}
    fig.savefig(path, format=fmt, metadata=metadata)


def discover_runs(run_dir: str) -> list[tuple[str, dict]]:
    """Telemetry found directly in the directory or in run subdirectories.

    A plain run directory yields one entry; a comparison-pair directory
    (subdirectories each holding a telemetry.csv) yields one entry per
    run so traces can be overlaid.
    """
    direct = os.path.join(run_dir, "telemetry.csv")
    if os.path.exists(direct):
        return [(os.path.basename(os.path.normpath(run_dir)),
                 load_telemetry(direct))]
    runs = []
    for entry in sorted(os.listdir(run_dir)):
        nested = os.path.join(run_dir, entry, "telemetry.csv")
        if os.path.exists(nested):
            runs.append((entry, load_telemetry(nested)))
    if not runs:
        raise SchemaError(f"no telemetry.csv under {run_dir}")
    return runs


def build_maneuver_figure(runs: list[tuple[str, dict]]) -> Figure:
    """Four-panel time series: yaw rate, depth, surge speed, tilt angles."""
    with matplotlib.rc_context(_STYLE):
        fig = Figure(figsize=(9, 6.5))
        axes = fig.subplots(2, 2)
        ax_yaw, ax_z, ax_vx, ax_tilt = axes.ravel()

        for label, cols in runs:
            t = cols["t"]
            ax_yaw.plot(t, cols["wz"], label=label)
            ax_yaw.plot(t, cols["cmd_yaw1"] + cols["cmd_yaw2"], "--",
                        label=f"{label} yaw cmd")
            ax_z.plot(t, cols["pz"], label=label)
            ax_vx.plot(t, cols["vx"], label=label)
            ax_vx.plot(t, cols["cmd_pitch"] + cols["cmd_surge"], "--",
                       label=f"{label} cmd")
            if len(runs) == 1:
                for i in range(1, 5):
                    ax_tilt.plot(t, cols[f"beta{i}"], label=f"beta{i}")
            else:
                ax_tilt.plot(t, cols["beta1"], label=f"{label} beta1")

        ax_yaw.set_ylabel("yaw rate [rad/s] / command")
        ax_z.set_ylabel("z position [m]")
        ax_z.invert_yaxis()  # depth increases downward
        ax_vx.set_ylabel("v_x [m/s] / command")
        ax_tilt.set_ylabel("tilt angle [rad]")
        for ax in axes.ravel():
            ax.set_xlabel("time [s]")
            ax.legend(loc="best", fontsize=7)
        fig.suptitle(" / ".join(label for label, _ in runs))
        fig.tight_layout()
    return fig


def build_static_figure(curves: list[tuple[str, dict]]) -> Figure:
    """Thrust, efficiency and specific thrust versus duty, per medium."""
    with matplotlib.rc_context(_STYLE):
        fig = Figure(figsize=(9, 3.2))
        ax_t, ax_eta, ax_spec = fig.subplots(1, 3)
        for label, cols in curves:
            ax_t.plot(cols["duty"], cols["thrust"], label=label)
            ax_eta.plot(cols["duty"], cols["efficiency"], label=label)
            ax_spec.plot(cols["duty"], cols["specific_thrust"], label=label)
        ax_t.set_ylabel("thrust [N]")
        ax_eta.set_ylabel("motor efficiency")
        ax_spec.set_ylabel("specific thrust [N/W]")
        for ax in (ax_t, ax_eta, ax_spec):
            ax.set_xlabel("duty")
            ax.legend(loc="best", fontsize=7)
        fig.suptitle("static propulsion curves")
        fig.tight_layout()
    return fig


def build_summary_figure(rows: list[tuple[str, str, str]]) -> Figure:
    """Metrics table: one row per (run, key, value)."""
    with matplotlib.rc_context(_STYLE):
        height = 0.9 + 0.26 * len(rows)
        fig = Figure(figsize=(7, height))
        ax = fig.subplots()
        ax.axis("off")
        table = ax.table(cellText=[list(r) for r in rows],
                         colLabels=["run", "metric", "value"],
                         cellLoc="left", loc="center")
        table.auto_set_font_size(False)
        table.set_fontsize(8)
        table.auto_set_column_width([0, 1, 2])
        fig.suptitle("run metrics summary")
    return fig


def _collect_static_curves(run_dir: str) -> list[tuple[str, dict]]:
    for base in (run_dir, os.path.dirname(os.path.normpath(run_dir))):
        paths = sorted(glob.glob(os.path.join(base, "static_*.csv")))
        if paths:
            return [(os.path.splitext(os.path.basename(p))[0]
                     .replace("static_", ""), load_static_curve(p))
                    for p in paths]
    raise SchemaError(
        f"no static_*.csv in {run_dir} or its parent directory")


def _collect_metrics(run_dir: str) -> list[tuple[str, str, str]]:
    rows = []
    for root, dirs, files in os.walk(run_dir):
        dirs.sort()
        for fname in ("metrics.txt", "report.txt"):
            if fname in files:
                rel = os.path.relpath(root, run_dir)
                label = "." if rel == "." else rel
                for key, value in load_metrics(
                        os.path.join(root, fname)).items():
                    if key in ("name", "role"):
                        continue
                    rows.append((label, key, "%.6g" % value
                                 if isinstance(value, float) else str(value)))
    if not rows:
        raise SchemaError(f"no metrics.txt or report.txt under {run_dir}")
    return rows


def render_run(run_dir: str, kind: str, fmt: str = "png") -> str:
    """Render one figure kind for a run directory; returns the image path."""
    if kind not in KINDS:
        raise ValueError(f"unknown figure kind '{kind}' (choose from {KINDS})")
    if not os.path.isdir(run_dir):
        raise SchemaError(f"not a directory: {run_dir}")
    if kind == "maneuver":
        fig = build_maneuver_figure(discover_runs(run_dir))
    elif kind == "static":
        fig = build_static_figure(_collect_static_curves(run_dir))
    else:
        fig = build_summary_figure(_collect_metrics(run_dir))
    out = os.path.join(run_dir, kind.replace("-", "_") + "." + fmt)
    _save(fig, out)
    return out
