"""Figure rendering for simulator run directories.

Reads the documented run-directory contract (``telemetry.csv`` with a
fixed 40-column header, ``metrics.txt`` / ``report.txt`` key-value
sidecars, ``static_*.csv`` bench curves) and writes image files next to
the data. Never imports the simulator itself.
"""

from .schema import (EXPECTED_HEADER, EmptyTelemetryError, SchemaError,
                     load_metrics, load_static_curve, load_telemetry)
from .render import KINDS, render_run

__all__ = [
    "EXPECTED_HEADER", "EmptyTelemetryError", "SchemaError",
    "load_metrics", "load_static_curve", "load_telemetry",
    "KINDS", "render_run",
]
