#!/usr/bin/env python3
"""Simulate the full suite, then render figures for every run directory.

Usage: python3 scripts/render_figures.py [out_dir]

Requires the optional plot package (see plots/); the simulation part
works without it.
"""

import os
import sys

from aquatilt import cli

if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "runs"
    code = cli.main(["suite", "--out", out])
    code = code or cli.main(["static-test", "--out", out])
    if code:
        sys.exit(code)
    try:
        from plots import cli as plots_cli
    except ImportError:
        print("plot package not installed; skipping figure rendering "
              "(pip install -e plots/ --no-build-isolation)")
        sys.exit(0)
    for entry in sorted(os.listdir(out)):
        run_dir = os.path.join(out, entry)
        if not os.path.isdir(run_dir):
            continue
        kinds = ["--kind", "maneuver", "--kind", "static",
                 "--kind", "suite-summary"]
        code = code or plots_cli.main([run_dir] + kinds)
    sys.exit(code)
