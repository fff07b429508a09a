#!/usr/bin/env python3
"""Run every builtin scenario and comparison pair, with metric checks.

Usage: python3 scripts/run_suite.py [out_dir]

Writes one run directory per scenario under out_dir (default: runs/)
and exits nonzero if any maneuverability threshold fails.
"""

import sys

from aquatilt import cli

if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "runs"
    sys.exit(cli.main(["suite", "--check", "--out", out]))
