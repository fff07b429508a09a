#!/usr/bin/env python3
"""Static bench curves and gear-ratio sweep for both drive modes.

Usage: python3 scripts/static_performance.py [out_dir]

Prints peak efficiency / max thrust per mode and the best reduction
ratio per medium; writes static_*.csv and gear_sweep_*.csv to out_dir
(default: runs/).
"""

import sys

from aquatilt import cli

if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "runs"
    code = cli.main(["static-test", "--out", out])
    code = code or cli.main(["gear-sweep", "--out", out])
    sys.exit(code)
