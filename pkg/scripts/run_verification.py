#!/usr/bin/env python3
"""Run the full first-principles verification at a stricter-than-default grid.

Usage: python scripts/run_verification.py [tolerance]

Checks the oracle amplitudes against the closed forms for every Bell state on
an extended grid and reruns the time-integral quadrature cross-checks.  Exits
nonzero if any check fails.
"""

import sys

from entswap.cli import main

TOLERANCE = sys.argv[1] if len(sys.argv) > 1 else "1e-9"

sys.exit(main([
    "verify",
    "--grid-z", "0.5,1,2,5,10,20",
    "--grid-u", "0.1,0.5,1,2,5,10,20",
    "--pairs", "25",
    "--tol", TOLERANCE,
]))
