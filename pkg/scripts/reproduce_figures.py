#!/usr/bin/env python3
"""Regenerate the three reference concurrence scans as CSV files.

Usage: python scripts/reproduce_figures.py [output_dir]

Writes fig2.csv (concurrence vs x = L/ct for z = 1, 5, 10), fig3.csv
(concurrence vs z for u = 1, 4, 7) and fig4.csv (concurrence vs detector
azimuth at z = 5, x = 2.5).  The files are plain CLI output; render them with
the separate figure package, e.g.

    python -m swapfigs out/fig2.csv --kind fig2 --out out/fig2.png
"""

import sys
from pathlib import Path

from entswap.cli import main

SCANS = {
    "fig2.csv": ["sweep", "fig2", "--z", "1,5,10", "--x", "0.2:8:400"],
    "fig3.csv": ["sweep", "fig3", "--u", "1,4,7", "--z", "0.01:15:600"],
    "fig4.csv": ["sweep", "fig4", "--z", "5", "--x", "2.5", "--phi", "0:6.283185307179586:361"],
}


def run(output_dir: Path) -> int:
    output_dir.mkdir(parents=True, exist_ok=True)
    for name, args in SCANS.items():
        target = output_dir / name
        code = main(args + ["--out", str(target)])
        if code != 0:
            print(f"failed to write {target} (exit {code})", file=sys.stderr)
            return code
        print(f"wrote {target}")
    return 0


if __name__ == "__main__":
    sys.exit(run(Path(sys.argv[1]) if len(sys.argv) > 1 else Path("out")))
