#!/usr/bin/env python3
"""Emit the plot-ready figure datasets: channel-usage curve, capacity grids
for every bandwidth and both payload sizes, and window-efficiency curves.

Usage: python scripts/sweep_figures.py [outdir]
"""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from coexcap.cli import main as cli_main


def run(outdir: pathlib.Path, name: str, argv: list) -> int:
    out = outdir / name
    status = cli_main(argv + ["--out", str(out)])
    if status == 0:
        print(f"wrote {out}")
    return status


def main() -> int:
    outdir = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "results")
    outdir.mkdir(parents=True, exist_ok=True)
    usage_windows = [str(w) for w in
                     (500, 1000, 2000, 3000, 5940, 10000, 20000, 40000, 65534)]
    jobs = [
        ("usage_curve.csv",
         ["sweep", "--curve", "usage", "--windows"] + usage_windows),
        ("window_efficiency.csv",
         ["sweep", "--curve", "dtm-window-efficiency", "--bandwidth", "80",
          "--windows", "2000", "5000", "10000", "20000", "40000"]),
    ]
    for payload in (1500, 15000):
        for bw in (40, 80, 160):
            jobs.append((f"capacity_{bw}mhz_{payload}B.csv",
                         ["sweep", "--bandwidth", str(bw), "--class", "1", "4",
                          "--payload", str(payload),
                          "--regimes", "coex", "dtm", "dfm"]))
    for name, argv in jobs:
        status = run(outdir, name, argv)
        if status != 0:
            return status
    return 0


if __name__ == "__main__":
    sys.exit(main())
