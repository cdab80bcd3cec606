"""Write the CSV data behind each figure preset into an output directory.

    python3 scripts/reproduce_figures.py [outdir]
"""
import pathlib
import sys

from cesolve import cli

RUNS = {
    "potential_positive_v2.csv": ["potential", "--preset", "fig1a"],
    "potential_negative_v2.csv": ["potential", "--preset", "fig1b"],
    "root_curves.csv": ["curves", "--preset", "fig2"],
    "iterations.csv": ["iterations", "--preset", "fig3"],
    "energy_surface.csv": ["surface", "--preset", "fig4"],
}


def main(outdir="figures"):
    out = pathlib.Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    status = 0
    for name, argv in RUNS.items():
        code = cli.main(argv + ["--output", str(out / name)])
        print(f"{name}: exit {code}")
        status = max(status, code)
    return status


if __name__ == "__main__":
    sys.exit(main(*sys.argv[1:]))
