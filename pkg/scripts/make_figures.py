#!/usr/bin/env python3
"""Produce every figure dataset (CSV + gnuplot script) into an output dir.

Covers: the axial induced potential for a centered and an off-center
source, the in-plane potential, the charge/induced-charge energy, the
dispersion energy and force for a family of tube radii, the force versus
a/b sweep, and the force contour over (a/b, z_p/b).

Usage: python scripts/make_figures.py [outdir]
"""

import pathlib
import sys

from torvdw.cli import main as torvdw


def run(outdir: pathlib.Path) -> None:
    outdir.mkdir(parents=True, exist_ok=True)

    def emit(name, *argv):
        path = outdir / name
        code = torvdw([*argv, "--out", str(path)])
        if code != 0:
            raise SystemExit(f"{name}: torvdw exited {code}")
        print(f"wrote {path}")

    # induced potential along the axis, source at the origin / off center
    emit("potential_axis_centered.csv",
         "potential", "--a", "5", "--b", "1",
         "--zmin", "-20", "--zmax", "20", "--zpoints", "401")
    emit("potential_axis_offset.csv",
         "potential", "--a", "5", "--b", "1", "--source-z", "3",
         "--zmin", "-20", "--zmax", "20", "--zpoints", "401")

    # induced potential across the central disk
    emit("potential_plane.csv",
         "potential", "--a", "4", "--b", "1", "--cut", "plane",
         "--zpoints", "301")

    # electrostatic energy of the charge with its induced charge
    emit("charge_energy.csv",
         "charge-energy", "--a", "5", "--b", "1",
         "--zmin", "-20", "--zmax", "20", "--zpoints", "401")

    # dispersion energy and force, one file per tube radius at fixed a
    for b in ("1", "2", "3", "4"):
        emit(f"vdw_b{b}.csv",
             "vdw", "--a", "5", "--b", b, "--quantity", "both",
             "--zmin", "-10", "--zmax", "10", "--zpoints", "401")

    # force against the a/b ratio at several heights (b = 1 nm)
    emit("force_vs_ratio.csv",
         "sweep-ratio", "--b", "1", "--zp", "1", "--zp", "2", "--zp", "3",
         "--ratio-min", "1.5", "--ratio-max", "12", "--ratio-points", "220")

    # force magnitude over the (a/b, z_p/b) plane (b = 1 nm)
    emit("force_contour.csv",
         "contour", "--b", "1", "--ratio-min", "1.5", "--ratio-max", "10",
         "--ratio-points", "64", "--zmin", "-10", "--zmax", "10",
         "--zpoints", "81")

    print(f"\nrender with: cd {outdir} && gnuplot -p <name>.csv.gp")


if __name__ == "__main__":
    run(pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "figures"))
