#!/usr/bin/env python3
"""Panel-refinement study of the boundary-element oracle.

Measures the worst relative deviation of the boundary-element induced
potential from the separable-series value over a fixed set of exterior
points, for a range of panel counts, and prints the observed convergence
order between successive refinements.

Usage: python scripts/bem_convergence.py [a] [b]
"""

import math
import sys
import time

import numpy as np

from torvdw import (
    axial_greens,
    axial_source,
    cartesian_to_toroidal,
    toroid_from_radii,
    vh_potential,
)
from torvdw.bem import bem_vh, build_mesh, solve_induced_density


def study(a: float, b: float, panel_counts=(50, 100, 200, 400, 800, 1600)) -> None:
    geom = toroid_from_radii(a, b)
    g = axial_greens(geom)
    src = axial_source(1.3, geom)

    rng = np.random.default_rng(20240)
    pts = []
    while len(pts) < 24:
        r = rng.uniform(0.0, 2.5 * geom.a)
        z = rng.uniform(-2.5 * geom.a, 2.5 * geom.a)
        if math.hypot(r - geom.a, z) < 1.3 * geom.b:
            continue
        pts.append((r, z))
    reference = [
        vh_potential(cartesian_to_toroidal(r, 0.0, z, geom.f), src, g)
        for r, z in pts
    ]

    print(f"a = {a} nm, b = {b} nm, source at z' = {src.z_src} nm, "
          f"{len(pts)} exterior probe points")
    print(f"{'panels':>8} {'max rel err':>14} {'order':>7} {'seconds':>9}")
    prev = None
    for n in panel_counts:
        t0 = time.perf_counter()
        sol = solve_induced_density(build_mesh(geom, n), src)
        err = max(
            abs(bem_vh(r, z, sol) - v_ref) / abs(v_ref)
            for (r, z), v_ref in zip(pts, reference)
        )
        dt = time.perf_counter() - t0
        order = f"{math.log(prev / err) / math.log(2.0):7.2f}" if prev else "      -"
        print(f"{n:8d} {err:14.3e} {order} {dt:9.3f}")
        prev = err


if __name__ == "__main__":
    a = float(sys.argv[1]) if len(sys.argv) > 1 else 5.0
    b = float(sys.argv[2]) if len(sys.argv) > 2 else 2.0
    study(a, b)
