"""Command-line front end.

Subcommands: geom, potential, charge-energy, vdw, sweep-ratio, contour,
validate.  Tables go to stdout or --out as RFC-4180 CSV (or JSON with the
fixed schema {config, columns, rows, diagnostics}); plot-producing
commands written to a file also emit a gnuplot script next to it.

Exit codes: 0 success, 1 validation failure, 2 configuration error,
3 numerical (truncation) failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .dispersion import (
    force_profile,
    particle_model,
    sweep_contour,
    vdw_force,
)
from .errors import TruncationError
from .geometry import ToroidalCoords, surface_rz, toroid_from_radii
from .greens import (
    axial_greens,
    axial_source,
    charge_interaction_energy,
    charge_interaction_energy_info,
    vh_potential_info,
)
from .units import D2Z_UNIT_FACTORS
from .validate import run_battery

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


@dataclass(frozen=True)
class RunConfig:
    """Validated shared configuration of a table-producing command."""

    b: float
    a: float | None = None
    d2z: float = 1.0
    d2z_unit: str = "e2nm2"
    tol: float = 1e-12
    n_cap: int = 2000
    fmt: str = "csv"
    normalize: bool = True
    out: str | None = None
    grid_counts: tuple = ()

    def __post_init__(self):
        if self.a is not None and not self.a > self.b > 0.0:
            raise ValueError(
                f"radii must satisfy a > b > 0, got a = {self.a}, b = {self.b}"
            )
        if not 0.0 < self.tol <= 1e-4:
            raise ValueError(f"--tol must lie in (0, 1e-4], got {self.tol}")
        if self.n_cap < 8:
            raise ValueError(f"--ncap must be at least 8, got {self.n_cap}")
        for count in self.grid_counts:
            if count < 2:
                raise ValueError(f"grids need at least 2 points, got {count}")
            if count > 100000:
                raise ValueError(f"grid of {count} points is unreasonably large")

    @classmethod
    def from_args(cls, args, grid_attrs=()):
        return cls(
            b=args.b,
            a=getattr(args, "a", None),
            d2z=getattr(args, "d2z", 1.0),
            d2z_unit=getattr(args, "d2z_unit", "e2nm2"),
            tol=args.tol,
            n_cap=args.ncap,
            fmt=getattr(args, "format", "csv"),
            normalize=getattr(args, "normalize", True),
            out=getattr(args, "out", None),
            grid_counts=tuple(getattr(args, name) for name in grid_attrs),
        )


def _add_common(p: argparse.ArgumentParser, geometry: bool = True) -> None:
    if geometry:
        p.add_argument("--a", type=float, required=True, help="center-circle radius (nm)")
    p.add_argument("--b", type=float, required=True, help="tube radius (nm)")
    p.add_argument("--tol", type=float, default=1e-12, help="series truncation tolerance")
    p.add_argument("--ncap", type=int, default=2000, help="series term cap")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument(
        "--normalize",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="emit normalized columns alongside raw values",
    )
    p.add_argument("--out", type=str, default=None, help="output path (default stdout)")


def _add_zgrid(p: argparse.ArgumentParser, zmin: float, zmax: float, n: int) -> None:
    p.add_argument("--zmin", type=float, default=zmin)
    p.add_argument("--zmax", type=float, default=zmax)
    p.add_argument("--zpoints", type=int, default=n)


def _add_particle(p: argparse.ArgumentParser) -> None:
    p.add_argument("--d2z", type=float, default=1.0, help="squared axial dipole fluctuation")
    p.add_argument("--d2z-unit", choices=sorted(D2Z_UNIT_FACTORS), default="e2nm2")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="torvdw",
        description="Grounded-toroid electrostatics and axial van der Waals forces",
    )
    ap.add_argument("--version", action="version", version=f"torvdw {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("geom", help="derived geometry report")
    _add_common(p)

    p = sub.add_parser("potential", help="induced-charge potential profile")
    _add_common(p)
    _add_zgrid(p, -20.0, 20.0, 201)
    p.add_argument("--source-z", type=float, default=0.0, help="source height (nm)")
    p.add_argument("--cut", choices=("axis", "plane"), default="axis")

    p = sub.add_parser("charge-energy", help="charge / induced-charge energy profile")
    _add_common(p)
    _add_zgrid(p, -20.0, 20.0, 201)
    p.add_argument("--charge", type=float, default=1.0, help="source charge (e)")

    p = sub.add_parser("vdw", help="dispersion energy / force profile")
    _add_common(p)
    _add_zgrid(p, -10.0, 10.0, 201)
    _add_particle(p)
    p.add_argument("--quantity", choices=("energy", "force", "both"), default="both")

    p = sub.add_parser("sweep-ratio", help="force vs a/b at fixed heights")
    _add_common(p, geometry=False)
    _add_particle(p)
    p.add_argument("--zp", type=float, action="append", default=None,
                   help="particle height (nm); repeatable (default 1 2 3)")
    p.add_argument("--ratio-min", type=float, default=1.5)
    p.add_argument("--ratio-max", type=float, default=10.0)
    p.add_argument("--ratio-points", type=int, default=96)

    p = sub.add_parser("contour", help="force over the (a/b, z_p/b) grid")
    _add_common(p, geometry=False)
    _add_particle(p)
    p.add_argument("--ratio-min", type=float, default=1.5)
    p.add_argument("--ratio-max", type=float, default=10.0)
    p.add_argument("--ratio-points", type=int, default=48)
    _add_zgrid(p, 0.0, 10.0, 49)

    p = sub.add_parser("validate", help="run the full cross-check battery")
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--ncap", type=int, default=2000)

    return ap


def _emit_table(cfg: RunConfig, args, columns, rows, diagnostics, gnuplot_cols=None):
    """Write a table as CSV or JSON to --out (or stdout), plus a gnuplot
    script referencing the CSV by relative path when writing to a file."""
    if cfg.fmt == "json":
        payload = {
            "config": _config_echo(args),
            "columns": columns,
            "rows": [[_jsonify(v) for v in row] for row in rows],
            "diagnostics": diagnostics,
        }
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf)  # RFC-4180: CRLF line endings
        w.writerow(columns)
        w.writerows([[_fmt(v) for v in row] for row in rows])
        text = buf.getvalue()

    if cfg.out is None:
        sys.stdout.write(text)
        return
    with open(cfg.out, "w", newline="") as fh:
        fh.write(text)
    if cfg.fmt == "csv" and gnuplot_cols:
        _write_gnuplot_script(cfg.out, columns, gnuplot_cols)


def _write_gnuplot_script(out_path: str, columns, gnuplot_cols) -> None:
    base = os.path.basename(out_path)
    lines = [
        "set datafile separator ','",
        "set key autotitle columnhead",
        "set grid",
        f"set xlabel '{columns[0]}'",
        "plot " + ", \\\n     ".join(
            f"'{base}' using 1:{i + 1} with lines" for i in gnuplot_cols
        ),
    ]
    with open(out_path + ".gp", "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _config_echo(args) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if not k.startswith("_")}
    cfg["version"] = __version__
    return cfg


def _jsonify(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def _fmt(x: float) -> str:
    return repr(float(x))


def cmd_geom(args) -> int:
    RunConfig.from_args(args)
    geom = toroid_from_radii(args.a, args.b)
    etas = np.linspace(-math.pi, math.pi, 181)[1:]
    r, z = surface_rz(geom, etas)
    surf = np.abs((r - geom.a) ** 2 + z**2 - geom.b**2) / geom.b**2
    # spherical-calotte identity at eta0 = pi/2:
    # (z - f cot eta0)^2 + r^2 = (f / sin eta0)^2
    eta0 = 0.5 * math.pi
    xis = np.linspace(0.05, 4.0, 80)
    rc = geom.f * np.sinh(xis) / (np.cosh(xis) - math.cos(eta0))
    zc = geom.f * math.sin(eta0) / (np.cosh(xis) - math.cos(eta0))
    cal = np.abs((zc - geom.f / math.tan(eta0)) ** 2 + rc**2
                 - (geom.f / math.sin(eta0)) ** 2) / geom.f**2
    print(f"a         = {geom.a:.12g} nm")
    print(f"b         = {geom.b:.12g} nm")
    print(f"f         = {geom.f:.12g} nm")
    print(f"xi0       = {geom.xi0:.12g}")
    print(f"cosh xi0  = {geom.cosh_xi0:.12g}")
    print(f"surface-equation residual (max over eta): {surf.max():.3e}")
    print(f"calotte-equation residual (max over xi):  {cal.max():.3e}")
    return EXIT_OK


def cmd_potential(args) -> int:
    cfg = RunConfig.from_args(args, grid_attrs=("zpoints",))
    geom = toroid_from_radii(cfg.a, cfg.b)
    g = axial_greens(geom, rel_tol=cfg.tol, n_cap=cfg.n_cap)
    src = axial_source(args.source_z, geom)

    if args.cut == "axis":
        grid = np.linspace(args.zmin, args.zmax, args.zpoints)
        fields = [ToroidalCoords(xi=0.0, eta=2.0 * math.atan2(geom.f, zz)) for zz in grid]
        label = "z_nm"
    else:
        r_max = (geom.a - geom.b) * (1.0 - 1e-9)
        grid = np.linspace(0.0, r_max, args.zpoints)
        # on the central disk eta = pi, r = f tanh(xi / 2)
        fields = [
            ToroidalCoords(xi=2.0 * math.atanh(rr / geom.f), eta=math.pi)
            for rr in grid
        ]
        label = "r_nm"

    infos = [vh_potential_info(fld, src, g) for fld in fields]
    ref = vh_potential_info(ToroidalCoords(xi=0.0, eta=math.pi), src, g).value
    columns = [label, "VH_V"]
    rows = [[float(x), i.value] for x, i in zip(grid, infos)]
    if cfg.normalize:
        columns.append("VH_norm")
        for row, i in zip(rows, infos):
            row.append(i.value / abs(ref))
    diagnostics = {"n_used": [i.n_used for i in infos], "normalization_V": abs(ref)}
    _emit_table(cfg, args, columns, rows, diagnostics,
                gnuplot_cols=[len(columns)])
    return EXIT_OK


def cmd_charge_energy(args) -> int:
    cfg = RunConfig.from_args(args, grid_attrs=("zpoints",))
    geom = toroid_from_radii(cfg.a, cfg.b)
    g = axial_greens(geom, rel_tol=cfg.tol, n_cap=cfg.n_cap)
    grid = np.linspace(args.zmin, args.zmax, args.zpoints)
    infos = [charge_interaction_energy_info(zz, g, charge=args.charge) for zz in grid]
    ref = abs(charge_interaction_energy(0.0, g, charge=args.charge))
    columns = ["zprime_nm", "U_eV"]
    rows = [[float(z), i.value] for z, i in zip(grid, infos)]
    if cfg.normalize:
        columns.append("U_norm")
        for row, i in zip(rows, infos):
            row.append(i.value / ref)
    diagnostics = {"n_used": [i.n_used for i in infos], "normalization_eV": ref}
    _emit_table(cfg, args, columns, rows, diagnostics,
                gnuplot_cols=[len(columns)])
    return EXIT_OK


def cmd_vdw(args) -> int:
    cfg = RunConfig.from_args(args, grid_attrs=("zpoints",))
    geom = toroid_from_radii(cfg.a, cfg.b)
    g = axial_greens(geom, rel_tol=cfg.tol, n_cap=cfg.n_cap)
    p = particle_model(cfg.d2z, unit=cfg.d2z_unit)
    grid = np.linspace(args.zmin, args.zmax, args.zpoints)
    prof = force_profile(grid, p, g)

    columns = ["zp_nm"]
    cols_data = [grid]
    if args.quantity in ("energy", "both"):
        columns.append("U_eV")
        cols_data.append(prof.energy)
        if cfg.normalize:
            columns.append("U_norm")
            cols_data.append(prof.energy / prof.energy_scale)
    if args.quantity in ("force", "both"):
        columns.append("F_eV_per_nm")
        cols_data.append(prof.force)
        if cfg.normalize:
            columns.append("F_norm")
            scale = prof.force_scale if prof.force_scale > 0.0 else 1.0
            cols_data.append(prof.force / scale)
    rows = [[float(col[i]) for col in cols_data] for i in range(grid.size)]
    diagnostics = {
        "n_used": [int(n) for n in prof.n_used],
        "energy_scale_eV": prof.energy_scale,
        "force_scale_eV_per_nm": prof.force_scale,
        "series_terms_available": int(g.table.n_max + 1),
    }
    _emit_table(cfg, args, columns, rows, diagnostics,
                gnuplot_cols=list(range(2, len(columns) + 1)))
    return EXIT_OK


def cmd_sweep_ratio(args) -> int:
    cfg = RunConfig.from_args(args, grid_attrs=("ratio_points",))
    zp_list = args.zp if args.zp else [1.0, 2.0, 3.0]
    if any(z <= 0.0 for z in zp_list):
        raise ValueError("--zp heights must be positive")
    if args.ratio_min <= 1.0 or args.ratio_max <= args.ratio_min:
        raise ValueError("need 1 < ratio-min < ratio-max")
    ratios = np.linspace(args.ratio_min, args.ratio_max, args.ratio_points)
    p = particle_model(cfg.d2z, unit=cfg.d2z_unit)

    table = np.empty((ratios.size, len(zp_list)))
    for i, ratio in enumerate(ratios):
        g = axial_greens(
            toroid_from_radii(ratio * cfg.b, cfg.b),
            rel_tol=cfg.tol,
            n_cap=cfg.n_cap,
        )
        for j, zp in enumerate(zp_list):
            table[i, j] = vdw_force(zp, p, g)

    columns = ["a_over_b"] + [f"F_zp{zp:g}_eV_per_nm" for zp in zp_list]
    rows = [
        [float(ratios[i])] + [float(table[i, j]) for j in range(len(zp_list))]
        for i in range(ratios.size)
    ]
    crossings = {}
    for j, zp in enumerate(zp_list):
        sgn = table[:, j] > 0.0
        idx = np.nonzero(sgn[1:] != sgn[:-1])[0]
        crossings[f"zp={zp:g}"] = (
            float(0.5 * (ratios[idx[0]] + ratios[idx[0] + 1])) if idx.size else None
        )
    _emit_table(cfg, args, columns, rows,
                {"zero_crossings_a_over_b": crossings},
                gnuplot_cols=list(range(2, len(columns) + 1)))
    return EXIT_OK


def cmd_contour(args) -> int:
    cfg = RunConfig.from_args(args, grid_attrs=("ratio_points", "zpoints"))
    if args.ratio_min <= 1.0 or args.ratio_max <= args.ratio_min:
        raise ValueError("need 1 < ratio-min < ratio-max")
    if cfg.out is None:
        raise ValueError("contour requires --out (matrix plus gnuplot script)")
    ratios = np.linspace(args.ratio_min, args.ratio_max, args.ratio_points)
    zps = np.linspace(args.zmin, args.zmax, args.zpoints)
    p = particle_model(cfg.d2z, unit=cfg.d2z_unit)
    grid = sweep_contour(ratios * cfg.b, zps * cfg.b, cfg.b, p,
                         rel_tol=cfg.tol, n_cap=cfg.n_cap)

    if cfg.fmt == "json":
        payload = {
            "config": _config_echo(args),
            "columns": ["zp_over_b"] + [float(r) for r in ratios],
            "rows": [
                [float(zps[i])] + [_jsonify(v) for v in grid.force[i]]
                for i in range(zps.size)
            ],
            "diagnostics": {"failed_cells": list(grid.diagnostics)},
        }
        with open(cfg.out, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        return EXIT_OK

    # gnuplot "nonuniform matrix": first row is <N> then the column coords
    with open(cfg.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([ratios.size] + [_fmt(r) for r in ratios])
        for i in range(zps.size):
            w.writerow([_fmt(zps[i])] + [_fmt(v) for v in grid.force[i]])
    base = os.path.basename(cfg.out)
    script = "\n".join(
        [
            "set datafile separator ','",
            "set view map",
            "set xlabel 'a/b'",
            "set ylabel 'z_p/b'",
            "set cblabel 'F_z (eV/nm)'",
            f"splot '{base}' nonuniform matrix with pm3d notitle",
        ]
    )
    with open(cfg.out + ".gp", "w") as fh:
        fh.write(script + "\n")
    if grid.diagnostics:
        print(f"warning: {len(grid.diagnostics)} cells failed to converge",
              file=sys.stderr)
    return EXIT_OK


def cmd_validate(args) -> int:
    if not 0.0 < args.tol <= 1e-4:
        raise ValueError(f"--tol must lie in (0, 1e-4], got {args.tol}")
    results = run_battery(rel_tol=args.tol, n_cap=args.ncap)
    width = max(len(r.name) for r in results)
    all_ok = True
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        all_ok &= r.passed
        print(f"{status}  {r.name:<{width}}  {r.value:.3e} vs {r.threshold:.0e}  ({r.detail})")
    print("validation:", "PASS" if all_ok else "FAIL")
    return EXIT_OK if all_ok else EXIT_VALIDATION


_COMMANDS = {
    "geom": cmd_geom,
    "potential": cmd_potential,
    "charge-energy": cmd_charge_energy,
    "vdw": cmd_vdw,
    "sweep-ratio": cmd_sweep_ratio,
    "contour": cmd_contour,
    "validate": cmd_validate,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except TruncationError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OverflowError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
