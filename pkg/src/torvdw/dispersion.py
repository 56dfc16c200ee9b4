"""Non-retarded dispersion interaction on the toroid axis.

For a particle polarizable only along the axis, the interaction energy is

    U(z_p) = <d_z^2> / (2 eps0) * d^2 G_H / dz dz' |_{z = z' = z_p},

with G_H = eps0 V_H / q the homogeneous Green's kernel of the grounded
toroid.  On the axis G_H depends on z only through theta = arccot(z / f),
and the mixed derivative evaluates term by term.  At coincident points
every term collapses to an explicit rational function of z_p:

    d^2 G_H / dz dz' = -(f / 2 pi^2) sum_n (2 - delta_n0)
                       R_n (z_p^2 + 4 n^2 f^2) / (f^2 + z_p^2)^3,

with R_n = Q_{n-1/2}(a/b) / P_{n-1/2}(a/b) > 0 -- manifestly negative, so
the energy is attractive-in-sign everywhere while its *gradient* can point
either way.  The force is the term-by-term analytic derivative

    F_z = -dU/dz_p
        = 2 C z_p sum_n (2 - delta_n0) R_n [(1 - 12 n^2) f^2 - 2 z_p^2]
          / (f^2 + z_p^2)^4,          C = <d_z^2> K_E f / pi,

odd in z_p and vanishing at the origin.  The n = 0 term pushes the
particle away from the origin; the n >= 1 terms pull it in.  Their balance
is set by the decay rate of R_n (that is, by a/b), which is the whole
repulsion-versus-attraction story: thin rings repel nearby axial
particles, fat ones never do.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    NoSignChangeError,
    RangeExceededError,
    TruncationError,
    UnsupportedConfigurationError,
)
from .geometry import toroid_from_radii
from .greens import AxialGreens, axial_greens
from .units import K_E_EV_NM, d2z_to_e2nm2

__all__ = [
    "ForceProfile",
    "ParticleModel",
    "SweepGrid",
    "critical_ratio",
    "find_force_zero",
    "force_profile",
    "gh_mixed_derivative",
    "particle_model",
    "sweep_contour",
    "vdw_energy",
    "vdw_force",
]


@dataclass(frozen=True)
class ParticleModel:
    """Axially polarizable particle: <d_z^2> in (e nm)^2, transverse zero."""

    d2z: float

    def __post_init__(self):
        if not self.d2z > 0.0:
            raise ValueError(f"<d_z^2> must be positive, got {self.d2z}")


def particle_model(
    d2z: float,
    unit: str = "e2nm2",
    d2x: float = 0.0,
    d2y: float = 0.0,
) -> ParticleModel:
    """Build the particle model.

    Only the axial fluctuation enters the on-axis interaction; transverse
    components would need the off-axis derivative machinery this model
    does not carry, so nonzero d2x/d2y are rejected rather than ignored.
    """
    if d2x != 0.0 or d2y != 0.0:
        raise UnsupportedConfigurationError(
            "only axially polarizable particles are supported; "
            f"got <d_x^2> = {d2x}, <d_y^2> = {d2y}"
        )
    return ParticleModel(d2z=d2z_to_e2nm2(float(d2z), unit))


def _weights(g: AxialGreens) -> np.ndarray:
    n = np.arange(g.table.n_max + 1)
    return np.where(n == 0, 1.0, 2.0) * g.table.ratio


def _sum_adaptive_grid(
    terms: np.ndarray, decay: np.ndarray, rel_tol: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-column adaptive truncation of a (n_terms x n_points) term matrix.

    Same stopping rule as the scalar series: three consecutive terms below
    rel_tol of the running sum and the decay envelope down to rel_tol of
    its head.  Returns (values, n_used, converged); unconverged columns
    hold the full partial sum.
    """
    acc = np.cumsum(terms, axis=0)
    scale = np.abs(acc)
    tiny = np.finfo(float).tiny
    scale[scale == 0.0] = tiny
    small = np.abs(terms) <= rel_tol * scale
    ok = small.copy()
    ok[1:] &= small[:-1]
    ok[2:] &= small[:-2]
    ok &= (decay <= rel_tol * decay[0])[:, None]
    converged = ok.any(axis=0)
    stop = np.argmax(ok, axis=0)
    stop[~converged] = terms.shape[0] - 1
    cols = np.arange(terms.shape[1])
    return acc[stop, cols], stop, converged


def _mixed_same_point(
    z_p: np.ndarray, g: AxialGreens
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """d^2 G_H / dz dz' at coincident axis points, vectorized (1/nm^3)."""
    f = g.geometry.f
    w = _weights(g)
    n = np.arange(w.size)
    z_p = np.atleast_1d(np.asarray(z_p, dtype=float))
    denom = (f * f + z_p * z_p) ** 3
    terms = w[:, None] * (z_p[None, :] ** 2 + (4.0 * f * f) * n[:, None] ** 2)
    values, n_used, convg = _sum_adaptive_grid(terms, g.table.ratio, g.rel_tol)
    return -(f / (2.0 * math.pi**2)) * values / denom, n_used, convg


def gh_mixed_derivative(z: float, z_prime: float, g: AxialGreens) -> float:
    """d^2 G_H / dz dz' at two axis heights (1/nm^3), term-by-term analytic.

    Symmetric in (z, z'); at z = z' it reduces to the rational closed form
    used by vdw_energy.

    Raises
    ------
    TruncationError
        If the differentiated series does not converge within the cap.
    """
    f = g.geometry.f
    w = _weights(g)
    n = np.arange(w.size)

    def u(t):
        return 1.0 / math.sqrt(f * f + t * t)

    def du(t):
        return -t * (f * f + t * t) ** -1.5

    def dtheta(t):
        return -f / (f * f + t * t)

    phi = 2.0 * n * (math.atan2(f, z) - math.atan2(f, z_prime))
    cos_phi = np.cos(phi)
    sin_phi = np.sin(phi)
    terms = w * (
        du(z) * du(z_prime) * cos_phi
        + 2.0 * n * sin_phi * (du(z) * u(z_prime) * dtheta(z_prime)
                               - u(z) * du(z_prime) * dtheta(z))
        + 4.0 * n**2 * u(z) * u(z_prime) * dtheta(z) * dtheta(z_prime) * cos_phi
    )
    value, _, convg = _sum_adaptive_grid(terms[:, None], g.table.ratio, g.rel_tol)
    if not convg[0]:
        raise TruncationError(
            f"mixed-derivative series not converged after {terms.size} terms",
            partial_sum=value[0],
            bound=abs(terms[-1]),
            n_terms=terms.size,
        )
    return float(-(f / (2.0 * math.pi**2)) * value[0])


def _energy_prefactor(p: ParticleModel) -> float:
    # <d_z^2>/(2 eps0) in eV nm^3 per (e nm)^2 of fluctuation.
    return p.d2z * 2.0 * math.pi * K_E_EV_NM


def vdw_energy(z_p, p: ParticleModel, g: AxialGreens):
    """Dispersion energy U(z_p) in eV; scalar in, scalar out (or ndarray).

    Negative for every height and every geometry, and even in z_p.
    """
    z_arr = np.atleast_1d(np.asarray(z_p, dtype=float))
    d2g, _, convg = _mixed_same_point(z_arr, g)
    if not convg.all():
        raise TruncationError(
            "energy series not converged within the term cap",
            partial_sum=float(d2g[~convg][0]) * _energy_prefactor(p),
            bound=float("nan"),
            n_terms=g.table.n_max + 1,
        )
    out = _energy_prefactor(p) * d2g
    return float(out[0]) if np.isscalar(z_p) or np.asarray(z_p).ndim == 0 else out


def _force_grid(z_p: np.ndarray, p: ParticleModel, g: AxialGreens):
    f = g.geometry.f
    w = _weights(g)
    n = np.arange(w.size)
    z_p = np.atleast_1d(np.asarray(z_p, dtype=float))
    denom = (f * f + z_p * z_p) ** 4
    bracket = (1.0 - 12.0 * n[:, None] ** 2) * f * f - 2.0 * z_p[None, :] ** 2
    terms = w[:, None] * bracket
    values, n_used, convg = _sum_adaptive_grid(terms, g.table.ratio, g.rel_tol)
    pref = 2.0 * (p.d2z * K_E_EV_NM / math.pi) * f
    return pref * z_p * values / denom, n_used, convg


def vdw_force(z_p, p: ParticleModel, g: AxialGreens):
    """Axial force F_z = -dU/dz_p in eV/nm by term-by-term differentiation.

    Odd in z_p with F_z(0) = 0.  Positive values push the particle away
    from the origin (repulsion), negative pull it back.
    """
    z_arr = np.atleast_1d(np.asarray(z_p, dtype=float))
    force, _, convg = _force_grid(z_arr, p, g)
    if not convg.all():
        raise TruncationError(
            "force series not converged within the term cap",
            partial_sum=float(force[~convg][0]),
            bound=float("nan"),
            n_terms=g.table.n_max + 1,
        )
    return float(force[0]) if np.isscalar(z_p) or np.asarray(z_p).ndim == 0 else force


@dataclass(frozen=True)
class ForceProfile:
    """Energy and force sampled on a height grid, with scale metadata."""

    z_p: np.ndarray
    energy: np.ndarray
    force: np.ndarray
    energy_scale: float   # |U| at z_p = 0, for normalized plots
    force_scale: float    # max |F| on the grid
    n_used: np.ndarray    # series terms consumed per point (worst of U, F)


def force_profile(z_grid, p: ParticleModel, g: AxialGreens) -> ForceProfile:
    """Evaluate U and F on a grid and record normalization scales."""
    z_grid = np.array(z_grid, dtype=float)
    energy = vdw_energy(z_grid, p, g)
    force = vdw_force(z_grid, p, g)
    _, n_used_e, _ = _mixed_same_point(z_grid, g)
    _, n_used_f, _ = _force_grid(z_grid, p, g)
    n_used = np.maximum(n_used_e, n_used_f)
    for arr in (z_grid, energy, force, n_used):
        arr.flags.writeable = False
    return ForceProfile(
        z_p=z_grid,
        energy=energy,
        force=force,
        energy_scale=abs(float(vdw_energy(0.0, p, g))),
        force_scale=float(np.max(np.abs(force))) if force.size else 0.0,
        n_used=n_used,
    )


def find_force_zero(
    p: ParticleModel, g: AxialGreens, bracket: tuple[float, float]
) -> float:
    """Bisect the force sign change inside the bracket.

    The zero height is independent of <d_z^2>, which only scales the force.

    Raises
    ------
    NoSignChangeError
        If the force has the same sign at both ends (the all-attractive
        regime of fat toroids).
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if lo >= hi:
        raise ValueError(f"bracket must be ordered, got {bracket}")
    f_lo = vdw_force(lo, p, g)
    f_hi = vdw_force(hi, p, g)
    if math.copysign(1.0, f_lo) == math.copysign(1.0, f_hi):
        raise NoSignChangeError(
            f"force does not change sign on [{lo}, {hi}] "
            f"(F = {f_lo:.3e} and {f_hi:.3e}); no repulsion zone to bound"
        )
    f_scale = max(abs(f_lo), abs(f_hi))
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = vdw_force(mid, p, g)
        if abs(f_mid) <= 1e-10 * f_scale or (hi - lo) <= 1e-15 * max(1.0, abs(mid)):
            return mid
        if math.copysign(1.0, f_mid) == math.copysign(1.0, f_lo):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def critical_ratio(
    z_p: float,
    b: float,
    p: ParticleModel,
    search: tuple[float, float] = (1.01, 1000.0),
    rel_resolution: float = 1e-4,
    rel_tol: float = 1e-12,
    n_cap: int = 2000,
) -> float:
    """Smallest a/b at which the force at height z_p turns repulsive.

    Scans a geometric grid over the search range for the attractive to
    repulsive sign change, then bisects in log(a/b) to the requested
    relative resolution.  Non-decreasing in z_p: farther targets need
    thinner rings.

    Raises
    ------
    RangeExceededError
        If the force is already repulsive at the low end or never becomes
        repulsive by the high end; carries the bound that was hit.
    """
    if z_p <= 0.0 or b <= 0.0:
        raise ValueError(f"need z_p > 0 and b > 0, got z_p = {z_p}, b = {b}")
    lo, hi = float(search[0]), float(search[1])
    if not 1.0 < lo < hi:
        raise ValueError(f"search range must satisfy 1 < lo < hi, got {search}")

    def force_at(ratio: float) -> float:
        geom = toroid_from_radii(ratio * b, b)
        g = axial_greens(geom, rel_tol=rel_tol, n_cap=n_cap)
        return vdw_force(z_p, p, g)

    grid = np.geomspace(lo, hi, 65)
    signs = [force_at(r) > 0.0 for r in grid]
    if signs[0]:
        raise RangeExceededError(
            f"force already repulsive at a/b = {lo}; threshold below range",
            bound=lo,
        )
    if not any(signs):
        raise RangeExceededError(
            f"force still attractive at a/b = {hi}; threshold above range",
            bound=hi,
        )
    k = signs.index(True)
    r_lo, r_hi = grid[k - 1], grid[k]
    while r_hi / r_lo - 1.0 > rel_resolution:
        mid = math.sqrt(r_lo * r_hi)
        if force_at(mid) > 0.0:
            r_hi = mid
        else:
            r_lo = mid
    return math.sqrt(r_lo * r_hi)


@dataclass(frozen=True)
class SweepGrid:
    """F_z over an (a, z_p) grid at fixed b; failed cells are NaN."""

    a_values: np.ndarray
    z_values: np.ndarray
    b: float
    force: np.ndarray               # shape (len(z_values), len(a_values))
    diagnostics: tuple              # (i_z, j_a, message) per failed cell


def sweep_contour(
    a_values,
    z_values,
    b: float,
    p: ParticleModel,
    rel_tol: float = 1e-12,
    n_cap: int = 2000,
) -> SweepGrid:
    """Force over the (a, z_p) grid; per-cell failures recorded, not fatal.

    Columns reuse one evaluator per a value, and every cell is the same
    arithmetic as a scalar vdw_force call at that point.  Cells are
    independent pure evaluations, so columns can safely be farmed out to
    worker threads or processes; the returned grid is immutable.
    """
    a_values = np.asarray(a_values, dtype=float)
    z_values = np.asarray(z_values, dtype=float)
    if a_values.size == 0 or z_values.size == 0:
        raise ValueError("a and z grids must be non-empty")
    if not np.all(a_values > b):
        raise ValueError("every a must exceed b")

    force = np.full((z_values.size, a_values.size), np.nan)
    diags = []
    for j, a in enumerate(a_values):
        g = axial_greens(toroid_from_radii(a, b), rel_tol=rel_tol, n_cap=n_cap)
        col, _, convg = _force_grid(z_values, p, g)
        force[:, j] = np.where(convg, col, np.nan)
        for i in np.nonzero(~convg)[0]:
            diags.append((int(i), int(j), "series not converged within cap"))
    force.flags.writeable = False
    return SweepGrid(
        a_values=a_values,
        z_values=z_values,
        b=float(b),
        force=force,
        diagnostics=tuple(diags),
    )
