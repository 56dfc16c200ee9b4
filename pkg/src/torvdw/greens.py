"""Electrostatics of a point charge on the axis of a grounded toroid.

The potential outside the conductor splits into the bare Coulomb term and
a homogeneous part V_H created by the induced surface charge.  With the
source on the axis (xi' = 0, eta' from its height z') and the surface at
xi = xi0, V_H has the separable expansion

    V_H(xi, eta) = -(q / 4 pi^2 eps0 f) sqrt(cosh xi - cos eta)
                   * sqrt(1 - cos eta')
                   * sum_n (2 - delta_n0) cos[n (eta - eta')]
                     Q_{n-1/2}(cosh xi0) P_{n-1/2}(cosh xi) / P_{n-1/2}(cosh xi0)

valid for 0 <= xi <= xi0, which by construction cancels the Coulomb
potential on the surface.  The same machinery evaluates the expansion of
the bare inverse distance (Q at the field argument, P at the axis value 1)
used for self-validation.

Everything internal works in reduced potential V / (K_E q), units 1/nm.
"""

from __future__ import annotations

import math
import threading
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    CoincidentPointsError,
    FarSourceWarning,
    OutOfRegionError,
    TruncationError,
)
from .geometry import (
    ToroidGeometry,
    ToroidalCoords,
    axis_eta_from_z,
    surface_rz,
)
from .specfun import Z_MIN_OFFSET, HarmonicTable, harmonic_table, legendre_p_half
from .units import K_E_EV_NM

__all__ = [
    "AxialGreens",
    "AxialSource",
    "SeriesInfo",
    "axial_greens",
    "axial_source",
    "charge_interaction_energy",
    "inverse_distance_series",
    "surface_residual",
    "vh_potential",
    "vh_potential_info",
]

#: |z_src| beyond this multiple of f is physically a detached source; the
#: (1 - cos eta') factor then underflows toward zero.
FAR_SOURCE_FACTOR = 1e6


@dataclass(frozen=True)
class AxialSource:
    """Point charge on the symmetry axis.

    z_src in nm, charge in elementary charges; eta_src is the continuous
    on-axis branch 2 atan2(f, z_src) in (0, 2 pi).
    """

    z_src: float
    eta_src: float
    charge: float


def axial_source(z_src: float, geom: ToroidGeometry, charge: float = 1.0) -> AxialSource:
    """Place a point charge on the axis of the given toroid."""
    z_src = float(z_src)
    if abs(z_src) > FAR_SOURCE_FACTOR * geom.f:
        warnings.warn(
            f"source at |z| = {abs(z_src)} nm is beyond {FAR_SOURCE_FACTOR:g} "
            "focal lengths; the induced potential is vanishingly small",
            FarSourceWarning,
            stacklevel=2,
        )
    return AxialSource(
        z_src=z_src,
        eta_src=axis_eta_from_z(z_src, geom.f),
        charge=float(charge),
    )


@dataclass(frozen=True)
class AxialGreens:
    """Geometry, truncation policy and the cached ratio table at cosh(xi0).

    normalization selects the reporting convention of vh_potential:
    "si" gives volts for the source's charge, "reduced" gives the
    dimensionless value in units of q / (4 pi eps0 f).
    """

    geometry: ToroidGeometry
    table: HarmonicTable
    rel_tol: float
    n_cap: int
    normalization: str


def _table_size(xi: float, rel_tol: float, n_cap: int) -> int:
    # Terms decay like e^{-n xi} at worst (on the surface); size the table
    # so the triple-small-term stop can always trigger within it, but never
    # past the float64 horizon of the ratio entries.
    need = int(math.ceil((-math.log(rel_tol) + 14.0) / xi)) + 16
    horizon = int(330.0 / xi)
    return max(4, min(n_cap, need, horizon))


def axial_greens(
    geom: ToroidGeometry,
    rel_tol: float = 1e-12,
    n_cap: int = 2000,
    normalization: str = "si",
) -> AxialGreens:
    """Build the evaluator for the given toroid and truncation policy."""
    if not 0.0 < rel_tol < 1.0:
        raise ValueError(f"rel_tol must lie in (0, 1), got {rel_tol}")
    if n_cap < 8:
        raise ValueError(f"n_cap must be at least 8, got {n_cap}")
    if normalization not in ("si", "reduced"):
        raise ValueError(
            f"normalization must be 'si' or 'reduced', got {normalization!r}"
        )
    table = harmonic_table(geom.cosh_xi0, _table_size(geom.xi0, rel_tol, n_cap))
    return AxialGreens(
        geometry=geom,
        table=table,
        rel_tol=float(rel_tol),
        n_cap=int(n_cap),
        normalization=normalization,
    )


class SeriesInfo(NamedTuple):
    value: float
    n_used: int


def _adaptive_sum(terms: np.ndarray, decay: np.ndarray, rel_tol: float) -> SeriesInfo:
    """Sum an oscillating series under the truncation policy.

    Stops at the first n where the term magnitude has stayed below
    rel_tol * |partial sum| for 3 consecutive terms (single-term smallness
    is unreliable under the cos factors) and the monotone decay envelope
    has fallen to decay[n] <= rel_tol * decay[0].

    Raises
    ------
    TruncationError
        If the criterion is not met by the end of the term array (the
        configured cap), carrying the partial sum and a tail estimate.
    """
    acc = np.cumsum(terms)
    scale = np.abs(acc)
    scale[scale == 0.0] = np.finfo(float).tiny
    small = np.abs(terms) <= rel_tol * scale
    ok = small.copy()
    ok[1:] &= small[:-1]
    ok[2:] &= small[:-2]
    ok &= decay <= rel_tol * decay[0]
    hits = np.nonzero(ok)[0]
    if hits.size == 0:
        last = abs(float(terms[-1]))
        prev = abs(float(terms[-2])) if terms.size > 1 else 0.0
        rho = min(0.99, last / prev) if prev > 0.0 else 0.5
        raise TruncationError(
            f"series not converged after {terms.size} terms "
            f"(last relative term {last / float(scale[-1]):.2e})",
            partial_sum=acc[-1],
            bound=last * rho / (1.0 - rho),
            n_terms=terms.size,
        )
    stop = int(hits[0])
    return SeriesInfo(value=float(acc[stop]), n_used=stop)


def _one_minus_cos_eta_src(src: AxialSource, f: float) -> float:
    # 1 - cos(eta') = 2 f^2 / (f^2 + z'^2) on the axis; exact and stable
    # for sources far out where the trig form would cancel.
    return 2.0 * f * f / (f * f + src.z_src * src.z_src)


def _cosh_minus_cos(xi: float, eta: float) -> float:
    return 2.0 * math.sinh(0.5 * xi) ** 2 + 2.0 * math.sin(0.5 * eta) ** 2


def _vh_reduced(field: ToroidalCoords, src: AxialSource, g: AxialGreens) -> SeriesInfo:
    """V_H / (K_E q) at the field point, in 1/nm."""
    geom = g.geometry
    table = g.table
    if field.xi > geom.xi0 * (1.0 + 1e-12):
        raise OutOfRegionError(
            f"field point xi = {field.xi} lies inside the conductor "
            f"(xi0 = {geom.xi0})"
        )

    n = np.arange(table.n_max + 1)
    two_minus_delta = np.where(n == 0, 1.0, 2.0)
    # Q(cosh xi0) P(cosh xi) / P(cosh xi0) = ratio[n] * P(cosh xi); on the
    # axis P_{n-1/2}(1) = 1.  The P ratio is <= 1 for xi <= xi0, so
    # table.ratio remains a valid decay envelope for the stopping rule.
    cosh_xi = math.cosh(field.xi)
    if field.xi == 0.0:
        radial = table.ratio
    elif abs(cosh_xi - table.z) <= 4.0 * np.finfo(float).eps * table.z:
        radial = table.q  # on the surface: ratio * P(cosh xi0) collapses to Q
    else:
        radial = table.ratio * legendre_p_half(cosh_xi, table.n_max)
    terms = two_minus_delta * radial * np.cos(n * (field.eta - src.eta_src))
    info = _adaptive_sum(terms, table.ratio, g.rel_tol)

    pref = -(1.0 / (math.pi * geom.f)) * math.sqrt(
        _cosh_minus_cos(field.xi, field.eta) * _one_minus_cos_eta_src(src, geom.f)
    )
    return SeriesInfo(value=pref * info.value, n_used=info.n_used)


def vh_potential_info(
    field: ToroidalCoords, src: AxialSource, g: AxialGreens
) -> SeriesInfo:
    """vh_potential plus the number of series terms used (for diagnostics)."""
    info = _vh_reduced(field, src, g)
    if g.normalization == "reduced":
        return SeriesInfo(value=info.value * g.geometry.f, n_used=info.n_used)
    return SeriesInfo(
        value=info.value * K_E_EV_NM * src.charge, n_used=info.n_used
    )


def vh_potential(field: ToroidalCoords, src: AxialSource, g: AxialGreens) -> float:
    """Potential of the induced surface charge at a field point.

    Volts under the "si" normalization, dimensionless multiples of
    q / (4 pi eps0 f) under "reduced".  Valid outside the conductor,
    0 <= xi <= xi0; on the axis pass xi = 0.

    Raises
    ------
    OutOfRegionError
        For field points inside the conductor.
    TruncationError
        If the expansion does not converge within the configured cap.
    """
    return vh_potential_info(field, src, g).value


def charge_interaction_energy_info(
    z_src: float, g: AxialGreens, charge: float = 1.0
) -> SeriesInfo:
    """charge_interaction_energy plus the number of series terms used."""
    src = axial_source(z_src, g.geometry, charge)
    field = ToroidalCoords(xi=0.0, eta=src.eta_src)
    info = _vh_reduced(field, src, g)
    return SeriesInfo(
        value=charge * charge * K_E_EV_NM * info.value, n_used=info.n_used
    )


def charge_interaction_energy(z_src: float, g: AxialGreens, charge: float = 1.0) -> float:
    """Energy (eV) of the charge with the surface charge it induces.

    This is q V_H evaluated at the charge's own position; no factor 1/2
    enters because the self-energy of the induced distribution is not part
    of this interaction term.  Negative for every source height.
    """
    return charge_interaction_energy_info(z_src, g, charge).value


def surface_residual(src: AxialSource, g: AxialGreens, n_samples: int = 64) -> float:
    """Max over sampled surface points of |Coulomb + V_H| / |Coulomb|.

    The grounded boundary condition makes the exact sum vanish on
    xi = xi0; what remains measures series truncation.
    """
    if n_samples < 8:
        raise ValueError(f"need at least 8 samples, got {n_samples}")
    etas = -math.pi + (np.arange(n_samples) + 0.5) * (2.0 * math.pi / n_samples)
    r, z = surface_rz(g.geometry, etas)
    dist = np.hypot(r, z - src.z_src)
    worst = 0.0
    for eta_i, dist_i in zip(etas, dist):
        field = ToroidalCoords(xi=g.geometry.xi0, eta=float(eta_i))
        vh = _vh_reduced(field, src, g).value
        worst = max(worst, abs(1.0 / dist_i + vh) * dist_i)
    return worst


# Tables for inverse_distance_series are keyed by the field argument
# cosh(xi) rounded to 12 significant digits; grids of field points share
# arguments, so the cache hit rate is high.
_FIELD_TABLE_CACHE: dict[str, HarmonicTable] = {}
_FIELD_TABLE_LOCK = threading.Lock()
_FIELD_TABLE_CAP = 2048


def _field_table(z: float, n_needed: int) -> HarmonicTable:
    key = "%.11e" % z
    with _FIELD_TABLE_LOCK:
        cached = _FIELD_TABLE_CACHE.get(key)
    if cached is not None and cached.n_max >= n_needed:
        return cached
    table = harmonic_table(z, n_needed)
    with _FIELD_TABLE_LOCK:
        if len(_FIELD_TABLE_CACHE) >= _FIELD_TABLE_CAP:
            _FIELD_TABLE_CACHE.clear()
        _FIELD_TABLE_CACHE[key] = table
    return table


def inverse_distance_series(
    field: ToroidalCoords, src: AxialSource, g: AxialGreens
) -> float:
    """1 / |r - r'| (1/nm) through the toroidal expansion, source on axis.

    For the expansion with an on-axis source, Q is evaluated at the field
    point's cosh(xi) and every P factor collapses to P_{n-1/2}(1) = 1.
    Field points on (or within 1e-12 of) the axis sit outside the
    harmonic-table domain -- there each Q term diverges logarithmically
    while the summed series stays finite -- so that branch evaluates the
    closed form of the summed expansion,

        sum_n (2 - delta_n0) Q_{n-1/2}(cosh xi) cos(n D)
            = pi / sqrt(2 (cosh xi - cos D)),

    which is exact for non-coincident points.

    Raises
    ------
    CoincidentPointsError
        If the field point is the source position.
    TruncationError
        If the term-by-term branch cannot converge within n_cap (field
        points very close to, but off, the axis).
    """
    geom = g.geometry
    f = geom.f
    delta = field.eta - src.eta_src
    a_fac = _cosh_minus_cos(field.xi, field.eta)
    b_fac = _one_minus_cos_eta_src(src, f)

    cosh_xi = math.cosh(field.xi)
    if cosh_xi < 1.0 + Z_MIN_OFFSET:
        gap = _cosh_minus_cos(field.xi, delta)
        if gap == 0.0:
            raise CoincidentPointsError(
                f"field point coincides with the source at z = {src.z_src} nm"
            )
        return math.sqrt(a_fac * b_fac / (2.0 * gap)) / f

    n_needed = _table_size(field.xi, g.rel_tol, g.n_cap)
    table = _field_table(cosh_xi, n_needed)
    n = np.arange(table.n_max + 1)
    terms = np.where(n == 0, 1.0, 2.0) * table.q * np.cos(n * delta)
    info = _adaptive_sum(terms, table.q, g.rel_tol)
    return (1.0 / (math.pi * f)) * math.sqrt(a_fac * b_fac) * info.value
