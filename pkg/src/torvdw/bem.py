"""Axisymmetric boundary-element oracle for the grounded toroid.

Independent numerical route to the same electrostatics: the meridian
circle of the surface is cut into equal arcs (parameterized by the tube
angle, which makes the arcs exactly uniform), each arc carrying a uniform
ring of induced charge.  Point-matching at the arc centers enforces the
grounded condition, with the logarithmic self-interaction of each ring
integrated analytically over its own arc.  The only special function used
is the complete elliptic integral K, so agreement with the separable
series is a genuine cross-check rather than a shared code path.

Reduced units as in the rest of the package: potentials per K_E q,
lengths in nm, charges in e.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import lu_factor, lu_solve
from scipy.special import ellipk as _ellipk

from .errors import AccuracyWarning, MeshError, SingularKernelError, SolverError
from .geometry import ToroidGeometry
from .greens import AxialSource, axial_source
from .units import K_E_EV_NM

__all__ = [
    "BemMesh",
    "BemSolution",
    "bem_gh_reduced",
    "bem_mixed_derivative",
    "bem_vh",
    "build_mesh",
    "ring_potential",
    "solve_induced_density",
    "total_induced_charge",
]

#: Residual gate on the solved collocation system, relative to the source
#: Coulomb scale at the panels.
RESIDUAL_LIMIT = 1e-8


def _ring_kernel(r_f, z_f, r_ring, z_ring):
    """Reduced potential of a unit-charge ring: (2/pi) K(m) / R_max."""
    rsum = r_f + r_ring
    dz = z_f - z_ring
    rmax2 = rsum * rsum + dz * dz
    m = 4.0 * r_f * r_ring / rmax2
    return (2.0 / math.pi) * _ellipk(m) / np.sqrt(rmax2)


def ring_potential(r: float, z: float, r0: float, z0: float, charge: float) -> float:
    """Potential (V) at (r, z) of a uniformly charged ring of radius r0 at
    height z0 carrying `charge` elementary charges.

    On the axis this collapses to charge / sqrt(r0^2 + (z - z0)^2) times
    K_E; far away it tends to the monopole charge / distance.

    Raises
    ------
    SingularKernelError
        If the field point lies on the ring itself.
    """
    if r0 <= 0.0:
        raise ValueError(f"ring radius must be positive, got {r0}")
    if r == r0 and z == z0:
        raise SingularKernelError("field point lies on the ring")
    return K_E_EV_NM * charge * float(_ring_kernel(float(r), float(z), r0, z0))


@dataclass
class BemMesh:
    """Equal-arc ring panelization of the toroidal surface.

    The collocation matrix and its LU factorization are assembled lazily
    and cached; the mesh is otherwise immutable by convention.
    """

    geometry: ToroidGeometry
    n_panels: int
    psi: np.ndarray   # tube angle of panel centers, (-pi, pi]
    r: np.ndarray     # ring radii
    z: np.ndarray     # ring heights
    ds: float         # meridian arc length per panel (uniform)
    eta: np.ndarray   # toroidal angle of panel centers
    _lu: tuple | None = field(default=None, repr=False, compare=False)
    _matrix: np.ndarray | None = field(default=None, repr=False, compare=False)

    def collocation_matrix(self) -> np.ndarray:
        """Reduced potential at panel i per unit surface density on panel j."""
        if self._matrix is None:
            r, z, ds = self.r, self.z, self.ds
            ring_charge = 2.0 * math.pi * r * ds  # per unit density
            a = _ring_kernel(r[:, None], z[:, None], r[None, :], z[None, :])
            a = a * ring_charge[None, :]
            # Analytic self term - the kernel's log singularity integrated
            # over the panel arc: 2 ds (ln(16 r / ds) + 1).
            np.fill_diagonal(a, 2.0 * ds * (np.log(16.0 * r / ds) + 1.0))
            self._matrix = a
        return self._matrix

    def lu(self):
        if self._lu is None:
            self._lu = lu_factor(self.collocation_matrix())
        return self._lu


def build_mesh(geom: ToroidGeometry, n_panels: int) -> BemMesh:
    """Cut the meridian circle into n_panels equal arcs.

    Raises
    ------
    MeshError
        For fewer than 16 panels (the self-term approximation needs the
        arcs to be short against the ring radius).
    """
    n_panels = int(n_panels)
    if n_panels < 16:
        raise MeshError(f"need at least 16 panels, got {n_panels}")
    a, b, f = geom.a, geom.b, geom.f
    psi = -math.pi + (np.arange(n_panels) + 0.5) * (2.0 * math.pi / n_panels)
    r = a + b * np.cos(psi)
    z = b * np.sin(psi)
    eta = np.arctan2(2.0 * f * z, (r - f) * (r + f) + z * z)
    ds = 2.0 * math.pi * b / n_panels
    return BemMesh(
        geometry=geom, n_panels=n_panels, psi=psi, r=r, z=z, ds=ds, eta=eta
    )


@dataclass(frozen=True)
class BemSolution:
    """Induced surface-charge density solving the grounded condition."""

    mesh: BemMesh
    sigma: np.ndarray   # e / nm^2 per unit source charge... scaled by source
    source: AxialSource
    residual: float     # collocation residual relative to the Coulomb scale


def solve_induced_density(mesh: BemMesh, src: AxialSource) -> BemSolution:
    """Solve the collocation system for the induced surface density.

    Raises
    ------
    SolverError
        If the solved system's residual exceeds 1e-8 of the source
        Coulomb scale; carries a condition-number estimate.
    """
    dist = np.hypot(mesh.r, mesh.z - src.z_src)
    rhs = -src.charge / dist
    sigma = lu_solve(mesh.lu(), rhs)
    a = mesh.collocation_matrix()
    residual = float(np.max(np.abs(a @ sigma - rhs)) / np.max(np.abs(rhs)))
    if residual > RESIDUAL_LIMIT:
        raise SolverError(
            f"collocation residual {residual:.2e} exceeds {RESIDUAL_LIMIT:g}",
            condition=float(np.linalg.cond(a)),
        )
    sigma = sigma.copy()
    sigma.flags.writeable = False
    return BemSolution(mesh=mesh, sigma=sigma, source=src, residual=residual)


def total_induced_charge(sol: BemSolution) -> float:
    """Net induced charge (e); negative for a positive source charge."""
    return float(np.sum(sol.sigma * 2.0 * math.pi * sol.mesh.r * sol.mesh.ds))


def _vh_reduced_bem(r: float, z: float, sol: BemSolution) -> float:
    mesh = sol.mesh
    ring_charges = sol.sigma * 2.0 * math.pi * mesh.r * mesh.ds
    dr = r - mesh.r
    dz = z - mesh.z
    if np.any((dr * dr + dz * dz) == 0.0):
        raise SingularKernelError("field point lies on a panel ring")
    kern = _ring_kernel(float(r), float(z), mesh.r, mesh.z)
    return float(np.sum(ring_charges * kern))


def bem_vh(r: float, z: float, sol: BemSolution) -> float:
    """Potential (V) of the induced charge at the field point (r, z).

    The boundary-element counterpart of the series V_H: a plain sum of
    ring potentials over all panels.
    """
    return K_E_EV_NM * _vh_reduced_bem(float(r), float(z), sol)


def bem_gh_reduced(z_field: float, sol: BemSolution) -> float:
    """eps0 V_H / q on the axis, in 1/nm: the Green's-kernel counterpart."""
    return _vh_reduced_bem(0.0, float(z_field), sol) / (4.0 * math.pi * sol.source.charge)


def bem_mixed_derivative(
    z: float,
    z_prime: float,
    geom: ToroidGeometry,
    n_panels: int = 400,
    step: float | None = None,
    richardson_check: bool = True,
) -> float:
    """d^2/dz dz' of eps0 V_H / q by 4-point central differences (1/nm^3).

    Two solves (sources at z' +- h) evaluated at field heights z +- h give
    the stencil.  With richardson_check the same stencil at h/2 estimates
    the step error and warns when the two disagree by more than 5%.
    """
    f = geom.f
    h = float(step) if step is not None else 1e-3 * f
    if h <= 0.0:
        raise ValueError(f"step must be positive, got {h}")
    mesh = build_mesh(geom, n_panels)

    def stencil(hh: float) -> float:
        vals = {}
        for s_off in (+hh, -hh):
            sol = solve_induced_density(mesh, axial_source(z_prime + s_off, geom))
            for f_off in (+hh, -hh):
                vals[(f_off, s_off)] = bem_gh_reduced(z + f_off, sol)
        return (
            vals[(+hh, +hh)] - vals[(+hh, -hh)] - vals[(-hh, +hh)] + vals[(-hh, -hh)]
        ) / (4.0 * hh * hh)

    d_h = stencil(h)
    if richardson_check:
        d_half = stencil(0.5 * h)
        scale = max(abs(d_h), abs(d_half))
        if scale > 0.0 and abs(d_h - d_half) > 0.05 * scale:
            warnings.warn(
                f"mixed-derivative stencils at h = {h:g} and h/2 differ by "
                f"{abs(d_h - d_half) / scale:.1%}; the step is too coarse or "
                "too fine for the panel resolution",
                AccuracyWarning,
                stacklevel=2,
            )
    return d_h
