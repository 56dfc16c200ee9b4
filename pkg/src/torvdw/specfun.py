"""Complete elliptic integrals and toroidal harmonics.

Toroidal harmonics are the Legendre functions P_{n-1/2}(z) and Q_{n-1/2}(z)
of half-integer degree on z = cosh(xi) >= 1.  They satisfy the degree
recurrence (DLMF 14.10.3)

    (nu + 1) y_{nu+1}(z) = (2 nu + 1) z y_nu(z) - nu y_{nu-1}(z),

under which P grows like e^{n xi} (dominant direction: upward) while Q
decays like e^{-n xi} (dominant direction: downward).  P is therefore
built by forward recurrence from elliptic-integral seeds at n = 0, 1 and
Q by backward (Miller) recurrence from an arbitrary start high above
n_max, renormalized against the closed form of Q_{-1/2}(z).

Seed closed forms, in the scipy parameter convention m = k^2, with
emx = e^{-xi} and m1 = 1 - e^{-2 xi}:

    P_{-1/2}(z) = (2/pi) sqrt(emx) K(m1)
    P_{+1/2}(z) = (2/pi) E(m1) / sqrt(emx)
    Q_{-1/2}(z) = 2 sqrt(emx) K(emx^2)

(equivalent to the classical sqrt(2/(z+1)) K(2/(z+1)) forms through a
Landen transformation).  K is evaluated through ellipkm1 so that no
precision is lost near either end of the domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ellipe as _ellipe
from scipy.special import ellipk as _ellipk
from scipy.special import ellipkm1 as _ellipkm1

from .errors import NearSingularArgumentError, OverflowHorizonError

__all__ = [
    "HarmonicTable",
    "elliptic_K",
    "elliptic_E",
    "harmonic_table",
    "legendre_p_half",
    "toroidal_seeds",
]

#: Arguments closer to 1 than this degenerate the toroid (a -> b) and are
#: rejected rather than silently extrapolated.
Z_MIN_OFFSET = 1e-12

#: Keep e^{+-n xi} comfortably inside float64 range (overflow near 709).
_LOG_HORIZON = 690.0

#: Miller-recurrence values are rescaled when they pass this magnitude.
_RESCALE_LIMIT = 1e280


def elliptic_K(m: float) -> float:
    """Complete elliptic integral of the first kind, parameter convention.

    Parameters
    ----------
    m:
        Parameter (the squared modulus), 0 <= m < 1.

    Raises
    ------
    ValueError
        Outside [0, 1); K diverges logarithmically at m = 1.
    """
    m = float(m)
    if not 0.0 <= m < 1.0:
        raise ValueError(f"elliptic_K parameter must satisfy 0 <= m < 1, got {m}")
    return float(_ellipk(m))


def elliptic_E(m: float) -> float:
    """Complete elliptic integral of the second kind, parameter convention.

    Parameters
    ----------
    m:
        Parameter (the squared modulus), 0 <= m <= 1.
    """
    m = float(m)
    if not 0.0 <= m <= 1.0:
        raise ValueError(f"elliptic_E parameter must satisfy 0 <= m <= 1, got {m}")
    return float(_ellipe(m))


def toroidal_seeds(z: float) -> tuple[float, float, float]:
    """Elliptic-integral anchors (P_{-1/2}, P_{+1/2}, Q_{-1/2}) at z > 1.

    All three are evaluated to machine precision across the whole domain;
    the complementary-parameter routine ellipkm1 carries the K values
    where the plain parameter would round badly.
    """
    z = float(z)
    xi = math.acosh(z)
    emx = 1.0 / (z + math.sqrt((z - 1.0) * (z + 1.0)))   # e^{-xi}
    m1 = -math.expm1(-2.0 * xi)                          # 1 - e^{-2 xi}, no cancellation
    p_minus = (2.0 / math.pi) * math.sqrt(emx) * float(_ellipkm1(emx * emx))
    p_plus = (2.0 / math.pi) * float(_ellipe(m1)) / math.sqrt(emx)
    q_minus = 2.0 * math.sqrt(emx) * float(_ellipkm1(m1))
    return p_minus, p_plus, q_minus


@dataclass(frozen=True)
class HarmonicTable:
    """P_{n-1/2}(z), Q_{n-1/2}(z) and their ratios for n = 0..n_max.

    Immutable after construction; safe to share between threads.
    """

    z: float
    n_max: int
    p: np.ndarray
    q: np.ndarray
    ratio: np.ndarray

    @property
    def xi(self) -> float:
        """arccosh(z), the decay scale: ratio[n] falls off like e^{-2 n xi}."""
        return math.acosh(self.z)


def legendre_p_half(z: float, n_max: int) -> np.ndarray:
    """P_{n-1/2}(z) for n = 0..n_max by forward recurrence, z >= 1.

    The growing solution is stable in this direction.  At z = 1 exactly the
    recurrence reproduces P_{n-1/2}(1) = 1 identically.

    Raises
    ------
    OverflowHorizonError
        If P_{n-1/2}(z) exceeds float64 range before n_max; the error
        carries the largest safe degree index.
    """
    z = float(z)
    n_max = int(n_max)
    if z < 1.0:
        raise ValueError(f"legendre_p_half requires z >= 1, got {z}")
    if n_max < 0:
        raise ValueError("n_max must be >= 0")

    p = np.empty(n_max + 1)
    if z == 1.0:
        p.fill(1.0)
        return p

    p_minus, p_plus, _ = toroidal_seeds(z)
    p[0] = p_minus
    if n_max >= 1:
        p[1] = p_plus
    for n in range(1, n_max):
        # nu = n - 1/2:  (nu+1) p[n+1] = (2nu+1) z p[n] - nu p[n-1]
        nxt = ((2.0 * n) * z * p[n] - (n - 0.5) * p[n - 1]) / (n + 0.5)
        if nxt > 1e300 or not math.isfinite(nxt):
            raise OverflowHorizonError(
                f"P_(n-1/2)({z}) overflows float64 at n = {n + 1}; "
                f"largest safe n is {n}",
                max_safe_n=n,
            )
        p[n + 1] = nxt
    return p


def _q_backward(z: float, xi: float, n_max: int, q_minus: float) -> np.ndarray:
    """Q_{n-1/2}(z) for n = 0..n_max by Miller's backward recurrence.

    Started with an arbitrary tail far enough above n_max that the
    contaminating grown solution is suppressed below 1e-14 relative by the
    e^{-2 xi (n_start - n_max)} damping, then normalized at n = 0 against
    the elliptic-integral anchor.
    """
    # Headroom: e^{-2 xi h} <= 1e-14 needs h ~ 16/xi; the +15 covers the
    # algebraic prefactors at moderate xi.
    n_start = n_max + 15 + math.ceil(16.0 / xi)

    q = np.empty(n_max + 1)
    hi = 0.0     # unnormalized Q at index n+1
    cur = 1.0    # unnormalized Q at index n
    scale_drops = 0
    for n in range(n_start, 0, -1):
        lo = ((2.0 * n) * z * cur - (n + 0.5) * hi) / (n - 0.5)
        hi, cur = cur, lo
        if cur > _RESCALE_LIMIT:
            hi /= _RESCALE_LIMIT
            cur /= _RESCALE_LIMIT
            if n - 1 <= n_max:
                q[n - 1 + 1:] /= _RESCALE_LIMIT
                scale_drops += 1
        if n - 1 <= n_max:
            q[n - 1] = cur

    if n_max >= n_start:  # cannot happen with the headroom above; guard anyway
        raise AssertionError("backward start below n_max")

    scale = q_minus / q[0]
    q *= scale
    if scale_drops and (q[-1] == 0.0 or not np.isfinite(q[-1])):
        n_bad = int(np.argmin(q > 0.0))
        raise OverflowHorizonError(
            f"Q_(n-1/2)({z}) underflows float64 before n = {n_max}; "
            f"largest safe n is {n_bad - 1}",
            max_safe_n=n_bad - 1,
        )
    return q


def harmonic_table(z: float, n_max: int) -> HarmonicTable:
    """Build the toroidal-harmonic table at argument z >= 1 + 1e-12.

    P is seeded from elliptic integrals at n = 0, 1 and extended by forward
    recurrence; Q comes from backward recurrence normalized by the
    elliptic-integral value of Q_{-1/2}(z).

    Raises
    ------
    NearSingularArgumentError
        For z < 1 + 1e-12: Q_{-1/2} diverges as z -> 1 and the toroid
        degenerates there.
    OverflowHorizonError
        If n_max lies beyond the float64 horizon e^{+-n xi}; the error
        reports the largest safe n.
    """
    z = float(z)
    n_max = int(n_max)
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    if z < 1.0 + Z_MIN_OFFSET:
        raise NearSingularArgumentError(
            f"argument z = {z} is within {Z_MIN_OFFSET} of the degenerate "
            "point z = 1 (tube radius equals center radius)"
        )

    xi = math.acosh(z)
    # The binding constraint is the ratio Q/P ~ e^{-2 n xi}, which leaves
    # float64 range twice as fast as either function alone.
    if 2.0 * n_max * xi > _LOG_HORIZON:
        raise OverflowHorizonError(
            f"n_max = {n_max} exceeds the float64 horizon at z = {z}; "
            f"largest safe n is {int(_LOG_HORIZON / (2.0 * xi))}",
            max_safe_n=int(_LOG_HORIZON / (2.0 * xi)),
        )

    p_minus, p_plus, q_minus = toroidal_seeds(z)
    p = legendre_p_half(z, n_max)
    if n_max == 0:
        q = np.array([q_minus])
    else:
        q = _q_backward(z, xi, n_max, q_minus)

    ratio = q / p
    for arr in (p, q, ratio):
        arr.flags.writeable = False
    return HarmonicTable(z=z, n_max=n_max, p=p, q=q, ratio=ratio)
