r"""Special-function kernel.

Spherical Bessel family on the real and imaginary axes, Wigner/Gaunt
angular coupling coefficients, spherical harmonics and Gauss-Legendre
rules.  Everything downstream (Mie coefficients, translation matrices,
surface projections, frequency quadrature) is assembled from this module.

Regular kinds (j and modified i) are computed by downward Miller
recurrence with renormalisation; irregular kinds (n, modified k) by
upward recurrence.  Purely imaginary arguments are routed through the
modified kinds so that the arithmetic stays real:

    j_L(iy)  = i^L i_L(y),
    h+_L(iy) = -(2/pi) i^(-L) k_L(y).
"""

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import special as _sp


class BesselKind(Enum):
    REGULAR_J = "j"
    IRREGULAR_N = "n"
    OUTGOING_H_PLUS = "h+"
    INCOMING_H_MINUS = "h-"
    MODIFIED_I = "i"
    MODIFIED_K = "k"


# exp growth of i_L overflows float64 beyond this argument
_MODIFIED_OVERFLOW_ARG = 700.0
_AXIS_TOL = 1e-14

# internal angular-momentum cap; 2*L_max+1 coupling in translation
# products keeps practical L_max well below this
L_INTERNAL_MAX = 64


class BesselDomainError(ValueError):
    pass


class BesselOverflowError(OverflowError):
    pass


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights of a 1D quadrature rule on `domain`."""

    nodes: np.ndarray
    weights: np.ndarray
    domain: tuple

    def integrate(self, f):
        return np.dot(self.weights, f(self.nodes))


def gauss_legendre(n):
    """Gauss-Legendre rule on [-1, 1], exact for polynomials of degree <= 2n-1.

    Parameters
    ----------
    n : int
        node count, >= 1

    Returns
    -------
    QuadratureRule
    """
    if n < 1:
        raise ValueError("node count must be >= 1")
    x, w = leggauss(n)
    return QuadratureRule(nodes=x, weights=w, domain=(-1.0, 1.0))


def mapped_gauss_legendre(n, a, b):
    """Gauss-Legendre rule mapped to the finite interval [a, b]."""
    rule = gauss_legendre(n)
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    return QuadratureRule(nodes=mid + half * rule.nodes,
                          weights=half * rule.weights, domain=(a, b))


# ---------------------------------------------------------------------------
# spherical Bessel family
# ---------------------------------------------------------------------------

def _regular_table(l_top, x, modified):
    """Table f_0..f_{l_top} of j_l(x) or i_l(x), x real > 0.

    Miller downward recurrence started from a tiny trial value well above
    l_top, renormalised against the analytic l=0 value:
        j_{l-1} = (2l+1)/x j_l - j_{l+1}
        i_{l-1} = (2l+1)/x i_l + i_{l+1}
    """
    l_start = max(l_top + 1, int(x)) + 24
    sign = 1.0 if modified else -1.0
    f_hi = 0.0
    f = 1e-280
    tail = np.zeros(l_top + 2)
    for l in range(l_start, 0, -1):
        f_lo = (2 * l + 1) / x * f + sign * f_hi
        f_hi, f = f, f_lo
        if l - 1 <= l_top + 1:
            tail[l - 1] = f
        if abs(f) > 1e250:
            scale = 1e-250
            f *= scale
            f_hi *= scale
            tail *= scale
    tail /= np.max(np.abs(tail))
    if modified:
        anchor, idx = math.sinh(x) / x, 0
    else:
        # normalise against whichever low order is farthest from a zero
        a0 = math.sin(x) / x
        a1 = math.sin(x) / x ** 2 - math.cos(x) / x
        anchor, idx = (a0, 0) if abs(a0) >= abs(a1) else (a1, 1)
    return tail[:l_top + 1] * (anchor / tail[idx])


def _irregular_table(l_top, x, modified):
    """Table of n_l(x) or k_l(x) by upward recurrence, x real > 0.

    Overflow to inf is deliberate; callers detect non-finite entries and
    report the largest stable order.
    """
    out = np.zeros(l_top + 1)
    with np.errstate(over="ignore", invalid="ignore"):
        if modified:
            k0 = 0.5 * math.pi * math.exp(-x) / x
            out[0] = k0
            if l_top >= 1:
                out[1] = k0 * (1.0 + 1.0 / x)
            for l in range(1, l_top):
                out[l + 1] = out[l - 1] + (2 * l + 1) / x * out[l]
        else:
            out[0] = -math.cos(x) / x
            if l_top >= 1:
                out[1] = -math.cos(x) / x ** 2 - math.sin(x) / x
            for l in range(1, l_top):
                out[l + 1] = (2 * l + 1) / x * out[l] - out[l - 1]
    return out


@lru_cache(maxsize=100000)
def _oscillatory_tables(l_top, x):
    """(j, n) tables for real x > 0."""
    return (_regular_table(l_top, x, modified=False),
            _irregular_table(l_top, x, modified=False))


@lru_cache(maxsize=100000)
def _modified_table(kind_value, l_top, x):
    if kind_value == "i":
        return _regular_table(l_top, x, modified=True)
    return _irregular_table(l_top, x, modified=True)


def _split_axis(x):
    """Classify a complex argument as ('real'|'imag', magnitude)."""
    z = complex(x)
    if z == 0:
        return "zero", 0.0
    if abs(z.imag) <= _AXIS_TOL * abs(z):
        if z.real < 0:
            raise BesselDomainError("negative real arguments not supported")
        return "real", z.real
    if abs(z.real) <= _AXIS_TOL * abs(z):
        if z.imag < 0:
            raise BesselDomainError("negative imaginary arguments not supported")
        return "imag", z.imag
    raise BesselDomainError(
        "arguments off the real/imaginary axes are out of scope")


def spherical_bessel_table(kind, l_top, x):
    """Values f_0(x)..f_{l_top}(x) for one radial kind.

    Parameters
    ----------
    kind : BesselKind
    l_top : int
        highest order, <= L_INTERNAL_MAX
    x : complex
        argument on the positive real or positive imaginary axis

    Returns
    -------
    np.ndarray
        complex for the analytic kinds, real for the modified kinds
    """
    if l_top > L_INTERNAL_MAX:
        raise ValueError(f"l_top={l_top} exceeds internal cap {L_INTERNAL_MAX}")
    kind = BesselKind(kind)
    axis, mag = _split_axis(x)

    if axis == "zero":
        if kind in (BesselKind.REGULAR_J, BesselKind.MODIFIED_I):
            out = np.zeros(l_top + 1)
            out[0] = 1.0
            return out if kind is BesselKind.MODIFIED_I else out.astype(complex)
        raise BesselDomainError(f"{kind.value} is singular at x = 0")

    if kind in (BesselKind.MODIFIED_I, BesselKind.MODIFIED_K):
        if axis != "real":
            raise BesselDomainError("modified kinds take real arguments")
        if kind is BesselKind.MODIFIED_I and mag > _MODIFIED_OVERFLOW_ARG:
            raise BesselOverflowError(
                f"i_L({mag:g}) exceeds float64 range")
        return _modified_table(kind.value, l_top, mag).copy()

    if axis == "real":
        j, n = _oscillatory_tables(l_top, mag)
        if kind is BesselKind.REGULAR_J:
            return j.astype(complex)
        if kind is BesselKind.IRREGULAR_N:
            return n.astype(complex)
        if kind is BesselKind.OUTGOING_H_PLUS:
            return j + 1j * n
        return j - 1j * n

    # purely imaginary argument: route through the modified kinds
    if mag > _MODIFIED_OVERFLOW_ARG and kind in (
            BesselKind.REGULAR_J, BesselKind.IRREGULAR_N,
            BesselKind.INCOMING_H_MINUS):
        raise BesselOverflowError(
            f"growing kinds at x = {mag:g}i exceed float64 range")
    ls = np.arange(l_top + 1)
    phase = 1j ** ls
    if kind is BesselKind.REGULAR_J:
        i_tab = spherical_bessel_table(BesselKind.MODIFIED_I, l_top, mag)
        return phase * i_tab
    k_tab = spherical_bessel_table(BesselKind.MODIFIED_K, l_top, mag)
    h_plus = -(2.0 / math.pi) * k_tab / phase
    if kind is BesselKind.OUTGOING_H_PLUS:
        return h_plus
    j_tab = phase * spherical_bessel_table(BesselKind.MODIFIED_I, l_top, mag)
    if kind is BesselKind.IRREGULAR_N:
        return (h_plus - j_tab) / 1j
    return 2.0 * j_tab - h_plus     # h- = 2 j - h+


def spherical_bessel(kind, l, x):
    """Single spherical Bessel value f_l(x); see spherical_bessel_table."""
    return spherical_bessel_table(kind, l, x)[l]


def spherical_bessel_deriv(kind, l, x):
    """Derivative f_l'(x) from the stable recurrence forms.

    Analytic kinds:  f' = f_{l-1} - (l+1)/x f_l  (l >= 1), f_0' = -f_1.
    Modified i:      i' = i_{l-1} - (l+1)/x i_l,  i_0' = i_1.
    Modified k:      k' = -k_{l-1} - (l+1)/x k_l, k_0' = -k_1.
    """
    kind = BesselKind(kind)
    tab = spherical_bessel_table(kind, l + 1, x)
    z = complex(x) if np.iscomplexobj(tab) else float(abs(complex(x)))
    if l == 0:
        if kind is BesselKind.MODIFIED_I:
            return tab[1]
        if kind is BesselKind.MODIFIED_K:
            return -tab[1]
        return -tab[1]
    if kind is BesselKind.MODIFIED_K:
        return -tab[l - 1] - (l + 1) / z * tab[l]
    return tab[l - 1] - (l + 1) / z * tab[l]


def riccati_tables(kind, l_top, x):
    """Riccati functions (x f_l(x), d/dx[x f_l(x)]) for real x > 0.

    Used by the Mie module; kind is one of the modified kinds so both
    tables are real.
    """
    kind = BesselKind(kind)
    f = spherical_bessel_table(kind, l_top + 1, x)
    s = x * f[:l_top + 1]
    ls = np.arange(l_top + 1)
    with np.errstate(over="ignore", invalid="ignore"):
        if kind is BesselKind.MODIFIED_K:
            fprime = -np.roll(f, 1)[:l_top + 1] - (ls + 1) / x * f[:l_top + 1]
            fprime[0] = -f[1]
        else:
            fprime = np.roll(f, 1)[:l_top + 1] - (ls + 1) / x * f[:l_top + 1]
            fprime[0] = f[1] if kind is BesselKind.MODIFIED_I else -f[1]
        sprime = f[:l_top + 1] + x * fprime
    return s, sprime


# ---------------------------------------------------------------------------
# angular coupling coefficients
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _fact(n):
    return math.factorial(n)


def _log_big(n):
    # math.log handles arbitrarily large python ints
    return math.log(n)


@lru_cache(maxsize=None)
def wigner_3j(j1, j2, j3, m1, m2, m3):
    """Wigner 3j symbol for integer arguments, exact Racah sum.

    Big-integer arithmetic throughout; the final conversion goes through
    logarithms so large angular momenta cannot overflow.
    """
    if m1 + m2 + m3 != 0:
        return 0.0
    if abs(m1) > j1 or abs(m2) > j2 or abs(m3) > j3:
        return 0.0
    if j3 < abs(j1 - j2) or j3 > j1 + j2:
        return 0.0
    t_min = max(0, j2 - j3 - m1, j1 - j3 + m2)
    t_max = min(j1 + j2 - j3, j1 - m1, j2 + m2)
    total = Fraction(0)
    for t in range(t_min, t_max + 1):
        den = (_fact(t) * _fact(j1 + j2 - j3 - t) * _fact(j1 - m1 - t)
               * _fact(j2 + m2 - t) * _fact(j3 - j2 + m1 + t)
               * _fact(j3 - j1 - m2 + t))
        total += Fraction((-1) ** t, den)
    if total == 0:
        return 0.0
    pref = Fraction(
        _fact(j1 + j2 - j3) * _fact(j1 - j2 + j3) * _fact(-j1 + j2 + j3),
        _fact(j1 + j2 + j3 + 1))
    pref *= (_fact(j1 + m1) * _fact(j1 - m1) * _fact(j2 + m2)
             * _fact(j2 - m2) * _fact(j3 + m3) * _fact(j3 - m3))
    sign = -1.0 if (j1 - j2 - m3) % 2 else 1.0
    sign *= -1.0 if total < 0 else 1.0
    log_mag = (_log_big(abs(total.numerator)) - _log_big(total.denominator)
               + 0.5 * (_log_big(pref.numerator) - _log_big(pref.denominator)))
    return sign * math.exp(log_mag)


@lru_cache(maxsize=None)
def clebsch_gordan(j1, m1, j2, m2, j, m):
    """<j1 m1; j2 m2 | j m> for integer arguments."""
    if m1 + m2 != m:
        return 0.0
    phase = -1.0 if (j1 - j2 + m) % 2 else 1.0
    return phase * math.sqrt(2 * j + 1) * wigner_3j(j1, j2, j, m1, m2, -m)


@lru_cache(maxsize=None)
def gaunt_coefficient(l1, m1, l2, m2, l3):
    """Integral of Y_{l1 m1} Y_{l2 m2} conj(Y_{l3, m1+m2}) over the sphere.

    Returns exact zero for selection-rule violations (triangle rule,
    odd l1+l2+l3).
    """
    if abs(m1) > l1 or abs(m2) > l2:
        raise ValueError("|m| must not exceed l")
    m3 = m1 + m2
    if abs(m3) > l3 or l3 < abs(l1 - l2) or l3 > l1 + l2:
        return 0.0
    if (l1 + l2 + l3) % 2:
        return 0.0
    pref = math.sqrt((2 * l1 + 1) * (2 * l2 + 1) * (2 * l3 + 1)
                     / (4.0 * math.pi))
    val = (pref * wigner_3j(l1, l2, l3, 0, 0, 0)
           * wigner_3j(l1, l2, l3, m1, m2, -m3))
    return val if (m3 % 2 == 0) else -val


# ---------------------------------------------------------------------------
# spherical harmonics
# ---------------------------------------------------------------------------

def sph_harm(l, m, theta, phi):
    """Orthonormal complex spherical harmonic Y_lm(theta, phi).

    theta is the polar angle; Condon-Shortley phase.
    """
    return _sp.sph_harm_y(l, m, theta, phi)


def assoc_legendre(l, m, x):
    """Associated Legendre function P_l^m(x), Condon-Shortley phase."""
    return _sp.lpmv(m, l, x)


def unit_vector_angles(v):
    """(theta, phi) of a 2- or 3-vector; z-axis convention at the zero vector."""
    v = np.asarray(v, dtype=float)
    r = np.linalg.norm(v)
    if r == 0:
        return 0.0, 0.0
    theta = math.acos(max(-1.0, min(1.0, v[2] / r)))
    phi = math.atan2(v[1], v[0])
    return theta, phi
