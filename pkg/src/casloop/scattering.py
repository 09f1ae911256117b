r"""Mie scattering coefficients of a magneto-dielectric sphere on the
imaginary frequency axis.

Convention: per unit regular incident multipole (radial function i_L), the
scattered field outside the sphere is alpha_L * (outgoing TM, radial k_L)
plus beta_L * (outgoing TE).  With real response models at rotated
frequency the coefficients are real; alpha_L > 0 for an ordinary
dielectric sphere in vacuum.

With Riccati functions S_l(u) = u i_l(u), C_l(u) = u k_l(u), size
parameter u = kR (k the background wavenumber), relative index
m = k_in/k and relative permeability ratio mt = mu_in/mu_b,

    alpha_l = -[r S_l(mu) S_l'(u) - S_l(u) S_l'(mu)]
              / [r S_l(mu) C_l'(u) - C_l(u) S_l'(mu)],   r = m/mt

and beta_l is the same expression with r = mt/m.  Both vanish identically
at zero contrast.  The first-order (Born) limits are mode-density
overlaps against the contrast over the ball; see born_coefficients.
"""

from dataclasses import dataclass

import numpy as np
from scipy.constants import c as C_LIGHT

from .media import evaluate_response
from .specialfn import BesselKind, mapped_gauss_legendre, riccati_tables


class MieInstabilityError(ArithmeticError):
    """Raised when the recurrences leave float64 range; carries max_stable_l."""

    def __init__(self, message, max_stable_l):
        super().__init__(message)
        self.max_stable_l = max_stable_l


@dataclass(frozen=True)
class MieCoefficientSet:
    """alpha_L (electric/TM) and beta_L (magnetic/TE), L = 1..l_max."""

    electric: np.ndarray
    magnetic: np.ndarray
    radius: float
    wavenumber: float
    l_max: int

    def alpha(self, l):
        return self.electric[l - 1]

    def beta(self, l):
        return self.magnetic[l - 1]


def _coefficient_family(ratio, s_u, sp_u, c_u, cp_u, s_mu, sp_mu):
    num = ratio * s_mu * sp_u - s_u * sp_mu
    den = ratio * s_mu * cp_u - c_u * sp_mu
    return -num / den


def mie_coefficients(radius, material, background, omega, l_max, c=C_LIGHT):
    """Lorenz-Mie coefficients at imaginary-axis frequency omega.

    Parameters
    ----------
    radius : float
        sphere radius in meters
    material, background : MaterialModel
    omega : float
        rotated frequency Omega > 0 (rad/s)
    l_max : int
        highest multipole order, >= 1

    Returns
    -------
    MieCoefficientSet

    Raises
    ------
    MieInstabilityError
        when l_max exceeds the stable recurrence range at the given kR;
        the exception reports the largest usable order.
    """
    if omega <= 0:
        raise ValueError("omega must be > 0 on the imaginary axis")
    if l_max < 1:
        raise ValueError("l_max must be >= 1")
    eps_i, mu_i = evaluate_response(material, omega)
    eps_b, mu_b = evaluate_response(background, omega)
    if eps_i * mu_i <= 0 or eps_b * mu_b <= 0:
        raise ValueError("eps*mu must be positive inside and outside")
    k = np.sqrt(eps_b * mu_b) * omega / c
    u = k * radius
    m_rel = np.sqrt(eps_i * mu_i / (eps_b * mu_b))
    mt = mu_i / mu_b

    s_u, sp_u = riccati_tables(BesselKind.MODIFIED_I, l_max, u)
    c_u, cp_u = riccati_tables(BesselKind.MODIFIED_K, l_max, u)
    s_mu, sp_mu = riccati_tables(BesselKind.MODIFIED_I, l_max, m_rel * u)

    alpha = np.zeros(l_max)
    beta = np.zeros(l_max)
    with np.errstate(invalid="ignore", over="ignore"):
        for l in range(1, l_max + 1):
            vals = (s_u[l], sp_u[l], c_u[l], cp_u[l], s_mu[l], sp_mu[l])
            if not all(np.isfinite(v) for v in vals):
                raise MieInstabilityError(
                    f"radial recurrences unstable beyond L = {l - 1} "
                    f"at kR = {u:g}", max_stable_l=l - 1)
            alpha[l - 1] = _coefficient_family(
                m_rel / mt, s_u[l], sp_u[l], c_u[l], cp_u[l], s_mu[l], sp_mu[l])
            beta[l - 1] = _coefficient_family(
                mt / m_rel, s_u[l], sp_u[l], c_u[l], cp_u[l], s_mu[l], sp_mu[l])
            if not (np.isfinite(alpha[l - 1]) and np.isfinite(beta[l - 1])):
                raise MieInstabilityError(
                    f"coefficient overflow beyond L = {l - 1} at kR = {u:g}",
                    max_stable_l=l - 1)
    return MieCoefficientSet(electric=alpha, magnetic=beta, radius=radius,
                             wavenumber=k, l_max=l_max)


def quasistatic_dipole(size_parameter, eps_rel):
    """Small-sphere limit alpha_1 -> (4/(3*pi)) (kR)^3 (eps-1)/(eps+2)."""
    return (4.0 / (3.0 * np.pi)) * size_parameter ** 3 \
        * (eps_rel - 1.0) / (eps_rel + 2.0)


def born_coefficients(l, size_parameter, delta_eps=0.0, delta_mu=0.0,
                      nodes=96):
    """First-order scattering coefficients from mode overlaps over the ball.

    The TM (electric) mode density integrated over angles reduces to
    S'(t)^2 + l(l+1) S(t)^2/t^2 and the TE mode density to S(t)^2 with
    S(t) = t i_l(t); integrating them radially against the contrasts and
    dividing by the Wronskian pi/2 of the (i_l, k_l) pair,

        alpha_l = (2/pi) [de * I_N(u) - dm * I_M(u)]
        beta_l  = (2/pi) [dm * I_N(u) - de * I_M(u)],    u = kR,

    which is the small-contrast limit of the exact one-sphere problem.
    The radial integral is evaluated by Gauss-Legendre quadrature; the
    angular integral is exact by orthonormality of the vector harmonics.

    Returns
    -------
    (alpha_l, beta_l) : tuple of floats
    """
    u = float(size_parameter)
    rule = mapped_gauss_legendre(nodes, 0.0, u)
    i_n = 0.0
    i_m = 0.0
    for t, w in zip(rule.nodes, rule.weights):
        s, sp = riccati_tables(BesselKind.MODIFIED_I, l, t)
        i_n += w * (sp[l] ** 2 + l * (l + 1) * s[l] ** 2 / t ** 2)
        i_m += w * s[l] ** 2
    wronskian = np.pi / 2.0
    return ((delta_eps * i_n - delta_mu * i_m) / wronskian,
            (delta_mu * i_n - delta_eps * i_m) / wronskian)
