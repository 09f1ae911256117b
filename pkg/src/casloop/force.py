r"""Casimir force assembly: thermal weight, gradient of the closing
translation block, surface kernel, and the rotated-frequency quadrature.

Per loop word of order n the engine evaluates

    Tr[ K  D[w1] A[w1<-w2] D[w2] ... D[wn]  grad_d A[wn<-w1] ]

with d the closing separation (center of the last interior sphere minus
center of the target), K the per-L surface kernel on the target sphere's
row space, and sums words with the order prefactor -(-1)^n.  The force on
the target then is

    F = sum_words -(-1)^n  (hbar / 4 pi)  int_0^inf dOmega  w(Omega, T)
        * Tr[...](Omega)

evaluated by Gauss-Legendre quadrature mapped onto (0, inf) with the
scale set by the smallest separation; the overall sign convention is
fixed so that two identical dielectric spheres in vacuum attract (the
force vector returned is the force ON the target sphere, in newtons).

The thermal weight defaults to coth(hbar Omega / 2 kB T), whose zero-
temperature limit is 1; the oscillatory variant cot(hbar Omega / kB T)
is selectable for comparison but destroys quadrature convergence.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.constants import Boltzmann, c as C_LIGHT, hbar

from .loopalgebra import _LoopEvaluator, _word_matrix, enumerate_loop_words
from .specialfn import BesselKind, gauss_legendre, spherical_bessel_table
from .translation import (
    OUTGOING_TO_REGULAR,
    TranslationTruncationWarning,
    vector_indices,
    vector_translation,
    vector_translation_gradient,
)


class QuadratureConvergenceError(ArithmeticError):
    """Frequency quadrature failed to settle; carries the partial result."""

    def __init__(self, message, partial):
        super().__init__(message)
        self.partial = partial


class GradientStepError(ArithmeticError):
    pass


@dataclass(frozen=True)
class ThermalWeight:
    """Temperature factor; mode is derived from the temperature.

    Zero-temperature mode returns weight 1 for every Omega > 0.
    """

    temperature: float
    mode: str = ""
    variant: str = "coth"

    def __post_init__(self):
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        derived = ("zero-temperature" if self.temperature == 0.0
                   else "finite-temperature")
        if self.mode and self.mode != derived:
            raise ValueError(
                f"mode {self.mode!r} inconsistent with T = {self.temperature}")
        object.__setattr__(self, "mode", derived)

    def __call__(self, omega):
        return thermal_weight(omega, self.temperature, variant=self.variant)


def thermal_weight(omega, temperature, variant="coth"):
    """Temperature factor of the frequency integrand; 1 at T = 0."""
    if omega <= 0:
        raise ValueError("omega must be > 0")
    if temperature < 0:
        raise ValueError("temperature must be >= 0")
    if temperature == 0.0:
        return 1.0
    x = hbar * omega / (Boltzmann * temperature)
    if variant == "coth":
        return 1.0 / math.tanh(0.5 * x)
    if variant == "literal-cot":
        return 1.0 / math.tan(x)
    raise ValueError(f"unknown thermal variant {variant!r}")


@dataclass(frozen=True)
class ForceResult:
    """Force on the target sphere (newtons) with per-order breakdown."""

    force: np.ndarray
    per_order: dict
    node_count: int
    error_estimate: float
    target: int
    l_max: int
    order_max: int

    def total_from_orders(self):
        return sum(self.per_order.values())


def surface_kernel_radial(l_values, x_surface):
    """Default per-L kernel x i_L(x) k_L(x) at the target surface.

    Product of the regular and irregular radial functions evaluated at
    the sphere surface (channel measure taken as unity); tends to a
    constant per L as x -> 0, so large-separation observables are
    kernel-independent.
    """
    l_top = int(np.max(l_values))
    i_tab = spherical_bessel_table(BesselKind.MODIFIED_I, l_top, x_surface)
    k_tab = spherical_bessel_table(BesselKind.MODIFIED_K, l_top, x_surface)
    return x_surface * i_tab[l_values] * k_tab[l_values]


def unit_kernel(l_values, x_surface):
    """Trivial kernel for diagnostics."""
    return np.ones_like(l_values, dtype=float)


def frequency_rule(nodes, omega_scale):
    """Gauss-Legendre rule mapped onto (0, inf) via Omega = W (1-t)/t.

    The integrand decays like exp(-2 n_B Omega d / c); omega_scale should
    be of order c / (2 n_B d).
    """
    base = gauss_legendre(nodes)
    t = 0.5 * (base.nodes + 1.0)
    w = 0.5 * base.weights
    omegas = omega_scale * (1.0 - t) / t
    weights = w * omega_scale / t ** 2
    order = np.argsort(omegas)
    return omegas[order], weights[order]


def grad_last_translation(word, system, omega, l_max, method="analytic",
                          c=C_LIGHT, step_scale=1e-3):
    """Cartesian derivative blocks of the word's closing translation block.

    method "analytic" differentiates the addition-theorem sum through the
    gradient formula; "fd" uses Richardson-extrapolated central
    differences and raises GradientStepError when the extrapolation does
    not converge.  The two routes agree to ~1e-7 and cross-check each
    other in the test suite.
    """
    last, target = word.indices[-2], word.indices[-1]
    d = system.separation(last - 1, target - 1)
    k = 1j * system.background_wavenumber(omega, c=c)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TranslationTruncationWarning)
        if method == "analytic":
            return vector_translation_gradient(d, k, l_max,
                                               OUTGOING_TO_REGULAR)

        def block(dd):
            return vector_translation(dd, k, l_max,
                                      OUTGOING_TO_REGULAR).entries

        h = step_scale * float(np.linalg.norm(d))
        grads = []
        for e in np.eye(3):
            d1 = (block(d + h * e) - block(d - h * e)) / (2 * h)
            d2 = (block(d + 0.5 * h * e) - block(d - 0.5 * h * e)) / h
            rich = (4.0 * d2 - d1) / 3.0
            resid = np.max(np.abs(d2 - d1))
            scale = max(np.max(np.abs(rich)), 1e-300)
            if resid > 1e-3 * scale:
                raise GradientStepError(
                    f"finite-difference extrapolation residual {resid:.2e} "
                    f"did not converge at step {h:.2e}")
            grads.append(rich)
        return np.array(grads)


def _force_integrand(system, target, words, omega, l_max, kernel, c):
    """Per-order force density (N per rad/s) at one frequency node."""
    ev = _LoopEvaluator(system, omega, l_max, c=c)
    x_surf = system.background_wavenumber(omega, c=c) \
        * system.radii[target - 1]
    l_vals = np.array([l for _, l, _ in vector_indices(l_max)])
    k_diag = kernel(l_vals, x_surf)
    per_order = {}
    for word in words:
        chain = _word_matrix(ev, word, drop_last_hop=True)
        last, tgt = word.indices[-2], word.indices[-1]
        d = system.separation(last - 1, tgt - 1)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TranslationTruncationWarning)
            grads = vector_translation_gradient(d, ev.k, l_max,
                                                OUTGOING_TO_REGULAR)
        sign = -1.0 if word.order % 2 == 0 else 1.0   # -(-1)^n
        vec = np.empty(3)
        for ci in range(3):
            closed = chain @ grads[ci]
            vec[ci] = sign * np.real(np.sum(k_diag * np.diagonal(closed)))
        acc = per_order.setdefault(word.order, np.zeros(3))
        acc += vec
    return per_order


def _force_with_rule(system, target, temperature, l_max, order_max,
                     omegas, weights, kernel, variant, c):
    words = enumerate_loop_words(system.size, order_max, target)
    per_order = {}
    pref = hbar / (4.0 * math.pi)
    for omega, w in zip(omegas, weights):
        node = _force_integrand(system, target, words, omega, l_max,
                                kernel, c)
        tw = thermal_weight(omega, temperature, variant=variant)
        for order, vec in node.items():
            acc = per_order.setdefault(order, np.zeros(3))
            acc += pref * w * tw * vec
    return per_order


def casimir_force(system, target=1, temperature=0.0, l_max=1, order_max=4,
                  quad_nodes=48, kernel=surface_kernel_radial,
                  variant="coth", omega_scale=None, c=C_LIGHT,
                  quad_rtol=1e-3):
    """Casimir force on one sphere of the scene.

    Parameters
    ----------
    system : SphereSystem
    target : int
        1-based index of the sphere the force acts on
    temperature : float
        kelvin; 0 selects the zero-temperature weight (unity)
    l_max, order_max : int
        angular and scattering-order truncation
    quad_nodes : int
        frequency quadrature order; the error estimate compares against
        the half-order rule
    kernel : callable
        per-L surface weight (l_values, x_surface) -> weights
    omega_scale : float, optional
        frequency mapping scale; default c / (2 n_B d_min)

    Returns
    -------
    ForceResult

    Raises
    ------
    QuadratureConvergenceError
        when halving the node count moves the force by more than
        quad_rtol relative; the exception carries the partial result.
    """
    if system.size < 2:
        raise ValueError("need at least two spheres")
    if not 1 <= target <= system.size:
        raise ValueError(f"target {target} outside 1..{system.size}")
    if quad_nodes < 8:
        raise ValueError("quad_nodes must be >= 8 (the error estimate "
                         "compares against the half-order rule)")
    if omega_scale is None:
        d_min = min(np.linalg.norm(system.separation(a, b))
                    for a in range(system.size) for b in range(a))
        n_b = system.background_wavenumber(1.0, c=c) * c
        omega_scale = c / (2.0 * n_b * d_min)

    omegas, weights = frequency_rule(quad_nodes, omega_scale)
    per_order = _force_with_rule(system, target, temperature, l_max,
                                 order_max, omegas, weights, kernel,
                                 variant, c)
    om_h, w_h = frequency_rule(quad_nodes // 2, omega_scale)
    per_order_half = _force_with_rule(system, target, temperature, l_max,
                                      order_max, om_h, w_h, kernel,
                                      variant, c)
    force = sum(per_order.values())
    force_half = sum(per_order_half.values())
    err = float(np.max(np.abs(force - force_half)))
    result = ForceResult(force=force, per_order=per_order,
                         node_count=len(omegas), error_estimate=err,
                         target=target, l_max=l_max, order_max=order_max)
    scale = float(np.max(np.abs(force)))
    if scale > 0 and err > quad_rtol * scale:
        raise QuadratureConvergenceError(
            f"frequency quadrature error estimate {err:.3e} exceeds "
            f"{quad_rtol:.1e} of |F| = {scale:.3e}", partial=result)
    return result
