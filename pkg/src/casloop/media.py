r"""Material response on the imaginary frequency axis, sphere scenes, and
the effective metric / connection they induce.

Response models are evaluated at rotated frequency Omega = i*omega where
Kramers-Kronig-compatible permittivities and permeabilities are real and
monotone, keeping all downstream scattering quantities real.  The metric
read off the fluctuation propagator's path measure is

    g_ij(x, Omega) = (Omega^2 / c^2) * (eps * mu)(x, Omega) * delta_ij

for isotropic media (stored with the frequency prefactor applied), and the
geodesic machinery consumes its Levi-Civita connection.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.constants import c as C_LIGHT


class MaterialError(ValueError):
    pass


class MetricDomainError(ValueError):
    pass


class SingularMetricError(ValueError):
    pass


@dataclass(frozen=True)
class Oscillator:
    strength: float
    resonance: float      # rad/s
    damping: float        # rad/s


@dataclass(frozen=True)
class MaterialModel:
    """Isotropic response model; kind 'constant' or 'drude-lorentz'."""

    kind: str
    eps_value: float = 1.0
    mu_value: float = 1.0
    eps_oscillators: tuple = ()
    mu_oscillators: tuple = ()
    name: str = ""


VACUUM = MaterialModel(kind="constant", eps_value=1.0, mu_value=1.0,
                       name="vacuum")


def constant_material(eps, mu=1.0, name=""):
    return MaterialModel(kind="constant", eps_value=float(eps),
                         mu_value=float(mu), name=name)


def drude_lorentz_material(eps_oscillators=(), mu_oscillators=(), name=""):
    eps_osc = tuple(Oscillator(*o) if not isinstance(o, Oscillator) else o
                    for o in eps_oscillators)
    mu_osc = tuple(Oscillator(*o) if not isinstance(o, Oscillator) else o
                   for o in mu_oscillators)
    return MaterialModel(kind="drude-lorentz", eps_oscillators=eps_osc,
                         mu_oscillators=mu_osc, name=name)


def _osc_sum(oscillators, omega):
    total = 1.0
    for osc in oscillators:
        if osc.strength < 0:
            raise MaterialError(
                f"oscillator strength {osc.strength} < 0 in material model")
        w0 = osc.resonance
        total += osc.strength * w0 ** 2 / (w0 ** 2 + omega ** 2
                                           + osc.damping * omega)
    return total


def evaluate_response(model, omega):
    """(eps, mu) of a model at imaginary-axis frequency Omega >= 0 (rad/s).

    Drude-Lorentz oscillators contribute strength*w0^2/(w0^2 + O^2 + g*O),
    which is real, monotone non-increasing in Omega and tends to 1 at high
    frequency.
    """
    if omega < 0:
        raise MaterialError("imaginary-axis frequency must be >= 0")
    if model.kind == "constant":
        return model.eps_value, model.mu_value
    if model.kind == "drude-lorentz":
        return (_osc_sum(model.eps_oscillators, omega),
                _osc_sum(model.mu_oscillators, omega))
    raise MaterialError(f"unknown material kind {model.kind!r}")


# ---------------------------------------------------------------------------
# sphere scene
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SphereSystem:
    """Sphere centers (m), radii (m), material models and background."""

    centers: np.ndarray
    radii: np.ndarray
    materials: tuple
    background: MaterialModel = VACUUM

    def __post_init__(self):
        centers = np.atleast_2d(np.asarray(self.centers, dtype=float))
        radii = np.asarray(self.radii, dtype=float)
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "radii", radii)
        if centers.shape[0] != radii.shape[0] or len(self.materials) != radii.shape[0]:
            raise ValueError("centers, radii and materials must align")
        if np.any(radii <= 0):
            raise ValueError("sphere radii must be positive")
        n = radii.shape[0]
        for a in range(n):
            for b in range(a + 1, n):
                gap = np.linalg.norm(centers[a] - centers[b])
                if gap <= radii[a] + radii[b]:
                    raise ValueError(
                        f"spheres {a + 1} and {b + 1} overlap "
                        f"(distance {gap:.3e} <= {radii[a] + radii[b]:.3e})")

    @property
    def size(self):
        return self.radii.shape[0]

    def separation(self, a, b):
        return self.centers[a] - self.centers[b]

    def background_wavenumber(self, omega, c=C_LIGHT):
        eps_b, mu_b = evaluate_response(self.background, omega)
        if eps_b * mu_b <= 0:
            raise MaterialError("background eps*mu must be positive")
        return np.sqrt(eps_b * mu_b) * omega / c


# ---------------------------------------------------------------------------
# effective metric and connection
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EffectiveMetric:
    """Position-dependent metric g_ij(x) with the (Omega/c)^2 factor applied.

    evaluator maps a coordinate tuple to the symmetric (dim, dim) matrix;
    gradient, when present, returns dg[i, j, k] = d g_ij / d x_k.  `scale`
    records the constant (Omega/c)^2 prefactor so the bare conformal
    factor can be recovered.
    """

    dimension: int
    omega: float
    evaluator: object
    gradient: object = None
    coords: str = "cartesian"
    scale: float = 1.0

    def g(self, x):
        return np.asarray(self.evaluator(np.asarray(x, dtype=float)))

    def dg(self, x, step=None):
        x = np.asarray(x, dtype=float)
        if self.gradient is not None:
            return np.asarray(self.gradient(x))
        h = step if step is not None else 1e-5 * max(1.0, float(np.max(np.abs(x))))
        out = np.empty((self.dimension, self.dimension, self.dimension))
        for k in range(self.dimension):
            dx = np.zeros(self.dimension)
            dx[k] = h
            out[:, :, k] = (self.g(x + dx) - self.g(x - dx)) / (2 * h)
        return out


def effective_metric(eps_field, mu_field, omega, dimension=3, c=C_LIGHT):
    """Conformally flat metric (Omega/c)^2 eps(x) mu(x) delta_ij.

    eps_field / mu_field are either scalars or callables of position.
    Raises MetricDomainError where eps*mu <= 0.
    """
    def as_field(f):
        return f if callable(f) else (lambda x, v=float(f): v)

    eps_f, mu_f = as_field(eps_field), as_field(mu_field)
    scale = (omega / c) ** 2

    def evaluator(x):
        prod = eps_f(x) * mu_f(x)
        if prod <= 0:
            raise MetricDomainError(f"eps*mu = {prod:g} <= 0 at x = {x}")
        return scale * prod * np.eye(dimension)

    return EffectiveMetric(dimension=dimension, omega=omega,
                           evaluator=evaluator, coords="cartesian",
                           scale=scale)


def polar_conformal_metric(v_of_r, omega, dv_of_r=None, c=C_LIGHT):
    """2D metric (Omega/c)^2 V(r) (dr^2 + r^2 dtheta^2) in the (r, theta) chart."""
    scale = (omega / c) ** 2

    def evaluator(x):
        r = x[0]
        v = v_of_r(r)
        if v <= 0:
            raise MetricDomainError(f"conformal factor V(r) = {v:g} <= 0")
        return scale * np.array([[v, 0.0], [0.0, v * r ** 2]])

    gradient = None
    if dv_of_r is not None:
        def gradient(x):
            r = x[0]
            v, dv = v_of_r(r), dv_of_r(r)
            dg = np.zeros((2, 2, 2))
            dg[0, 0, 0] = scale * dv
            dg[1, 1, 0] = scale * (dv * r ** 2 + 2 * r * v)
            return dg

    return EffectiveMetric(dimension=2, omega=omega, evaluator=evaluator,
                           gradient=gradient, coords="polar", scale=scale)


def inverse_square_toy_metric(length_scale, omega, offset=0.0, c=C_LIGHT):
    """Toy 2D metric with V(r) = R/r + offset in the (r, theta) chart.

    A negative offset opens up the closed-orbit family of the toy model;
    the pure R/r factor (offset 0) admits only marginal open loops.
    """
    R = float(length_scale)
    a = float(offset)
    return polar_conformal_metric(lambda r: R / r + a, omega,
                                  dv_of_r=lambda r: -R / r ** 2, c=c)


def flat_metric(dimension=2, omega=1.0, coords="cartesian", c=C_LIGHT):
    """Flat metric, Cartesian or polar chart; for testing and null checks."""
    if coords == "polar":
        return polar_conformal_metric(lambda r: 1.0, omega,
                                      dv_of_r=lambda r: 0.0, c=c)
    scale = (omega / c) ** 2
    return EffectiveMetric(dimension=dimension, omega=omega,
                           evaluator=lambda x: scale * np.eye(dimension),
                           gradient=lambda x: np.zeros((dimension,) * 3),
                           coords="cartesian", scale=scale)


def christoffel(metric, x, step=None):
    """Levi-Civita connection coefficients Gamma^i_jk at x.

    Gamma^i_jk = 1/2 g^il (d_j g_lk + d_k g_lj - d_l g_jk), symmetric in
    (j, k).  Uses analytic metric derivatives when the model provides
    them, central differences otherwise.
    """
    g = metric.g(x)
    try:
        g_inv = np.linalg.inv(g)
    except np.linalg.LinAlgError as exc:
        raise SingularMetricError(f"metric not invertible at x = {x}") from exc
    dg = metric.dg(x, step=step)
    # term[l,j,k] = d_j g_lk + d_k g_lj - d_l g_jk, with dg[a,b,c] = d_c g_ab
    term = np.einsum("lkj->ljk", dg) + dg - np.einsum("jkl->ljk", dg)
    return 0.5 * np.einsum("il,ljk->ijk", g_inv, term)
