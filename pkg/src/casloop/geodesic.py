r"""Closed geodesics of the effective metric, the exactly solvable 2D
inverse-distance toy model, and winding sums.

The loop equation q''^i + Gamma^i_jk q'^j q'^k = 0 is integrated in the
polar chart with adaptive Runge-Kutta; closure q(0) = q(1), q'(0) = q'(1)
is enforced by shooting (damped Newton on the launch angle, one full
revolution per closure test).

Toy model.  Conformal factors V(r) = R/r + a all share the orbit equation

    u''(theta) + u = E R / 2,    u = 1/r,  E = W/J^2,

whose solutions are the conics u = (E R / 2)(1 + ecc cos(theta - theta0))
with semi-latus rectum p = 2/(E R).  The geodesic first integral
u'^2 + u^2 = E V(u) fixes ecc^2 = 1 + 4 a/(E R^2): the pure a = 0 factor
admits only the marginal ecc = 1 loop (no closed orbit, the solver
reports no-closure there), and the closed ellipse of eccentricity ecc is
the exact geodesic of the member a = (ecc^2 - 1) E R^2 / 4 < 0.  The
conic family serves as the analytic oracle for the solver.  Orbit
lengths are taken in the frequency-scaled metric, l = contour integral
of sqrt(g_ij q'^i q'^j), so one frequency selects one loop size;
windings of a closed loop then sum to the geometric series
winding_sum(l) = exp(-l)/(1 - exp(-l)).
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.constants import c as C_LIGHT
from scipy.integrate import solve_ivp

from .media import christoffel, inverse_square_toy_metric
from .specialfn import mapped_gauss_legendre


class NoClosedOrbitError(RuntimeError):
    pass


class SingularRegionError(RuntimeError):
    pass


class OpenOrbitError(ValueError):
    pass


class WindingDivergenceError(ValueError):
    pass


@dataclass(frozen=True)
class ToyModelSpec:
    """Inverse-distance toy scene: V(r) = R/r, orbit constant E, base point."""

    length_scale: float
    energy: float = 1.0
    base_point: tuple = (1.0, 0.0)     # 2D Cartesian

    @property
    def base_polar(self):
        x, y = self.base_point
        return math.hypot(x, y), math.atan2(y, x)


@dataclass(frozen=True)
class ConicOrbit:
    semi_latus: float
    eccentricity: float
    orientation: float

    def radius(self, theta):
        u = (1.0 + self.eccentricity
             * np.cos(theta - self.orientation)) / self.semi_latus
        return 1.0 / u


@dataclass(frozen=True)
class GeodesicOrbit:
    """Closed orbit sampled over tau in [0, 1] with its motion constants."""

    taus: np.ndarray
    positions: np.ndarray        # polar (r, theta) samples
    velocities: np.ndarray       # d(r, theta)/d tau
    conserved: np.ndarray        # columns: V r^2 th', V (r'^2 + r^2 th'^2)
    closure_residual: float
    period: float

    @property
    def energy_constant(self):
        j = np.mean(self.conserved[:, 0])
        w = np.mean(self.conserved[:, 1])
        return w / j ** 2

    def cartesian(self):
        r, th = self.positions[:, 0], self.positions[:, 1]
        return np.stack([r * np.cos(th), r * np.sin(th)], axis=-1)


def _geodesic_rhs(metric):
    def rhs(_t, y):
        pos = y[:2]
        vel = y[2:]
        gamma = christoffel(metric, pos)
        acc = -np.einsum("ijk,j,k->i", gamma, vel, vel)
        return np.concatenate([vel, acc])
    return rhs


def _integrate_revolution(metric, r0, theta0, rdot0, thdot0, guard_radius,
                          t_max, rtol=1e-10):
    """Integrate until theta advances by 2 pi; returns the ivp solution."""
    direction = 1.0 if thdot0 >= 0 else -1.0

    def revolution(t, y):
        return (y[1] - theta0) * direction - 2.0 * math.pi
    revolution.terminal = True
    revolution.direction = 1.0

    def guard(t, y):
        return y[0] - guard_radius
    guard.terminal = True
    guard.direction = -1.0

    sol = solve_ivp(_geodesic_rhs(metric), (0.0, t_max),
                    [r0, theta0, rdot0, thdot0], method="RK45",
                    events=(revolution, guard), rtol=rtol, atol=1e-12,
                    dense_output=True)
    if sol.t_events[1].size:
        raise SingularRegionError(
            f"orbit entered the guard radius {guard_radius:g}")
    if not sol.t_events[0].size:
        raise NoClosedOrbitError(
            "no full revolution within the integration window; "
            "no closed orbit in this guess basin")
    return sol, sol.t_events[0][0]


def solve_closed_geodesic(metric, base_point, direction_guess, speed=1.0,
                          tol=1e-8, max_iter=25, guard_radius=None,
                          n_samples=257):
    """Shooting solver for a closed geodesic through a base point.

    Parameters
    ----------
    metric : EffectiveMetric
        2D metric in the polar chart
    base_point : (r, theta)
        launch point, polar coordinates
    direction_guess : float
        launch angle psi against the radial direction
        (rdot = s cos psi, r thdot = s sin psi)
    speed : float
        affine parametrization scale (does not affect the orbit shape)
    tol : float
        closure residual tolerance |q(1)-q(0)| + |q'(1)-q'(0)|

    Returns
    -------
    GeodesicOrbit

    Raises
    ------
    NoClosedOrbitError
        when no revolution completes or shooting fails to converge
    SingularRegionError
        when the orbit approaches a metric singularity
    """
    r0, theta0 = float(base_point[0]), float(base_point[1])
    if guard_radius is None:
        guard_radius = 1e-6 * r0
    t_max = 400.0 * r0 / speed

    def launch(psi):
        return speed * math.cos(psi), speed * math.sin(psi) / r0

    def radial_mismatch(psi):
        rdot0, thdot0 = launch(psi)
        sol, t_ret = _integrate_revolution(metric, r0, theta0, rdot0, thdot0,
                                           guard_radius, t_max)
        y = sol.sol(t_ret)
        return y[0] - r0, (sol, t_ret)

    psi = float(direction_guess)
    best = None
    for _ in range(max_iter):
        res, best = radial_mismatch(psi)
        if abs(res) < 0.1 * tol * r0:
            break
        dpsi = 1e-6
        res_p, _ = radial_mismatch(psi + dpsi)
        res_m, _ = radial_mismatch(psi - dpsi)
        slope = (res_p - res_m) / (2.0 * dpsi)
        if slope == 0.0:
            raise NoClosedOrbitError("flat shooting residual; no closure")
        step = -res / slope
        step = max(-0.5, min(0.5, step))      # damped update
        psi += step
    else:
        raise NoClosedOrbitError(
            f"shooting did not converge in {max_iter} iterations")

    sol, period = best
    taus = np.linspace(0.0, 1.0, n_samples)
    states = sol.sol(taus * period)
    positions = states[:2].T.copy()
    velocities = (states[2:] * period).T.copy()

    scale = metric.scale
    conserved = np.empty((n_samples, 2))
    for i in range(n_samples):
        g = metric.g(positions[i]) / scale
        v = velocities[i]
        conserved[i, 0] = g[1, 1] * v[1]
        conserved[i, 1] = v @ g @ v

    d_theta = (positions[-1, 1] - positions[0, 1] + math.pi) \
        % (2.0 * math.pi) - math.pi
    dq = math.hypot(positions[-1, 0] - positions[0, 0], r0 * d_theta) / r0
    dv = np.linalg.norm(velocities[-1] - velocities[0]) \
        / max(np.linalg.norm(velocities[0]), 1e-300)
    residual = dq + dv
    if residual > tol:
        raise NoClosedOrbitError(
            f"closure residual {residual:.3e} above tolerance {tol:.1e}")
    return GeodesicOrbit(taus=taus, positions=positions,
                         velocities=velocities, conserved=conserved,
                         closure_residual=residual, period=period)


# ---------------------------------------------------------------------------
# toy model analytics
# ---------------------------------------------------------------------------

def toy_orbit(spec):
    """Conic through the base point for the inverse-distance toy model.

    The orbit with integration constant E has semi-latus rectum
    p = 2/(E R); the base point is placed at an apsis (perihelion when it
    lies inside the p-circle, aphelion outside), which fixes eccentricity
    and orientation.
    """
    p = 2.0 / (spec.energy * spec.length_scale)
    r0, theta0 = spec.base_polar
    pu0 = p / r0
    if pu0 >= 1.0:
        ecc = pu0 - 1.0
        orientation = theta0
    else:
        ecc = 1.0 - pu0
        orientation = theta0 - math.pi
    if ecc >= 1.0:
        raise OpenOrbitError(
            f"constants give eccentricity {ecc:.6g} >= 1 (open conic)")
    return ConicOrbit(semi_latus=p, eccentricity=ecc,
                      orientation=orientation)


def conic_through_point(r0, theta0, eccentricity):
    """Conic of given eccentricity with (r0, theta0) as its perihelion."""
    if not 0.0 <= eccentricity < 1.0:
        raise OpenOrbitError(f"eccentricity {eccentricity} outside [0, 1)")
    return ConicOrbit(semi_latus=r0 * (1.0 + eccentricity),
                      eccentricity=eccentricity, orientation=theta0)


def conformal_offset(spec, eccentricity=None):
    """Offset a making the scene's conic the exact closed geodesic.

    a = (ecc^2 - 1) E R^2 / 4; the eccentricity defaults to the one the
    base point selects through toy_orbit.
    """
    if eccentricity is None:
        eccentricity = toy_orbit(spec).eccentricity
    return (eccentricity ** 2 - 1.0) * spec.energy \
        * spec.length_scale ** 2 / 4.0


def toy_family_metric(spec, omega, eccentricity=None, c=C_LIGHT):
    """Metric V = R/r + a of the family member carrying the scene's conic."""
    return inverse_square_toy_metric(
        spec.length_scale, omega,
        offset=conformal_offset(spec, eccentricity), c=c)


class LengthQuadratureError(ArithmeticError):
    pass


def orbit_length(orbit, metric, segments=16, nodes=12, tol=None):
    """Metric length of a closed orbit by composite Gauss quadrature.

    Includes the metric's frequency prefactor, so the length grows with
    Omega and one geodesic is selected per frequency.  When `tol` is
    given, the segment count is doubled for an error estimate and
    LengthQuadratureError is raised if the estimate exceeds it.
    """
    if isinstance(orbit, ConicOrbit):
        def speed(theta):
            th = theta - orbit.orientation
            u = (1.0 + orbit.eccentricity * np.cos(th)) / orbit.semi_latus
            r = 1.0 / u
            drdth = orbit.eccentricity * np.sin(th) * r * r \
                / orbit.semi_latus
            out = np.empty(theta.shape)
            for i, (rr, dd, tt) in enumerate(zip(r, drdth, theta)):
                g = metric.g([rr, tt])
                out[i] = math.sqrt(g[0, 0] * dd * dd + g[1, 1])
            return out
        lo, hi = 0.0, 2.0 * math.pi
        param_speed = speed
    else:
        def param_speed(taus):
            out = np.empty(taus.shape)
            pos = _interp_orbit(orbit, taus)
            for i, t in enumerate(taus):
                p, v = pos[0][i], pos[1][i]
                g = metric.g(p)
                out[i] = math.sqrt(v @ g @ v)
            return out
        lo, hi = 0.0, 1.0

    def composite(n_seg):
        total = 0.0
        edges = np.linspace(lo, hi, n_seg + 1)
        for a, b in zip(edges[:-1], edges[1:]):
            rule = mapped_gauss_legendre(nodes, a, b)
            total += rule.integrate(param_speed)
        return float(total)

    value = composite(segments)
    if tol is not None:
        refined = composite(2 * segments)
        err = abs(refined - value)
        if err > tol:
            raise LengthQuadratureError(
                f"length quadrature estimate {err:.2e} exceeds {tol:.1e}")
        return refined
    return value


def _interp_orbit(orbit, taus):
    pos = np.stack([np.interp(taus, orbit.taus, orbit.positions[:, i])
                    for i in range(2)], axis=-1)
    vel = np.stack([np.interp(taus, orbit.taus, orbit.velocities[:, i])
                    for i in range(2)], axis=-1)
    return pos, vel


def circle_length_closed_form(spec, omega, c=C_LIGHT):
    """Length of the circular toy orbit r0 = 2/(E R).

    Circumference times the root of the conformal factor of the family
    member carrying the circle, V_eff(r0) = R/r0 - E R^2/4 = E R^2/4:
    l = (Omega/c) 2 pi r0 sqrt(E R^2/4) = 2 pi (Omega/c) / sqrt(E).
    """
    return 2.0 * math.pi * (omega / c) / math.sqrt(spec.energy)


def winding_sum(orbit_length_value, n_max=None):
    """Geometric winding series sum_{n>=1} exp(-n l).

    Closed form exp(-l)/(1 - exp(-l)) when n_max is None; otherwise the
    partial sum, which differs from the closed form by exactly
    exp(-(n_max+1) l)/(1 - exp(-l)).
    """
    l = float(orbit_length_value)
    if l <= 0.0:
        raise WindingDivergenceError(f"winding series diverges for l = {l:g}")
    q = math.exp(-l)
    if n_max is None:
        return q / (1.0 - q)
    return sum(q ** n for n in range(1, int(n_max) + 1))


# ---------------------------------------------------------------------------
# toy-model pipeline
# ---------------------------------------------------------------------------

def eccentricity_grid(e_max=0.8, count=9):
    return np.linspace(0.0, float(e_max), int(count))


def _trapezoid_weights(grid):
    grid = np.asarray(grid, dtype=float)
    if grid.size == 1:
        return np.array([1.0])
    w = np.empty(grid.size)
    w[0] = 0.5 * (grid[1] - grid[0])
    w[-1] = 0.5 * (grid[-1] - grid[-2])
    w[1:-1] = 0.5 * (grid[2:] - grid[:-2])
    return w


def toy_z(spec, omega, eccentricities=None, c=C_LIGHT):
    """Loop trace of the toy model: winding sums over the ellipse family.

    Ellipses through the base point are parametrized by eccentricity with
    the base point as perihelion; each choice fixes its own integration
    constant E = 2/(p R), p = r0 (1 + ecc), and its own family offset, and
    its length is taken in that member's metric.  The family is summed
    with trapezoidal weights, a documented modeling choice.  A
    single-entry grid carries unit weight so one orbit gives
    winding_sum(l) exactly; an empty grid gives 0 (no closed loops).
    """
    if eccentricities is None:
        eccentricities = eccentricity_grid()
    grid = np.asarray(eccentricities, dtype=float)
    if grid.size == 0:
        return 0.0
    weights = _trapezoid_weights(grid)
    r0, theta0 = spec.base_polar
    total = 0.0
    for ecc, w in zip(grid, weights):
        conic = conic_through_point(r0, theta0, ecc)
        energy = 2.0 / (conic.semi_latus * spec.length_scale)
        member = ToyModelSpec(length_scale=spec.length_scale, energy=energy,
                              base_point=spec.base_point)
        metric = toy_family_metric(member, omega, eccentricity=ecc, c=c)
        total += w * winding_sum(orbit_length(conic, metric))
    return total


def toy_force(spec, omega_nodes=24, omega_scale=None, eccentricities=None,
              step=None, c=C_LIGHT):
    """Negative base-point gradient of the frequency-integrated toy Z.

    Central differences in the Cartesian base point; the frequency
    integral uses the same mapped Gauss-Legendre scheme as the sphere
    force and defines the pipeline (the small-Omega windings are resolved
    only as finely as the configured rule).
    """
    from .force import frequency_rule

    r0, _ = spec.base_polar
    if omega_scale is None:
        omega_scale = c / (2.0 * math.pi
                           * math.sqrt(spec.length_scale * r0))
    if step is None:
        step = 1e-5 * r0
    omegas, weights = frequency_rule(omega_nodes, omega_scale)

    def integrated_z(point):
        s = ToyModelSpec(length_scale=spec.length_scale, energy=spec.energy,
                         base_point=tuple(point))
        return sum(w * toy_z(s, om, eccentricities=eccentricities, c=c)
                   for om, w in zip(omegas, weights))

    x0 = np.asarray(spec.base_point, dtype=float)
    grad = np.empty(2)
    for i, e in enumerate(np.eye(2)):
        grad[i] = (integrated_z(x0 + step * e)
                   - integrated_z(x0 - step * e)) / (2.0 * step)
    return -grad


def orbit_dump_rows(orbit):
    """(tau, r, theta, x, y, conserved1, conserved2) rows for plotting."""
    cart = orbit.cartesian()
    rows = []
    for i, tau in enumerate(orbit.taus):
        rows.append((tau, orbit.positions[i, 0], orbit.positions[i, 1],
                     cart[i, 0], cart[i, 1], orbit.conserved[i, 0],
                     orbit.conserved[i, 1]))
    return rows


def toy_sweep_rows(spec, omegas, eccentricities=None, c=C_LIGHT):
    """(omega, l_circle, Z) rows over a frequency grid.

    l_circle is the length of the circular orbit through the base point,
    taken in its own family member's metric.
    """
    r0, theta0 = spec.base_polar
    circle = conic_through_point(r0, theta0, 0.0)
    energy = 2.0 / (circle.semi_latus * spec.length_scale)
    member = ToyModelSpec(length_scale=spec.length_scale, energy=energy,
                          base_point=spec.base_point)
    rows = []
    for omega in omegas:
        metric = toy_family_metric(member, omega, eccentricity=0.0, c=c)
        l_circle = orbit_length(circle, metric)
        rows.append((omega, l_circle,
                     toy_z(spec, omega, eccentricities=eccentricities, c=c)))
    return rows
