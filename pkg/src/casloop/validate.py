"""Built-in validation suite: oracle cross-checks runnable from the CLI.

Each check returns (name, passed, detail); the CLI prints one line per
check.  These are the same oracles the test suite uses, packaged for
field diagnosis of an installed build.
"""

import itertools
import math

import numpy as np
from scipy.constants import c as C_LIGHT

from .geodesic import (
    ToyModelSpec,
    conic_through_point,
    solve_closed_geodesic,
    toy_family_metric,
    winding_sum,
)
from .media import VACUUM, constant_material
from .scattering import born_coefficients, mie_coefficients
from .translation import (
    OUTGOING_TO_REGULAR,
    scalar_translation,
    translation_oracle,
    vector_translation,
)


def _check_scalar_oracle():
    d = np.array([0.35, -0.2, 0.9])
    blk = scalar_translation(d, 1.0, 2, OUTGOING_TO_REGULAR)
    scale = np.max(np.abs(blk.entries))
    worst = 0.0
    for (l1, m1), (l2, m2) in itertools.product(
            [(0, 0), (1, 1), (2, -1)], repeat=2):
        fast = blk.entry((l2, m2), (l1, m1))
        orc = translation_oracle(d, 1.0, l1, m1, l2, m2,
                                 ("scalar", "scalar"), OUTGOING_TO_REGULAR)
        worst = max(worst, abs(fast - orc) / max(abs(orc), 1e-3 * scale))
    return worst < 1e-6, f"max rel dev {worst:.2e}"


def _check_vector_oracle():
    d = np.array([0.0, 0.0, 1.0])
    worst = 0.0
    for k in (1.0, 0.8j):
        blk = vector_translation(d, k, 2, OUTGOING_TO_REGULAR)
        scale = np.max(np.abs(blk.entries))
        for (p1, l1, m1), (p2, l2, m2) in itertools.product(
                [("TE", 1, 0), ("TM", 1, 0), ("TM", 2, 1)], repeat=2):
            fast = blk.entry((p2, l2, m2), (p1, l1, m1))
            orc = translation_oracle(d, k, l1, m1, l2, m2, (p2, p1),
                                     OUTGOING_TO_REGULAR)
            worst = max(worst, abs(fast - orc) / max(abs(orc), 1e-3 * scale))
    return worst < 1e-6, f"max rel dev {worst:.2e}"


def _check_translation_identity():
    from .translation import vector_dimension
    blk = vector_translation(np.zeros(3), 1.0, 2, "regular-to-regular")
    dev = np.max(np.abs(blk.entries - np.eye(vector_dimension(2))))
    return dev == 0.0, f"max dev from identity {dev:.1e}"


def _check_mie_born():
    worst = 0.0
    radius = 1.0e-6
    de = 1e-4
    for kr in (0.1, 0.5):
        omega = kr * C_LIGHT / radius
        mie = mie_coefficients(radius, constant_material(1.0 + de), VACUUM,
                               omega, 2)
        for l in (1, 2):
            a_born, _ = born_coefficients(l, kr, delta_eps=de)
            worst = max(worst, abs(mie.alpha(l) / a_born - 1.0))
    return worst < 1e-3, f"max rel dev {worst:.2e}"


def _check_mie_dipole():
    radius, eps = 1.0e-6, 2.25
    kr = 0.01
    mie = mie_coefficients(radius, constant_material(eps), VACUUM,
                           kr * C_LIGHT / radius, 1)
    ratio = mie.alpha(1) / (kr ** 3 * (eps - 1) / (eps + 2))
    dev = abs(ratio / (4.0 / (3.0 * math.pi)) - 1.0)
    return dev < 0.01, f"quasistatic ratio dev {dev:.2e}"


def _check_geodesic_conics():
    worst_dev, worst_drift = 0.0, 0.0
    for ecc in (0.0, 0.5):
        conic = conic_through_point(1.0, 0.0, ecc)
        energy = 2.0 / (conic.semi_latus * 2.0)
        spec = ToyModelSpec(2.0, energy, (1.0, 0.0))
        metric = toy_family_metric(spec, C_LIGHT, eccentricity=ecc)
        orbit = solve_closed_geodesic(metric, (1.0, 0.0), math.pi / 2)
        r_pred = conic.radius(orbit.positions[:, 1])
        worst_dev = max(worst_dev,
                        float(np.max(np.abs(orbit.positions[:, 0] - r_pred))))
        worst_drift = max(worst_drift, float(np.max(np.abs(
            orbit.conserved / orbit.conserved[0] - 1.0))))
    return (worst_dev < 1e-6 and worst_drift < 1e-8,
            f"conic dev {worst_dev:.2e}, drift {worst_drift:.2e}")


def _check_winding_identities():
    ok = winding_sum(math.log(2.0)) == 1.0
    resid = abs(winding_sum(1.0) - winding_sum(1.0, n_max=5)
                - math.exp(-6.0) / (1.0 - math.exp(-1.0)))
    return ok and resid < 1e-15, f"tail identity residual {resid:.1e}"


CHECKS = [
    ("translation-identity", _check_translation_identity),
    ("translation-scalar-oracle", _check_scalar_oracle),
    ("translation-vector-oracle", _check_vector_oracle),
    ("mie-born-limit", _check_mie_born),
    ("mie-dipole-limit", _check_mie_dipole),
    ("geodesic-conic-family", _check_geodesic_conics),
    ("winding-identities", _check_winding_identities),
]


def run_validation():
    """Run every check; returns [(name, passed, detail)]."""
    results = []
    for name, fn in CHECKS:
        try:
            passed, detail = fn()
        except Exception as exc:          # a crash is a failure with detail
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        results.append((name, passed, detail))
    return results
