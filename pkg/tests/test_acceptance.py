"""Acceptance suite: one test per criterion, each printing PASS/FAIL.

Run with `pytest tests/test_acceptance.py -v -s` to see one line per
criterion.  Tolerances are pinned here, not configurable.
"""

import filecmp
import itertools
import math
import warnings
from pathlib import Path

import numpy as np
from scipy.constants import c as C_LIGHT, hbar

from casloop.cli import run_scenario
from casloop.config import load_config
from casloop.force import casimir_force
from casloop.geodesic import (
    conic_through_point,
    solve_closed_geodesic,
    toy_family_metric,
    ToyModelSpec,
    winding_sum,
)
from casloop.loopalgebra import enumerate_loop_words
from casloop.media import SphereSystem, constant_material
from casloop.scattering import born_coefficients, mie_coefficients
from casloop.media import VACUUM
from casloop.translation import (
    OUTGOING_TO_REGULAR,
    REGULAR_TO_REGULAR,
    TranslationTruncationWarning,
    scalar_dimension,
    scalar_translation,
    translation_oracle,
    vector_dimension,
    vector_indices,
    vector_translation,
)

GLASS = constant_material(2.25)
SPHERE_RADIUS = 5.0e-8


def report(number, name, passed, detail):
    status = "PASS" if passed else "FAIL"
    print(f"ACCEPTANCE {number} {name}: {status} ({detail})")
    assert passed, f"criterion {number} {name}: {detail}"


def pair(separation):
    return SphereSystem(centers=[[0, 0, 0], [0, 0, separation]],
                        radii=[SPHERE_RADIUS, SPHERE_RADIUS],
                        materials=(GLASS, GLASS))


def test_criterion_1_translation_oracle_agreement():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for l_max, kd, axial in itertools.product((1, 2, 3), (0.5, 1.0, 2.0),
                                              (True, False)):
        d = np.array([0.0, 0.0, 1.0]) if axial \
            else np.array([0.35, -0.2, 0.6])
        d = d / np.linalg.norm(d)
        k = kd      # |d| = 1
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TranslationTruncationWarning)
            blk = vector_translation(d, k, l_max, OUTGOING_TO_REGULAR)
        scale = np.max(np.abs(blk.entries))
        idx = vector_indices(l_max)
        if l_max == 1:
            sample = list(itertools.product(idx, idx))
        else:
            sample = [(idx[rng.integers(len(idx))],
                       idx[rng.integers(len(idx))]) for _ in range(18)]
        for (p2, l2, m2), (p1, l1, m1) in sample:
            fast = blk.entry((p2, l2, m2), (p1, l1, m1))
            orc = translation_oracle(d, k, l1, m1, l2, m2, (p2, p1),
                                     OUTGOING_TO_REGULAR)
            worst = max(worst,
                        abs(fast - orc) / max(abs(orc), 1e-3 * scale))
    report(1, "translation-oracle", worst < 1e-6,
           f"max rel deviation {worst:.2e} over L_max 1..3, kd 0.5..2, "
           "axial and oblique")


def test_criterion_2_translation_group_law():
    # exact identity at zero displacement
    s0 = scalar_translation(np.zeros(3), 1.0, 3, REGULAR_TO_REGULAR)
    v0 = vector_translation(np.zeros(3), 1.0, 3, REGULAR_TO_REGULAR)
    ident = (np.array_equal(s0.entries, np.eye(scalar_dimension(3)))
             and np.array_equal(v0.entries, np.eye(vector_dimension(3))))
    # collinear composition on the fixed kd = 1 test, watched on the
    # fixed l <= 2 window
    d1, d2 = np.array([0, 0, 0.55]), np.array([0, 0, 0.45])
    window = scalar_dimension(2)
    errs = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TranslationTruncationWarning)
        for l_max in range(2, 7):
            a1 = scalar_translation(d1, 1.0, l_max,
                                    REGULAR_TO_REGULAR).entries
            a2 = scalar_translation(d2, 1.0, l_max,
                                    REGULAR_TO_REGULAR).entries
            a12 = scalar_translation(d1 + d2, 1.0, l_max,
                                     REGULAR_TO_REGULAR).entries
            errs.append(float(np.max(
                np.abs((a1 @ a2 - a12)[:window, :window]))))
    monotone = all(b < a for a, b in zip(errs, errs[1:]))
    report(2, "translation-group-law", ident and monotone,
           f"identity exact: {ident}; composition errors "
           + " > ".join(f"{e:.1e}" for e in errs))


def test_criterion_3_mie_born_limit():
    de = 1.0e-4
    radius = 1.0e-6
    worst = 0.0
    for kr in (0.1, 0.5):
        omega = kr * C_LIGHT / radius
        mie = mie_coefficients(radius, constant_material(1.0 + de), VACUUM,
                               omega, 2)
        for l in (1, 2):
            a_born, b_born = born_coefficients(l, kr, delta_eps=de)
            worst = max(worst, abs(mie.alpha(l) / a_born - 1.0),
                        abs(mie.beta(l) / b_born - 1.0))
    report(3, "mie-born-limit", worst < 1e-3,
           f"max rel deviation {worst:.2e} at contrast {de:g}")


def test_criterion_4_mie_dipole_limit():
    eps, radius = 2.25, 1.0e-6
    ratios = []
    for kr in (0.02, 0.01):
        omega = kr * C_LIGHT / radius
        mie = mie_coefficients(radius, constant_material(eps), VACUUM,
                               omega, 1)
        ratios.append(mie.alpha(1) / (kr ** 3 * (eps - 1) / (eps + 2)))
    settled = abs(ratios[1] / ratios[0] - 1.0)
    limit_dev = abs(ratios[1] / (4.0 / (3.0 * math.pi)) - 1.0)
    report(4, "mie-dipole-limit", settled < 0.01 and limit_dev < 0.01,
           f"ratio change {settled:.2e}, deviation from 4/(3 pi) "
           f"{limit_dev:.2e} at kR = 0.01")


def test_criterion_5_two_sphere_force_physics():
    system = pair(1.0e-6)
    f1 = casimir_force(system, 1, l_max=1, order_max=4, quad_nodes=40)
    f2 = casimir_force(system, 2, l_max=1, order_max=4, quad_nodes=40)
    n3 = np.linalg.norm(f1.force + f2.force) / np.linalg.norm(f1.force)
    transverse = np.max(np.abs(f1.force[:2])) / abs(f1.force[2])
    attraction = f1.force[2] > 0 and f2.force[2] < 0

    seps = np.geomspace(1.0e-6, 4.0e-6, 6)
    engine = [abs(casimir_force(pair(d), 1, l_max=1, order_max=2,
                                quad_nodes=40).force[2]) for d in seps]
    alpha = SPHERE_RADIUS ** 3 * (2.25 - 1) / (2.25 + 2)
    oracle = [7 * 23 * hbar * C_LIGHT * alpha ** 2
              / (4 * math.pi * d ** 8) for d in seps]
    slope_engine = np.polyfit(np.log(seps), np.log(engine), 1)[0]
    slope_oracle = np.polyfit(np.log(seps), np.log(oracle), 1)[0]
    slope_ok = abs(slope_engine - slope_oracle) < 0.1

    passed = n3 < 1e-8 and transverse < 1e-10 and attraction and slope_ok
    report(5, "two-sphere-force", passed,
           f"|F1+F2|/|F1| {n3:.1e}; transverse/axial {transverse:.1e}; "
           f"attractive {attraction}; slope {slope_engine:.4f} vs oracle "
           f"{slope_oracle:.1f}")


def test_criterion_6_loop_word_completeness():
    total = 0
    ok = True
    for n, order_max, anchor in itertools.product((2, 3, 4), (2, 3, 4, 5),
                                                  (1, 2)):
        words = [w.indices for w in enumerate_loop_words(n, order_max,
                                                         anchor)]
        brute = set()
        for order in range(2, order_max + 1):
            for interior in itertools.product(range(1, n + 1),
                                              repeat=order - 1):
                cand = (anchor,) + interior + (anchor,)
                if all(a != b for a, b in zip(cand, cand[1:])):
                    brute.add(cand)
        ok = ok and set(words) == brute and len(words) == len(brute)
        total += len(brute)
    report(6, "loop-word-completeness", ok,
           f"exact match with brute force over {total} words, N <= 4, "
           "order <= 5")


def test_criterion_7_toy_model_end_to_end():
    worst_dev, worst_drift, worst_res = 0.0, 0.0, 0.0
    for ecc in (0.0, 0.2, 0.5, 0.8):
        conic = conic_through_point(1.0, 0.0, ecc)
        energy = 2.0 / (conic.semi_latus * 2.0)
        spec = ToyModelSpec(2.0, energy, (1.0, 0.0))
        metric = toy_family_metric(spec, C_LIGHT, eccentricity=ecc)
        orbit = solve_closed_geodesic(metric, (1.0, 0.0), math.pi / 2)
        r_pred = conic.radius(orbit.positions[:, 1])
        worst_dev = max(worst_dev, float(np.max(
            np.abs(orbit.positions[:, 0] - r_pred))))
        worst_drift = max(worst_drift, float(np.max(np.abs(
            orbit.conserved / orbit.conserved[0] - 1.0))))
        worst_res = max(worst_res, orbit.closure_residual)
    winding_exact = winding_sum(math.log(2.0)) == 1.0
    tail_resid = abs(winding_sum(1.0) - winding_sum(1.0, n_max=3)
                     - math.exp(-4.0) / (1.0 - math.exp(-1.0)))
    passed = (worst_dev < 1e-6 and worst_drift < 1e-8 and winding_exact
              and tail_resid < 1e-15)
    report(7, "toy-model", passed,
           f"conic dev {worst_dev:.1e}; drift {worst_drift:.1e}; closure "
           f"{worst_res:.1e}; winding(ln 2) == 1: {winding_exact}; tail "
           f"residual {tail_resid:.1e}")


def test_criterion_8_quadrature_robustness():
    details = []
    ok = True
    for d in np.geomspace(0.8e-6, 3.0e-6, 5):
        system = pair(d)
        rn = casimir_force(system, 1, l_max=1, order_max=2, quad_nodes=32)
        r2n = casimir_force(system, 1, l_max=1, order_max=2, quad_nodes=64)
        moved = float(np.max(np.abs(r2n.force - rn.force)))
        ok = ok and moved < rn.error_estimate
        details.append(f"{moved:.1e}<{rn.error_estimate:.1e}")
    report(8, "quadrature-robustness", ok, "; ".join(details))


def test_criterion_9_determinism(tmp_path):
    scenario = Path(__file__).resolve().parents[1] / "scenarios" \
        / "two_spheres.yaml"
    run_scenario(load_config(scenario), "force-sweep", tmp_path / "a")
    run_scenario(load_config(scenario), "force-sweep", tmp_path / "b")
    same = filecmp.cmp(tmp_path / "a" / "force_sweep.csv",
                       tmp_path / "b" / "force_sweep.csv", shallow=False)
    report(9, "determinism", same,
           "repeated reference runs byte-identical: "
           f"{same}")
