"""Tests for scalar/vector translation blocks and the projection oracle."""

import itertools
import warnings

import numpy as np
import pytest

from casloop.specialfn import BesselKind, spherical_bessel
from casloop.translation import (
    OUTGOING_TO_REGULAR,
    REGULAR_TO_REGULAR,
    OracleQuadratureError,
    TranslationTruncationWarning,
    dump_block_csv,
    scalar_dimension,
    scalar_translation,
    scalar_translation_gradient,
    translation_oracle,
    vector_dimension,
    vector_translation,
    vector_translation_gradient,
)

AXIAL = np.array([0.0, 0.0, 1.0])
OBLIQUE = np.array([0.4, -0.25, 0.85])


def quiet(fn, *args, **kwargs):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TranslationTruncationWarning)
        return fn(*args, **kwargs)


def test_block_dimensions():
    blk = scalar_translation(AXIAL, 1.0, 3, OUTGOING_TO_REGULAR)
    assert blk.entries.shape == (scalar_dimension(3),) * 2
    assert scalar_dimension(3) == 3 * (3 + 2) + 1
    vlk = vector_translation(AXIAL, 1.0, 3, OUTGOING_TO_REGULAR)
    assert vlk.entries.shape == (vector_dimension(3),) * 2
    assert vector_dimension(3) == 2 * 3 * (3 + 2)


def test_zero_displacement_identity():
    for build, dim in ((scalar_translation, scalar_dimension),
                       (vector_translation, vector_dimension)):
        blk = build(np.zeros(3), 1.0, 2, REGULAR_TO_REGULAR)
        assert np.array_equal(blk.entries, np.eye(dim(2), dtype=complex))


def test_outgoing_requires_displacement():
    with pytest.raises(ValueError):
        scalar_translation(np.zeros(3), 1.0, 2, OUTGOING_TO_REGULAR)
    with pytest.raises(ValueError):
        vector_translation(np.zeros(3), 1.0, 2, OUTGOING_TO_REGULAR)


def test_axial_m_conservation():
    blk = vector_translation(AXIAL, 1.0, 2, OUTGOING_TO_REGULAR)
    for (p2, l2, m2), (p1, l1, m1) in itertools.product(
            [("TE", 1, 0), ("TE", 2, 1), ("TM", 1, -1), ("TM", 2, 2)],
            repeat=2):
        if m1 != m2:
            assert blk.entry((p2, l2, m2), (p1, l1, m1)) == 0.0


def test_monopole_entry_is_h0():
    # (0,0)->(0,0) outgoing entry for axial displacement reduces to
    # h0+(kd): single q = 0 term, 4pi Y00 G2(00;00;0) = 1
    k, dist = 1.0, 1.7
    blk = scalar_translation(dist * AXIAL, k, 2, OUTGOING_TO_REGULAR)
    expect = spherical_bessel(BesselKind.OUTGOING_H_PLUS, 0, k * dist)
    assert blk.entry((0, 0), (0, 0)) == pytest.approx(expect, rel=1e-12)
    oracle = translation_oracle(dist * AXIAL, k, 0, 0, 0, 0,
                                ("scalar", "scalar"), OUTGOING_TO_REGULAR)
    assert oracle == pytest.approx(expect, rel=1e-8)


def test_collinear_composition_converges():
    k = 1.0
    d1, d2 = 0.4 * AXIAL, 0.35 * AXIAL
    window = scalar_dimension(2)
    errs = []
    for l_max in range(2, 7):
        a1 = quiet(scalar_translation, d1, k, l_max, REGULAR_TO_REGULAR).entries
        a2 = quiet(scalar_translation, d2, k, l_max, REGULAR_TO_REGULAR).entries
        a12 = quiet(scalar_translation, d1 + d2, k, l_max,
                    REGULAR_TO_REGULAR).entries
        errs.append(np.max(np.abs((a1 @ a2 - a12)[:window, :window])))
    assert all(e2 < e1 for e1, e2 in zip(errs, errs[1:]))
    assert errs[-1] < 1e-6


def test_inverse_property():
    # observed on the fixed l<=2 window with k|d| <= l_max/2
    k, d = 1.0, 0.8 * AXIAL
    window = scalar_dimension(2)
    l_max = 6
    a = quiet(scalar_translation, d, k, l_max, REGULAR_TO_REGULAR).entries
    b = quiet(scalar_translation, -d, k, l_max, REGULAR_TO_REGULAR).entries
    dev = np.abs((a @ b - np.eye(a.shape[0]))[:window, :window])
    assert np.max(dev) < 1e-8


@pytest.mark.parametrize("k", [1.0, 1.0j])
@pytest.mark.parametrize("basis", [OUTGOING_TO_REGULAR, REGULAR_TO_REGULAR])
def test_scalar_oracle_agreement(k, basis):
    blk = scalar_translation(OBLIQUE, k, 2, basis)
    scale = np.max(np.abs(blk.entries))
    for (l1, m1), (l2, m2) in itertools.product(
            [(0, 0), (1, 1), (2, -1), (2, 0)], repeat=2):
        fast = blk.entry((l2, m2), (l1, m1))
        orc = translation_oracle(OBLIQUE, k, l1, m1, l2, m2,
                                 ("scalar", "scalar"), basis)
        assert abs(fast - orc) <= 1e-6 * max(abs(orc), 1e-3 * scale)


@pytest.mark.parametrize("k", [1.0, 0.9j])
def test_vector_oracle_agreement(k):
    blk = vector_translation(OBLIQUE, k, 2, OUTGOING_TO_REGULAR)
    scale = np.max(np.abs(blk.entries))
    cases = [("TE", 1, 0), ("TE", 2, 1), ("TM", 1, -1), ("TM", 2, 0)]
    for (p1, l1, m1), (p2, l2, m2) in itertools.product(cases, repeat=2):
        fast = blk.entry((p2, l2, m2), (p1, l1, m1))
        orc = translation_oracle(OBLIQUE, k, l1, m1, l2, m2, (p2, p1),
                                 OUTGOING_TO_REGULAR)
        assert abs(fast - orc) <= 1e-6 * max(abs(orc), 1e-3 * scale)


def test_oracle_orthonormal_at_zero_displacement():
    # regular-to-regular at d = 0: diagonal 1, off-diagonal 0
    val = translation_oracle(np.zeros(3), 1.0, 1, 0, 1, 0, ("TE", "TE"),
                             REGULAR_TO_REGULAR)
    assert val == pytest.approx(1.0, abs=1e-8)
    val = translation_oracle(np.zeros(3), 1.0, 1, 0, 2, 0, ("TM", "TM"),
                             REGULAR_TO_REGULAR)
    assert abs(val) < 1e-8
    val = translation_oracle(np.zeros(3), 1.0, 1, 1, 1, 1, ("TM", "TE"),
                             REGULAR_TO_REGULAR)
    assert abs(val) < 1e-8


def test_oracle_rejects_unreachable_tolerance():
    with pytest.raises(OracleQuadratureError) as err:
        translation_oracle(AXIAL, 1.0, 2, 1, 2, 1, ("scalar", "scalar"),
                           OUTGOING_TO_REGULAR, n_theta=6, tol=0.0)
    assert err.value.error > 0


def test_truncation_warning():
    with pytest.warns(TranslationTruncationWarning):
        scalar_translation(9.0 * AXIAL, 1.0, 2, OUTGOING_TO_REGULAR)


def test_modified_basis_reality_structure():
    # axial displacement, imaginary wavenumber: same-pol entries real,
    # cross-pol entries purely imaginary
    blk = vector_translation(1.2 * AXIAL, 0.8j, 2, OUTGOING_TO_REGULAR)
    npol = vector_dimension(2) // 2
    same = np.block([[np.ones((npol, npol)), np.zeros((npol, npol))],
                     [np.zeros((npol, npol)), np.ones((npol, npol))]])
    scale = np.max(np.abs(blk.entries))
    assert np.max(np.abs(blk.entries.imag * same)) < 1e-12 * scale
    assert np.max(np.abs(blk.entries.real * (1 - same))) < 1e-12 * scale


@pytest.mark.parametrize("k", [1.0, 0.7j])
def test_gradient_matches_finite_differences(k):
    d = np.array([0.3, -0.2, 1.0])
    h = 1e-6
    g = scalar_translation_gradient(d, k, 2, OUTGOING_TO_REGULAR)
    for c, e in enumerate(np.eye(3)):
        fd = (scalar_translation(d + h * e, k, 2, OUTGOING_TO_REGULAR).entries
              - scalar_translation(d - h * e, k, 2,
                                   OUTGOING_TO_REGULAR).entries) / (2 * h)
        assert np.max(np.abs(g[c] - fd)) < 1e-7 * np.max(np.abs(fd))
    gv = vector_translation_gradient(d, k, 1, OUTGOING_TO_REGULAR)
    for c, e in enumerate(np.eye(3)):
        fd = (quiet(vector_translation, d + h * e, k, 1,
                    OUTGOING_TO_REGULAR).entries
              - quiet(vector_translation, d - h * e, k, 1,
                      OUTGOING_TO_REGULAR).entries) / (2 * h)
        assert np.max(np.abs(gv[c] - fd)) < 1e-7 * np.max(np.abs(fd))


def test_csv_dump(tmp_path):
    blk = vector_translation(AXIAL, 1.0, 1, OUTGOING_TO_REGULAR)
    path = tmp_path / "block.csv"
    dump_block_csv(blk, path)
    lines = path.read_text().splitlines()
    assert lines[2] == "row,col,real,imag"
    assert len(lines) == 3 + vector_dimension(1) ** 2
    row, col, re_s, im_s = lines[3].split(",")
    assert (int(row), int(col)) == (0, 0)
    assert complex(float(re_s), float(im_s )) == blk.entries[0, 0]
