r"""Finite-displacement translation matrices for scalar and vector (TE/TM)
spherical waves, plus the brute-force surface-projection oracle.

Conventions
-----------
Basis functions carry unit-normalized angular parts: scalar psi_lm =
z_l(kr) Y_lm; vector TE wave M = L psi / sqrt(l(l+1)) with L = -i r x grad,
and TM wave N = (1/k) curl M.  A block A(d) re-expands a wave centered at
origin O about the target origin O' = O + d:

    psi^{src}_{L1 m1}(x - O) = sum A[(L2,m2),(L1,m1)](d) psi^{reg}_{L2 m2}(x - O')

Rows and columns are ordered (polarization, L, m) lexicographically with
TE before TM; the scalar basis includes L = 0.

A real wavenumber selects the oscillatory basis (regular j_l, outgoing
h+_l); a purely imaginary wavenumber k = i*kappa selects the imaginary-
frequency basis (regular i_l, outgoing k_l) in which, for axial
displacements, same-polarization entries are real and cross-polarization
entries purely imaginary (the fixed i carried by N = curl M / k; closed
loops cross polarizations an even number of times, so traces stay real).
The scalar fast path is the Gaunt-sum addition theorem; vector blocks are
lifted from scalar blocks by exact operator algebra (ladder components of
M, gradient formula for N) rather than transcribed coefficient tables.
The oracle below validates every sector against direct surface quadrature.
"""

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .specialfn import (
    BesselKind,
    clebsch_gordan,
    gaunt_coefficient,
    gauss_legendre,
    sph_harm,
    spherical_bessel_table,
    unit_vector_angles,
)

REGULAR_TO_REGULAR = "regular-to-regular"
OUTGOING_TO_REGULAR = "outgoing-to-regular"

_AXIS_TOL = 1e-14


class TranslationTruncationWarning(UserWarning):
    pass


class OracleQuadratureError(ArithmeticError):
    def __init__(self, message, value, error):
        super().__init__(message)
        self.value = value
        self.error = error


# ---------------------------------------------------------------------------
# index bookkeeping
# ---------------------------------------------------------------------------

def scalar_dimension(l_max):
    return (l_max + 1) ** 2


def vector_dimension(l_max):
    return 2 * l_max * (l_max + 2)


def scalar_index(l, m):
    return l * l + l + m


def scalar_indices(l_max):
    return [(l, m) for l in range(l_max + 1) for m in range(-l, l + 1)]


def vector_index(pol, l, m, l_max):
    base = l * l - 1 + l + m
    return base if pol == "TE" else base + l_max * (l_max + 2)


def vector_indices(l_max):
    per_pol = [(l, m) for l in range(1, l_max + 1) for m in range(-l, l + 1)]
    return [("TE", l, m) for l, m in per_pol] + \
           [("TM", l, m) for l, m in per_pol]


@dataclass(frozen=True)
class AngularBlock:
    """Dense translation (or derivative) block in the (pol, L, m) ordering."""

    entries: np.ndarray
    l_max: int
    displacement: np.ndarray
    k: complex
    basis_kind: str
    wave_kind: str           # "scalar" | "vector"

    def index(self, *args):
        if self.wave_kind == "scalar":
            l, m = args
            return scalar_index(l, m)
        pol, l, m = args
        return vector_index(pol, l, m, self.l_max)

    def entry(self, row, col):
        return self.entries[self.index(*row), self.index(*col)]


def dump_block_csv(block, path):
    """Debug dump (row index, col index, real, imag) for cross-tool checks."""
    with open(path, "w") as fh:
        fh.write("# translation block dump\n")
        fh.write(f"# wave_kind={block.wave_kind} basis={block.basis_kind} "
                 f"l_max={block.l_max} k={block.k!r}\n")
        fh.write("row,col,real,imag\n")
        n = block.entries.shape[0]
        for r in range(n):
            for c in range(n):
                v = block.entries[r, c]
                fh.write(f"{r},{c},{v.real:.17g},{v.imag:.17g}\n")


def _axis_of(k):
    k = complex(k)
    if k == 0:
        raise ValueError("wavenumber must be nonzero")
    if abs(k.imag) <= _AXIS_TOL * abs(k):
        if k.real <= 0:
            raise ValueError("real wavenumber must be positive")
        return "real", k.real
    if abs(k.real) <= _AXIS_TOL * abs(k):
        if k.imag <= 0:
            raise ValueError("imaginary wavenumber must have positive part")
        return "imag", k.imag
    raise ValueError("wavenumber must lie on the real or imaginary axis")


# ---------------------------------------------------------------------------
# scalar addition theorem
# ---------------------------------------------------------------------------

def _paired_gaunt(l1, m1, l2, m2, q):
    # G2 = integral Y_{l1 m1} conj(Y_{l2 m2}) conj(Y_{q, m1-m2})
    g = gaunt_coefficient(l1, m1, l2, -m2, q)
    return -g if (m2 % 2) else g


def _scalar_block_analytic(displacement, k, l_max, basis_kind):
    """Scalar block in the oscillatory (j / h+) basis at complex wavenumber."""
    d = np.asarray(displacement, dtype=float)
    dist = float(np.linalg.norm(d))
    n = scalar_dimension(l_max)
    if dist == 0.0:
        if basis_kind == OUTGOING_TO_REGULAR:
            raise ValueError("outgoing-to-regular requires |displacement| > 0")
        return np.eye(n, dtype=complex)
    theta_d, phi_d = unit_vector_angles(d)
    kind = (BesselKind.REGULAR_J if basis_kind == REGULAR_TO_REGULAR
            else BesselKind.OUTGOING_H_PLUS)
    radial = spherical_bessel_table(kind, 2 * l_max + 1, k * dist)
    out = np.zeros((n, n), dtype=complex)
    for l1 in range(l_max + 1):
        for m1 in range(-l1, l1 + 1):
            col = scalar_index(l1, m1)
            for l2 in range(l_max + 1):
                for m2 in range(-l2, l2 + 1):
                    mu = m1 - m2
                    acc = 0.0 + 0.0j
                    q_lo = max(abs(l1 - l2), abs(mu))
                    for q in range(q_lo, l1 + l2 + 1):
                        if (l1 + l2 + q) % 2:
                            continue
                        g = _paired_gaunt(l1, m1, l2, m2, q)
                        if g == 0.0:
                            continue
                        acc += (1j ** ((l2 + q - l1) % 4) * radial[q]
                                * sph_harm(q, mu, theta_d, phi_d) * g)
                    out[scalar_index(l2, m2), col] = 4.0 * math.pi * acc
    return out


def _scalar_phase_conversion(l_max, basis_kind):
    """Diagonal phases mapping the j/h+ block at i*kappa to the i_l/k_l basis."""
    ls = np.array([l for l, _ in scalar_indices(l_max)])
    row = 1j ** (ls % 4)
    if basis_kind == REGULAR_TO_REGULAR:
        col = 1j ** ((-ls) % 4)
        scale = 1.0
    else:
        col = 1j ** (ls % 4)
        scale = -math.pi / 2.0
    return row, col, scale


def scalar_translation(displacement, k, l_max, basis_kind=OUTGOING_TO_REGULAR):
    """Scalar-wave translation block.

    Parameters
    ----------
    displacement : (3,) array
        target origin minus source origin, meters
    k : complex
        wavenumber (1/m); positive real, or i*kappa for the
        imaginary-frequency basis
    l_max : int
        truncation order
    basis_kind : str
        "regular-to-regular" or "outgoing-to-regular"

    Returns
    -------
    AngularBlock
    """
    axis, mag = _axis_of(k)
    d = np.asarray(displacement, dtype=float)
    dist = float(np.linalg.norm(d))
    if mag * dist > l_max and dist > 0:
        warnings.warn(
            f"|k||d| = {mag * dist:.3g} exceeds l_max = {l_max}; "
            "accuracy degrades", TranslationTruncationWarning, stacklevel=2)
    entries = _scalar_block_analytic(d, complex(k), l_max, basis_kind)
    if axis == "imag" and dist > 0:
        row, col, scale = _scalar_phase_conversion(l_max, basis_kind)
        entries = scale * (row[:, None] * entries * col[None, :])
    return AngularBlock(entries=entries, l_max=l_max, displacement=d,
                        k=complex(k), basis_kind=basis_kind,
                        wave_kind="scalar")


# ---------------------------------------------------------------------------
# gradient formula (exact reduced matrix elements)
# ---------------------------------------------------------------------------

def _axial_gradient_coeff(l, m):
    # d_z psi_lm = k [ c(l,m) psi_{l-1,m} - c(l+1,m) psi_{l+1,m} ]
    if l == 0 and m == 0:
        return 0.0
    return math.sqrt((l * l - m * m) / ((2.0 * l - 1.0) * (2.0 * l + 1.0)))


@lru_cache(maxsize=None)
def _gradient_reduced(l):
    """Reduced matrix elements R-(l), R+(l) of the gradient operator.

    Fixed from the axial relation at m = 0; the full component set follows
    by the Wigner-Eckart structure shared with d_z.
    """
    r_minus = 0.0
    if l >= 1:
        cg = clebsch_gordan(l, 0, 1, 0, l - 1, 0)
        r_minus = _axial_gradient_coeff(l, 0) / cg
    cg = clebsch_gordan(l, 0, 1, 0, l + 1, 0)
    r_plus = -_axial_gradient_coeff(l + 1, 0) / cg
    return r_minus, r_plus


def _gradient_components(l, m, mu):
    """(1/k) (grad psi_lm)_mu = sum of coeff * psi_{l', m-mu}, l' = l -/+ 1.

    Returns a list of (l_prime, m_prime, coeff); the analytic (j/h) kinds
    use these as-is, the modified kinds flip one sign (see
    _kind_gradient_signs).
    """
    out = []
    if abs(m - mu) <= l - 1 and l >= 1:
        r_minus, _ = _gradient_reduced(l)
        cg = clebsch_gordan(l, m, 1, -mu, l - 1, m - mu)
        coeff = (-1.0 if mu % 2 else 1.0) * cg * r_minus
        if coeff != 0.0:
            out.append((l - 1, m - mu, coeff))
    if abs(m - mu) <= l + 1:
        _, r_plus = _gradient_reduced(l)
        cg = clebsch_gordan(l, m, 1, -mu, l + 1, m - mu)
        coeff = (-1.0 if mu % 2 else 1.0) * cg * r_plus
        if coeff != 0.0:
            out.append((l + 1, m - mu, coeff))
    return out


def _kind_gradient_signs(kind):
    # sign multipliers (lower band l-1, upper band l+1) relative to the
    # analytic gradient formula
    kind = BesselKind(kind)
    if kind is BesselKind.MODIFIED_I:
        return 1.0, -1.0
    if kind is BesselKind.MODIFIED_K:
        return -1.0, 1.0
    return 1.0, 1.0


# ---------------------------------------------------------------------------
# vector waves as scalar-component stacks
# ---------------------------------------------------------------------------

_MU_ORDER = (1, 0, -1)     # spherical components e*_mu . V, blocks in this order


def _ladder_lambda(l, m, up):
    return math.sqrt(max(0.0, (l - m) * (l + m + 1))) if up else \
        math.sqrt(max(0.0, (l + m) * (l - m + 1)))


def _te_component_list(l, m):
    """Spherical components of M_lm = L psi_lm (unnormalized)."""
    out = []
    lam_minus = _ladder_lambda(l, m, up=False)
    if lam_minus:
        out.append((1, l, m - 1, -lam_minus / math.sqrt(2.0)))
    if m:
        out.append((0, l, m, float(m)))
    lam_plus = _ladder_lambda(l, m, up=True)
    if lam_plus:
        out.append((-1, l, m + 1, lam_plus / math.sqrt(2.0)))
    return out


def _tm_component_list(l, m, kind=BesselKind.REGULAR_J):
    """Spherical components of N_lm = (1/k) curl M_lm (unnormalized).

    (curl V)_mu = i sqrt(2) sum_{a+b=mu} <1a;1b|1mu> d_a V_b, from
    e_a x e_b = i sqrt(2) <1a;1b|1,a+b> e_{a+b}.
    """
    sign_lo, sign_hi = _kind_gradient_signs(kind)
    acc = {}
    for (beta, lb, mb, cb) in _te_component_list(l, m):
        for mu in _MU_ORDER:
            alpha = mu - beta
            if abs(alpha) > 1:
                continue
            cg = clebsch_gordan(1, alpha, 1, beta, 1, mu)
            if cg == 0.0:
                continue
            for (lp, mp, cgrad) in _gradient_components(lb, mb, alpha):
                sign = sign_lo if lp == lb - 1 else sign_hi
                key = (mu, lp, mp)
                acc[key] = acc.get(key, 0.0 + 0.0j) \
                    + 1j * math.sqrt(2.0) * cg * cgrad * cb * sign
    return [(mu, lp, mp, v) for (mu, lp, mp), v in acc.items() if v != 0.0]


@lru_cache(maxsize=None)
def _vector_maps(l_max):
    """(T1, T2) lifting scalar translation blocks to the TE/TM basis.

    T1 maps normalized vector-wave amplitudes to stacked spherical
    components over scalar waves with l <= l_max + 1; T2 projects back by
    band-orthogonal rows, so T2 @ T1 is the identity and the projection is
    immune to the truncated l_max + 2 tail.
    """
    window = l_max + 1
    n_sc = scalar_dimension(window)
    n_v = vector_dimension(l_max)
    t1 = np.zeros((3 * n_sc, n_v), dtype=complex)
    mu_block = {1: 0, 0: 1, -1: 2}

    cols = vector_indices(l_max)
    for ci, (pol, l, m) in enumerate(cols):
        norm = math.sqrt(l * (l + 1))
        comp = (_te_component_list(l, m) if pol == "TE"
                else _tm_component_list(l, m))
        for (mu, lp, mp, c) in comp:
            t1[mu_block[mu] * n_sc + scalar_index(lp, mp), ci] = c / norm

    t2 = np.zeros((n_v, 3 * n_sc), dtype=complex)
    for ri, (pol, l, m) in enumerate(cols):
        col = t1[:, ri]
        if pol == "TE":
            mask = np.ones_like(col, dtype=bool)
        else:
            # keep only the lower band l-1: tail-safe exact projection
            mask = np.zeros_like(col, dtype=bool)
            for mu in _MU_ORDER:
                lo = mu_block[mu] * n_sc
                for mm in range(-(l - 1), l):
                    mask[lo + scalar_index(l - 1, mm)] = True
        masked = np.where(mask, col, 0.0)
        t2[ri, :] = np.conj(masked) / np.vdot(masked, masked).real
    return t1, t2


def _vector_phase_conversion(l_max, basis_kind):
    ls = np.array([l for _, l, _ in vector_indices(l_max)])
    tm = np.array([1 if p == "TM" else 0 for p, _, _ in vector_indices(l_max)])
    row = 1j ** ((ls - tm) % 4)
    if basis_kind == REGULAR_TO_REGULAR:
        col = 1j ** ((-(ls - tm)) % 4)
        scale = 1.0
    else:
        col = 1j ** ((ls + tm) % 4)
        scale = -math.pi / 2.0
    return row, col, scale


def _vector_block_analytic(displacement, k, l_max, basis_kind):
    window = l_max + 1
    s = _scalar_block_analytic(displacement, k, window, basis_kind)
    t1, t2 = _vector_maps(l_max)
    n_sc = scalar_dimension(window)
    n_v = vector_dimension(l_max)
    out = np.zeros((n_v, n_v), dtype=complex)
    for b in range(3):
        rows = slice(b * n_sc, (b + 1) * n_sc)
        out += t2[:, rows] @ (s @ t1[rows, :])
    return out


def vector_translation(displacement, k, l_max, basis_kind=OUTGOING_TO_REGULAR):
    """TE/TM vector-wave translation block; see scalar_translation."""
    axis, mag = _axis_of(k)
    d = np.asarray(displacement, dtype=float)
    dist = float(np.linalg.norm(d))
    if dist == 0.0:
        if basis_kind == OUTGOING_TO_REGULAR:
            raise ValueError("outgoing-to-regular requires |displacement| > 0")
        entries = np.eye(vector_dimension(l_max), dtype=complex)
        return AngularBlock(entries=entries, l_max=l_max, displacement=d,
                            k=complex(k), basis_kind=basis_kind,
                            wave_kind="vector")
    if mag * dist > l_max:
        warnings.warn(
            f"|k||d| = {mag * dist:.3g} exceeds l_max = {l_max}; "
            "accuracy degrades", TranslationTruncationWarning, stacklevel=2)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TranslationTruncationWarning)
        entries = _vector_block_analytic(d, complex(k), l_max, basis_kind)
    if axis == "imag":
        row, col, scale = _vector_phase_conversion(l_max, basis_kind)
        entries = scale * (row[:, None] * entries * col[None, :])
    return AngularBlock(entries=entries, l_max=l_max, displacement=d,
                        k=complex(k), basis_kind=basis_kind,
                        wave_kind="vector")


# ---------------------------------------------------------------------------
# analytic displacement gradients
# ---------------------------------------------------------------------------

def _scalar_gradient_analytic(displacement, k, l_max, basis_kind):
    """d/d(displacement) of the analytic-basis scalar block, 3 Cartesian parts.

    Each entry is sum_q c_q z_q(k|d|) Y_{q,mu}(dhat); the gradient of each
    solid-wave factor follows from the gradient formula evaluated at d.
    """
    d = np.asarray(displacement, dtype=float)
    dist = float(np.linalg.norm(d))
    if dist == 0.0:
        raise ValueError("gradient requires |displacement| > 0")
    theta_d, phi_d = unit_vector_angles(d)
    kind = (BesselKind.REGULAR_J if basis_kind == REGULAR_TO_REGULAR
            else BesselKind.OUTGOING_H_PLUS)
    radial = spherical_bessel_table(kind, 2 * l_max + 3, k * dist)
    n = scalar_dimension(l_max)
    grads = np.zeros((3, n, n), dtype=complex)
    for l1 in range(l_max + 1):
        for m1 in range(-l1, l1 + 1):
            col = scalar_index(l1, m1)
            for l2 in range(l_max + 1):
                for m2 in range(-l2, l2 + 1):
                    mu = m1 - m2
                    row = scalar_index(l2, m2)
                    sph_comp = {1: 0.0j, 0: 0.0j, -1: 0.0j}
                    q_lo = max(abs(l1 - l2), abs(mu))
                    for q in range(q_lo, l1 + l2 + 1):
                        if (l1 + l2 + q) % 2:
                            continue
                        g = _paired_gaunt(l1, m1, l2, m2, q)
                        if g == 0.0:
                            continue
                        c_q = 4.0 * math.pi * 1j ** ((l2 + q - l1) % 4) * g
                        for nu in _MU_ORDER:
                            for (qp, mp, cgrad) in _gradient_components(q, mu, nu):
                                if abs(mp) > qp:
                                    continue
                                sph_comp[nu] += (c_q * k * cgrad * radial[qp]
                                                 * sph_harm(qp, mp, theta_d,
                                                            phi_d))
                    vp, v0, vm = sph_comp[1], sph_comp[0], sph_comp[-1]
                    grads[0, row, col] = (vm - vp) / math.sqrt(2.0)
                    grads[1, row, col] = -1j * (vp + vm) / math.sqrt(2.0)
                    grads[2, row, col] = v0
    return grads


def scalar_translation_gradient(displacement, k, l_max,
                                basis_kind=OUTGOING_TO_REGULAR):
    """Cartesian gradient blocks (d/dx, d/dy, d/dz) of scalar_translation."""
    axis, _ = _axis_of(k)
    grads = _scalar_gradient_analytic(np.asarray(displacement, float),
                                      complex(k), l_max, basis_kind)
    if axis == "imag":
        row, col, scale = _scalar_phase_conversion(l_max, basis_kind)
        grads = scale * (row[None, :, None] * grads * col[None, None, :])
    return grads


def vector_translation_gradient(displacement, k, l_max,
                                basis_kind=OUTGOING_TO_REGULAR):
    """Cartesian gradient blocks of vector_translation."""
    axis, _ = _axis_of(k)
    window = l_max + 1
    sgrads = _scalar_gradient_analytic(np.asarray(displacement, float),
                                       complex(k), window, basis_kind)
    t1, t2 = _vector_maps(l_max)
    n_sc = scalar_dimension(window)
    n_v = vector_dimension(l_max)
    grads = np.zeros((3, n_v, n_v), dtype=complex)
    for c in range(3):
        for b in range(3):
            rows = slice(b * n_sc, (b + 1) * n_sc)
            grads[c] += t2[:, rows] @ (sgrads[c] @ t1[rows, :])
    if axis == "imag":
        row, col, scale = _vector_phase_conversion(l_max, basis_kind)
        grads = scale * (row[None, :, None] * grads * col[None, None, :])
    return grads


# ---------------------------------------------------------------------------
# surface-projection oracle
# ---------------------------------------------------------------------------

def _radial_kinds(k, basis_kind):
    axis, mag = _axis_of(k)
    if axis == "real":
        src = (BesselKind.REGULAR_J if basis_kind == REGULAR_TO_REGULAR
               else BesselKind.OUTGOING_H_PLUS)
        return src, BesselKind.REGULAR_J, mag
    src = (BesselKind.MODIFIED_I if basis_kind == REGULAR_TO_REGULAR
           else BesselKind.MODIFIED_K)
    return src, BesselKind.MODIFIED_I, mag


def _scalar_wave(kind, l, m, kappa, pts):
    r = np.linalg.norm(pts, axis=-1)
    theta = np.arccos(np.clip(pts[..., 2] / r, -1.0, 1.0))
    phi = np.arctan2(pts[..., 1], pts[..., 0])
    vals = np.empty(r.shape, dtype=complex)
    flat_r = r.ravel()
    flat = np.empty(flat_r.shape, dtype=complex)
    for i, rv in enumerate(flat_r):
        flat[i] = spherical_bessel_table(kind, l, kappa * rv)[l]
    vals = flat.reshape(r.shape)
    return vals * sph_harm(l, m, theta, phi)


def _vector_wave_components(pol, l, m, kind, kappa, pts):
    """Spherical components (mu = +1, 0, -1) of a normalized vector wave."""
    norm = math.sqrt(l * (l + 1))
    comp = (_te_component_list(l, m) if pol == "TE"
            else _tm_component_list(l, m, kind=kind))
    out = [np.zeros(pts.shape[:-1], dtype=complex) for _ in range(3)]
    mu_pos = {1: 0, 0: 1, -1: 2}
    for (mu, lp, mp, c) in comp:
        out[mu_pos[mu]] += (c / norm) * _scalar_wave(kind, lp, mp, kappa, pts)
    return out


def _oracle_grid(n_theta, n_phi):
    rule = gauss_legendre(n_theta)
    theta = np.arccos(rule.nodes)
    phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
    th, ph = np.meshgrid(theta, phi, indexing="ij")
    wt = np.broadcast_to(rule.weights[:, None], th.shape) \
        * (2.0 * math.pi / n_phi)
    pts = np.stack([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph),
                    np.cos(th)], axis=-1)
    return th, ph, wt, pts


def _oracle_entry_once(displacement, k, l1, m1, l2, m2, polarization,
                       basis_kind, n_theta, n_phi, probe_radius):
    d = np.asarray(displacement, dtype=float)
    src_kind, tgt_kind, kappa = _radial_kinds(k, basis_kind)
    th, ph, wt, unit_pts = _oracle_grid(n_theta, n_phi)
    pts = probe_radius * unit_pts
    src_pts = pts + d[None, None, :]

    p_tgt, p_src = polarization
    tgt_radial = spherical_bessel_table(tgt_kind, l2, kappa * probe_radius)[l2]

    if p_src == "scalar":
        field = _scalar_wave(src_kind, l1, m1, kappa, src_pts)
        proj = np.conj(sph_harm(l2, m2, th, ph)) * field
        return np.sum(wt * proj) / tgt_radial

    comps = _vector_wave_components(p_src, l1, m1, src_kind, kappa, src_pts)
    if p_tgt == "TE":
        tgt = _vector_wave_components("TE", l2, m2, tgt_kind, kappa, pts)
        integ = sum(np.conj(t) * f for t, f in zip(tgt, comps))
        return np.sum(wt * integ) / tgt_radial ** 2
    # TM target: project the radial component; r.(curl M) = i L^2 psi gives
    # rhat . N = i sqrt(l(l+1)) z_l(kr)/(kr) Y
    rhat_dot = np.zeros(th.shape, dtype=complex)
    for mu, f in zip(_MU_ORDER, comps):
        rhat_dot += math.sqrt(4.0 * math.pi / 3.0) \
            * sph_harm(1, mu, th, ph) * f
    proj = np.conj(sph_harm(l2, m2, th, ph)) * rhat_dot
    weight = 1j * math.sqrt(l2 * (l2 + 1)) * tgt_radial \
        / (kappa * probe_radius)
    return np.sum(wt * proj) / weight


def translation_oracle(displacement, k, l1, m1, l2, m2,
                       polarization=("scalar", "scalar"),
                       basis_kind=OUTGOING_TO_REGULAR,
                       n_theta=None, tol=1e-6, probe_radius=None):
    """Direct surface-quadrature evaluation of one translation-matrix entry.

    Expands the displaced source wave on a probe sphere about the target
    origin (Gauss-Legendre in cos(theta) x uniform azimuth) and projects
    onto the unit-normalized target basis function.  Ground truth for the
    addition-theorem fast path.

    Raises OracleQuadratureError when the internal error estimate (grid
    refinement difference) exceeds `tol`.
    """
    d = np.asarray(displacement, dtype=float)
    dist = float(np.linalg.norm(d))
    if basis_kind == OUTGOING_TO_REGULAR and dist == 0.0:
        raise ValueError("outgoing-to-regular requires |displacement| > 0")
    if probe_radius is None:
        _, mag = _axis_of(k)
        probe_radius = 0.45 * dist if dist > 0 else 0.5 / mag
    if n_theta is None:
        n_theta = max(2 * (l1 + l2) + 4, 20)
    n_phi = max(4 * (l1 + l2) + 8, 16)
    coarse = _oracle_entry_once(d, k, l1, m1, l2, m2, polarization,
                                basis_kind, n_theta, n_phi, probe_radius)
    err = math.inf
    for _ in range(4):        # refine until the estimate meets tol
        n_theta += 10
        n_phi += 10
        fine = _oracle_entry_once(d, k, l1, m1, l2, m2, polarization,
                                  basis_kind, n_theta, n_phi, probe_radius)
        err = abs(fine - coarse)
        coarse = fine
        if err <= tol * max(1.0, abs(fine)):
            return fine
    raise OracleQuadratureError(
        f"oracle quadrature error {err:.2e} exceeds tolerance {tol:.2e}",
        value=coarse, error=err)
