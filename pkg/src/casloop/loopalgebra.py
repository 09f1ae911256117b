r"""Closed scattering loops: word enumeration, path-ordered block products
and the loop trace Z.

A loop word (i1, i2, ..., in, i1) with adjacent entries distinct is one
monomial of the multiple-scattering series: reading left to right, a
per-sphere Mie diagonal alternates with an outgoing-to-regular translation
block for each hop, and the trace over the anchor sphere's (pol, L, m)
space gives the word's contribution.  The exponential generating these
monomials is only defined by its power series (blocks of different
truncation never share a common exponent), so the series is evaluated
term by term and never resummed.

Sphere labels are 1-based throughout, matching the scene description.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.constants import c as C_LIGHT

from .scattering import mie_coefficients
from .translation import (
    OUTGOING_TO_REGULAR,
    AngularBlock,
    TranslationTruncationWarning,
    vector_dimension,
    vector_indices,
    vector_translation,
)


@dataclass(frozen=True)
class LoopWord:
    """Closed sequence of sphere labels; order = number of scattering events."""

    indices: tuple

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "indices", idx)
        if len(idx) < 3 or idx[0] != idx[-1]:
            raise ValueError("loop word must close on its anchor")
        if any(a == b for a, b in zip(idx, idx[1:])):
            raise ValueError("adjacent loop-word entries must differ")

    @property
    def order(self):
        return len(self.indices) - 1

    @property
    def anchor(self):
        return self.indices[0]

    def hops(self):
        return list(zip(self.indices[:-1], self.indices[1:]))

    def label(self):
        return "-".join(str(i) for i in self.indices)


@dataclass(frozen=True)
class ZValue:
    """Loop trace at one frequency with its truncation bookkeeping."""

    value: float
    frequency: float
    truncation: tuple
    anchor: int
    per_order: dict = field(default_factory=dict)
    imag_residual: float = 0.0


def enumerate_loop_words(n_spheres, order_max, anchor=1):
    """All closed anchored words of order 2..order_max, lexicographic.

    Interior indices range over every sphere (anchor revisits included:
    the two-sphere double bounce (1,2,1,2,1) is a valid order-4 word).
    """
    if n_spheres < 2:
        raise ValueError("need at least two spheres")
    if order_max < 2:
        raise ValueError("order_max must be >= 2")
    if not 1 <= anchor <= n_spheres:
        raise ValueError(f"anchor {anchor} outside 1..{n_spheres}")
    labels = range(1, n_spheres + 1)
    words = []

    def extend(prefix):
        if 2 <= len(prefix) <= order_max and prefix[-1] != anchor:
            words.append(LoopWord(prefix + (anchor,)))
        if len(prefix) >= order_max:
            return
        for nxt in labels:
            if nxt != prefix[-1]:
                extend(prefix + (nxt,))

    extend((anchor,))
    words.sort(key=lambda w: w.indices)
    return words


def mie_diagonal(system, sphere, omega, l_max, c=C_LIGHT):
    """Diagonal of the per-sphere scattering block over (pol, L, m).

    TE rows carry beta_L, TM rows alpha_L; `sphere` is 1-based.
    """
    mie = mie_coefficients(system.radii[sphere - 1],
                           system.materials[sphere - 1],
                           system.background, omega, l_max, c=c)
    diag = np.empty(vector_dimension(l_max))
    for i, (pol, l, _m) in enumerate(vector_indices(l_max)):
        diag[i] = mie.beta(l) if pol == "TE" else mie.alpha(l)
    return diag


class _LoopEvaluator:
    """Caches Mie diagonals and hop blocks for one (system, omega, l_max)."""

    def __init__(self, system, omega, l_max, c=C_LIGHT):
        self.system = system
        self.omega = omega
        self.l_max = l_max
        self.c = c
        self.k = 1j * system.background_wavenumber(omega, c=c)
        self._diag = {}
        self._hop = {}

    def diagonal(self, sphere):
        if sphere not in self._diag:
            self._diag[sphere] = mie_diagonal(self.system, sphere, self.omega,
                                              self.l_max, c=self.c)
        return self._diag[sphere]

    def hop(self, target, source):
        key = (target, source)
        if key not in self._hop:
            d = self.system.separation(target - 1, source - 1)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", TranslationTruncationWarning)
                self._hop[key] = vector_translation(
                    d, self.k, self.l_max, OUTGOING_TO_REGULAR).entries
        return self._hop[key]


def path_ordered_product(word, system, omega, l_max, c=C_LIGHT):
    """Ordered product of Mie diagonals and translation blocks along a word.

    For word (w1,...,wn,w1) this is
        D[w1] A[w1<-w2] D[w2] A[w2<-w3] ... D[wn] A[wn<-w1]
    where A[a<-b] re-expands outgoing waves at sphere b about sphere a and
    D[w] is the sphere's Mie diagonal; matrix order follows scattering
    order and is not commutative.
    """
    ev = _LoopEvaluator(system, omega, l_max, c=c)
    entries = _word_matrix(ev, word)
    return AngularBlock(entries=entries, l_max=l_max,
                        displacement=np.zeros(3), k=ev.k,
                        basis_kind="loop-product", wave_kind="vector")


def _word_matrix(ev, word, drop_last_hop=False):
    out = np.diag(ev.diagonal(word.anchor)).astype(complex)
    hops = word.hops()
    for i, (a, b) in enumerate(hops):
        if drop_last_hop and i == len(hops) - 1:
            break
        out = out @ ev.hop(a, b)
        if i < len(hops) - 1:
            out = out @ np.diag(ev.diagonal(b))
    return out


def z_function(system, omega, l_max, order_max, anchor=1, c=C_LIGHT):
    """Sum of loop-word traces at one frequency.

    Real for real-response models; the imaginary residual is recorded for
    diagnostics.  Per-order sums carry no sign weighting here: the bare
    trace polynomial is returned and the force assembly applies the
    -(-1)^order prefactors.
    """
    ev = _LoopEvaluator(system, omega, l_max, c=c)
    per_order = {}
    imag_max = 0.0
    for word in enumerate_loop_words(system.size, order_max, anchor):
        tr = np.trace(_word_matrix(ev, word))
        imag_max = max(imag_max, abs(tr.imag))
        per_order[word.order] = per_order.get(word.order, 0.0) + tr.real
    total = sum(per_order.values())
    return ZValue(value=total, frequency=omega,
                  truncation=(l_max, order_max), anchor=anchor,
                  per_order=per_order, imag_residual=imag_max)


def word_contributions(system, omega, l_max, order_max, anchor=1, c=C_LIGHT):
    """(word, order, trace) triples in deterministic word order."""
    ev = _LoopEvaluator(system, omega, l_max, c=c)
    rows = []
    for word in enumerate_loop_words(system.size, order_max, anchor):
        tr = np.trace(_word_matrix(ev, word))
        rows.append((word.label(), word.order, tr.real))
    return rows
