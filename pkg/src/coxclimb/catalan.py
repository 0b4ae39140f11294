"""Climbing and falling elements, the dual system, and the weak-order classes."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bipartite import BipartiteOrder, build_order
from .errors import DualMismatch, IntervalViolation, NonInteger, PapiFailure
from .fan import (Facet, FacetLocator, N_of, enumerate_facets, make_facet,
                  rho_sorted)
from .geometry import CoxeterSystem, GroupElement, inversion_set, weak_order_leq
from .papi import is_climbing, papi_check, word_from_ordered_roots


def climbing_of_facet(facet, order, locator=None) -> GroupElement:
    """The climbing element whose inversion set is ``N(V_F)``.

    The postconditions (inversion set, climbing, and, when ``locator`` is
    given, chamber inside ``facet``) are checked and raise on failure.
    """
    system = order.system
    roots = N_of(facet.indices, order)
    ordered = rho_sorted(roots, order)
    verdict = papi_check(ordered, system)
    if not verdict:
        raise PapiFailure(f"N{facet.indices} fails clause {verdict.clause}: {verdict.triple}")
    x = system.element(word_from_ordered_roots(ordered, system))
    if inversion_set(x) != roots or not is_climbing(x, order):
        raise PapiFailure(f"climbing element of {facet.indices} has the wrong inversions")
    if locator is not None and locator.locate(x) != facet:
        raise PapiFailure(f"climbing element of {facet.indices} lies outside the facet")
    return x


def all_climbing(order, facets, locator=None) -> list[GroupElement]:
    """Climbing elements of every facet, in facet order."""
    return [climbing_of_facet(f, order, locator) for f in facets]


@dataclass(frozen=True, eq=False)
class DualSystem:
    """The system rebuilt around the opposite chamber with ``c^{-1}``.

    Attributes
    ----------
    system : CoxeterSystem
        Simple roots ``alpha'_j``, dual to ``beta'_i = mu_{nh/2+n-i+1}``.
    order : BipartiteOrder
        Sequences ``rho'``, ``mu'`` built from ``alpha'_1, ..., alpha'_n``.
    label_map : tuple of int
        ``label_map[j-1] = k`` when ``alpha'_j = -alpha_k``; translates dual
        words into words of the original system.
    """

    primal: BipartiteOrder
    system: CoxeterSystem
    order: BipartiteOrder
    label_map: tuple

    @property
    def beta_prime(self):
        return self.system.dual_basis

    @property
    def alpha_prime(self):
        return self.system.simple_roots

    @property
    def c_inv(self):
        return self.order.c

    def flip(self, indices):
        """Dual ray indices of primal ray indices, ``i -> nh/2 + n - i + 1``."""
        L = self.primal.length
        return tuple(sorted(L - i + 1 for i in indices))

    def translate(self, w):
        """A dual-system element as an element of the primal system."""
        return self.primal.system.element(tuple(self.label_map[k - 1] for k in w.word))


def _coxeter_matrix_of(roots):
    gram = np.clip(roots @ roots.T, -1.0, 1.0)
    with np.errstate(divide="ignore"):
        m = np.pi / np.arccos(-gram)
    np.fill_diagonal(m, 1)
    return np.rint(m).astype(int)


def build_dual(order, tol=1e-8) -> DualSystem:
    """Build and verify the dual system.

    Raises :class:`DualMismatch` when a permutation or sequence identity
    between the primal and dual data fails beyond ``tol``.
    """
    sys = order.system
    n, s, L, P = order.n, order.s, order.length, order.n_positive
    beta_p = order.mu[[L - i for i in range(1, n + 1)]]
    alpha_p = np.linalg.inv(beta_p).T
    dual_sys = CoxeterSystem(_coxeter_matrix_of(alpha_p), name=f"{sys.name}'",
                             tol=sys.tol, simple_roots=alpha_p)
    dual_order = build_order(dual_sys, labels=tuple(range(1, n + 1)), s=n - s)

    try:
        label_map = tuple(int(sys.find_root(-a)) + 1 for a in alpha_p)
    except KeyError as exc:
        raise DualMismatch("some alpha' is not a negated root") from exc
    if sorted(label_map) != list(range(1, n + 1)):
        raise DualMismatch(f"alpha' is not a permutation of the negated simple roots: {label_map}")

    beta = sys.dual_basis
    left = [order.labels[k] - 1 for k in range(s)]
    right = [order.labels[k] - 1 for k in range(s, n)]
    for block_p, block in ((beta_p[: n - s], right), (beta_p[n - s:], left)):
        if not _same_vectors(block_p, -beta[block], tol):
            raise DualMismatch("beta' blocks are not permutations of the negated beta blocks")

    c_inv_word = tuple(label_map)
    if sys.element(c_inv_word) != order.c.inverse():
        raise DualMismatch("R(alpha'_1)...R(alpha'_n) is not c^{-1}")

    dual = DualSystem(order, dual_sys, dual_order, label_map)
    mu_p, rho_p = dual_order.mu, dual_order.rho_vectors
    if not np.allclose(mu_p, order.mu[::-1], atol=tol):
        raise DualMismatch("mu'_j differs from mu_{nh/2+n-j+1}")
    if not np.allclose(rho_p[:P], -order.rho_vectors[:P][::-1], atol=tol):
        raise DualMismatch("rho'_i differs from -rho_{nh/2-i+1}")
    return dual


def _same_vectors(a, b, tol):
    if len(a) != len(b):
        return False
    remaining = list(b)
    for v in a:
        hit = next((k for k, u in enumerate(remaining) if np.allclose(u, v, atol=tol)), None)
        if hit is None:
            return False
        remaining.pop(hit)
    return True


def falling_of_facet(facet, order, dual, locator=None) -> GroupElement:
    """The falling element attached to a primal facet.

    Runs the climbing construction in the dual system on the flipped index
    tuple and translates the result back.
    """
    dual_facet = make_facet(dual.order, dual.flip(facet.indices))
    x = climbing_of_facet(dual_facet, dual.order, locator)
    return dual.translate(x)


@dataclass
class EquivClass:
    facet: Facet
    members: list
    min_element: GroupElement
    max_element: GroupElement
    falling: GroupElement


def classes(order, facets, group, dual, assignment=None) -> list[EquivClass]:
    """The fibres of the chamber assignment with their weak-order extremes.

    Each fibre is checked to be exactly the weak-order interval between the
    facet's climbing element and ``f w0``; :class:`IntervalViolation`
    carries the offending element otherwise.
    """
    if assignment is None:
        assignment = FacetLocator(order, facets).assign(group)
    w0 = group.longest
    fibres = [[] for _ in facets]
    for w in group:
        fibres[assignment[w.perm_key]].append(w)
    out = []
    for k, facet in enumerate(facets):
        members = fibres[k]
        lo = group.lookup(climbing_of_facet(facet, order))
        f = group.lookup(falling_of_facet(facet, order, dual))
        hi = group.lookup(f * w0)
        keys = {w.perm_key for w in members}
        for end in (lo, hi):
            if end.perm_key not in keys:
                raise IntervalViolation(f"{end} is not in the class of {facet.indices}", end)
        lo_mask, hi_mask = lo.inversion_mask, hi.inversion_mask
        for w in group:
            between = lo_mask & ~w.inversion_mask == 0 and w.inversion_mask & ~hi_mask == 0
            if between != (w.perm_key in keys):
                raise IntervalViolation(
                    f"{w} breaks the interval property of {facet.indices}", w)
        out.append(EquivClass(facet, members, lo, hi, f))
    return out


def class_maximum(members):
    """The unique member above all others in weak order, or ``None``."""
    for w in members:
        if all(weak_order_leq(u, w) for u in members):
            return w
    return None


def sorting_word(w, order):
    """The c-sorting word of ``w`` split into passes over the bipartite word of ``c``."""
    system = order.system
    N = system.n_positive
    passes = []
    u = w
    while not u.is_identity():
        taken = []
        for label in order.labels:
            # label is a left descent of u iff u^{-1}(alpha_label) is negative.
            if u.inverse_perm[label - 1] >= N:
                taken.append(label)
                u = system.generator(label) * u
        passes.append(tuple(taken))
    return passes


def sortable_oracle(w, order) -> bool:
    """True when the passes of the c-sorting word have nested supports."""
    supports = [set(p) for p in sorting_word(w, order)]
    return all(later <= earlier for earlier, later in zip(supports, supports[1:]))


def exponents(order):
    """Exponents ``m_i`` read off from the eigenvalue angles ``2 pi m_i / h`` of ``c``."""
    h = order.h
    angles = np.angle(np.linalg.eigvals(order.c.transform)) % (2 * np.pi)
    raw = angles * h / (2 * np.pi)
    m = np.rint(raw)
    if np.abs(raw - m).max() > 1e-6:
        raise NonInteger(f"eigenvalue angles of c are not multiples of 2pi/{h}")
    return sorted(int(x) for x in m)


def catalan_number(order) -> int:
    """``prod (h + d_i) / d_i`` over the degrees ``d_i = m_i + 1``."""
    h = order.h
    value = Fraction(1)
    for m in exponents(order):
        d = m + 1
        value *= Fraction(h + d, d)
    if value.denominator != 1:
        raise NonInteger(f"Catalan product {value} is not an integer")
    return int(value)
