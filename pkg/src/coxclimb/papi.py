"""Ordered inversion sets: Papi-style validation and word extraction.

An ordered root set is a tuple of distinct positive-root indices.  It comes
from a reduced word exactly when every triple ``rho = a sigma + b tau``
(``a, b > 0``) of positive roots satisfies

(i)  if ``sigma`` and ``tau`` are both present, so is ``rho``, strictly
     between them;
(ii) if ``rho`` is present, ``sigma`` or ``tau`` is present before it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IsSimple, NotSimple
from .geometry import CoxeterSystem, GroupElement, inversion_set


@dataclass(frozen=True)
class PositiveTriple:
    """Positive roots with ``rho = a * sigma + b * tau`` and ``a, b > 0``."""

    sigma: int
    tau: int
    rho: int
    a: float
    b: float


def _solve_triples(system):
    tol = system.tol
    N = system.n_positive
    pos = system.roots[:N]
    found = []
    for p in range(N):
        for q in range(p + 1, N):
            basis = np.stack([pos[p], pos[q]], axis=1)
            coeffs, *_ = np.linalg.lstsq(basis, pos.T, rcond=None)
            residual = np.abs(basis @ coeffs - pos.T).max(axis=0)
            for r in range(N):
                if r in (p, q):
                    continue
                a, b = coeffs[:, r]
                if residual[r] < tol and a > tol and b > tol:
                    found.append(PositiveTriple(p, q, r, float(a), float(b)))
    return found


def positive_triples(system: CoxeterSystem) -> list[PositiveTriple]:
    """All triples of positive roots with one a positive combination of the others.

    Each unordered pair ``{sigma, tau}`` appears once, with ``sigma < tau``
    by root index.
    """
    return list(_triple_arrays(system)[0])


def _triple_arrays(system):
    # Cached on the system: the triple set depends only on the roots.
    cached = system.__dict__.get("_papi_triples")
    if cached is None:
        triples = tuple(_solve_triples(system))
        arrays = tuple(np.array([getattr(t, f) for t in triples], dtype=np.int64)
                       for f in ("sigma", "tau", "rho"))
        cached = system._papi_triples = (triples, arrays)
    return cached


@dataclass(frozen=True)
class Verdict:
    """Result of :func:`papi_check`; truthy when the order is valid."""

    valid: bool
    clause: str | None = None
    triple: PositiveTriple | None = None

    def __bool__(self):
        return self.valid


VALID = Verdict(True)


def papi_check(sigma, system) -> Verdict:
    """Decide whether an ordered set of positive roots is a reduced-word order.

    Returns a falsy :class:`Verdict` naming the failing triple and clause
    (``"i"``, ``"ii"``, or ``"entries"`` for repeated or negative roots).
    """
    N = system.n_positive
    sigma = tuple(int(x) for x in sigma)
    if len(set(sigma)) != len(sigma) or any(not 0 <= x < N for x in sigma):
        return Verdict(False, "entries")
    triples, (S, T, R) = _triple_arrays(system)
    if not triples:
        return VALID
    pos = np.full(N, -1, dtype=np.int64)
    pos[list(sigma)] = np.arange(len(sigma))
    ps, pt, pr = pos[S], pos[T], pos[R]
    both = (ps >= 0) & (pt >= 0)
    lo, hi = np.minimum(ps, pt), np.maximum(ps, pt)
    bad_i = both & ~((pr > lo) & (pr < hi))
    if bad_i.any():
        return Verdict(False, "i", triples[int(np.argmax(bad_i))])
    present = pr >= 0
    ok_ii = ((ps >= 0) & (ps < pr)) | ((pt >= 0) & (pt < pr))
    bad_ii = present & ~ok_ii
    if bad_ii.any():
        return Verdict(False, "ii", triples[int(np.argmax(bad_ii))])
    return VALID


def word_from_ordered_roots(sigma, system) -> tuple[int, ...]:
    """Extract the reduced word whose inversion order is ``sigma``.

    With ``u`` the product of the letters chosen so far, the next letter is
    the simple root ``u^{-1}(rho_k)``; :class:`NotSimple` is raised when that
    root is not simple.
    """
    n = system.rank
    u = system.identity()
    word = []
    for root in sigma:
        pulled = int(u.inverse_perm[int(root)])
        if pulled >= n:
            raise NotSimple(f"root {root} does not pull back to a simple root")
        label = pulled + 1
        word.append(label)
        u = GroupElement(system, u.perm[system.generator_perms[label - 1]])
    return tuple(word)


def sorted_inversions(w, order, descending=False):
    """Inversion set of ``w`` sorted by position in the rho sequence."""
    key = order.rho_index
    return tuple(sorted(inversion_set(w), key=lambda r: key[r], reverse=descending))


def is_climbing(w, order) -> bool:
    """True when sorting ``Inv(w)`` along the rho order gives a reduced-word order."""
    return bool(papi_check(sorted_inversions(w, order), order.system))


def is_falling(w, order) -> bool:
    """True when sorting ``Inv(w)`` against the rho order gives a reduced-word order."""
    return bool(papi_check(sorted_inversions(w, order, descending=True), order.system))


def nonsimple_decomposition(rho, system) -> PositiveTriple:
    """Write a non-simple positive root as ``s_i(rho) + b * alpha_i``.

    Returns the triple ``(sigma=s_i(rho), tau=alpha_i, rho)`` with
    ``a = 1`` and ``b = 2 (rho . alpha_i)`` for the first simple root with
    positive inner product.
    """
    rho = int(rho)
    if rho < system.rank:
        raise IsSimple(f"root {rho} is simple")
    if rho >= system.n_positive:
        raise ValueError(f"root {rho} is negative")
    vec = system.roots[rho]
    for i, alpha in enumerate(system.simple_roots):
        dot = float(vec @ alpha)
        if dot > system.tol:
            sigma = int(system.generator_perms[i][rho])
            return PositiveTriple(sigma, i, rho, 1.0, 2.0 * dot)
    raise AssertionError("positive root orthogonal-or-obtuse to every simple root")
