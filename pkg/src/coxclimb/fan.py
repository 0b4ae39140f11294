"""The associahedron fan: facets, chamber assignment, and the Z filtration.

Facets are index tuples ``i_1 < ... < i_n`` into the ray sequence
``mu_1, ..., mu_{nh/2+n}`` such that ``c = R(rho_{i_n}) ... R(rho_{i_1})``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import IndexRange, MultipleFacets, NoFacet, NotFound
from .geometry import GroupElement, reflection


@dataclass(frozen=True, eq=False)
class Facet:
    """A maximal cone of the fan; ``indices`` are 1-based ray positions."""

    indices: tuple
    vertices: np.ndarray

    @property
    def last_index(self):
        return self.indices[-1]

    def __eq__(self, other):
        return isinstance(other, Facet) and self.indices == other.indices

    def __hash__(self):
        return hash(self.indices)

    def __repr__(self):
        return f"Facet{self.indices}"


def make_facet(order, indices):
    indices = tuple(sorted(int(i) for i in indices))
    return Facet(indices, order.mu[[i - 1 for i in indices]])


def reflection_length(w: GroupElement) -> int:
    """Codimension of the fixed space of ``w``."""
    a = np.eye(w.system.rank) - w.transform
    return int(np.linalg.matrix_rank(a, tol=1e-7))


def _reflections(order):
    return [reflection(order.system, int(r)) for r in order.rho]


def enumerate_facets(order) -> list[Facet]:
    """All facets, found depth first over increasing indices.

    A partial product ``P`` of ``k`` reflections is pruned unless
    ``c P^{-1}`` has reflection length exactly ``n - k``.
    """
    n, L = order.n, order.length
    refl = _reflections(order)
    c = order.c
    lengths: dict[bytes, int] = {}

    def rlen(w):
        key = w.perm_key
        if key not in lengths:
            lengths[key] = reflection_length(w)
        return lengths[key]

    found = []

    def extend(start, chosen, partial):
        k = len(chosen)
        if k == n:
            if partial == c:
                found.append(make_facet(order, chosen))
            return
        for j in range(start, L - (n - k) + 1):
            nxt = refl[j] * partial
            if rlen(c * nxt.inverse()) != n - k - 1:
                continue
            extend(j + 1, chosen + [j + 1], nxt)

    extend(0, [], order.system.identity())
    return found


def enumerate_facets_brute(order) -> list[Facet]:
    """Reference scan over every n-subset of ray indices."""
    refl = _reflections(order)
    out = []
    for combo in combinations(range(order.length), order.n):
        product = order.system.identity()
        for j in combo:
            product = refl[j] * product
        if product == order.c:
            out.append(make_facet(order, [j + 1 for j in combo]))
    return out


def N_of(rays, order) -> frozenset[int]:
    """Positive roots (root indices) with ``rho_i . mu <= 0`` for every ray in ``rays``.

    ``rays`` are 1-based ray indices.  Inner products within the tolerance
    of zero count as ``<= 0``.
    """
    tol = order.system.tol
    rays = [int(q) for q in rays]
    P = order.n_positive
    if not rays:
        return frozenset(int(r) for r in order.rho[:P])
    dots = order.rho_vectors[:P] @ order.mu[[q - 1 for q in rays]].T
    keep = np.all(dots <= tol, axis=1)
    return frozenset(int(r) for r in order.rho[:P][keep])


def rho_sorted(roots, order, descending=False):
    """Root indices sorted along the rho order."""
    return tuple(sorted(roots, key=lambda r: order.rho_index[r], reverse=descending))


def to_rho_indices(roots, order):
    return sorted(int(order.rho_index[r]) for r in roots)


class FacetLocator:
    """Assigns chambers to facets by expanding ``w(v0)`` in each facet's rays."""

    def __init__(self, order, facets):
        self.order = order
        self.facets = list(facets)
        # coords = x @ inverse[f] gives the ray coefficients of x in facet f.
        self.inverse = np.linalg.inv(np.stack([f.vertices for f in self.facets]))
        self.position = {f.indices: k for k, f in enumerate(self.facets)}

    def coordinates(self, points):
        points = np.atleast_2d(points)
        return np.einsum("pj,fjk->pfk", points, self.inverse)

    def locate_points(self, points):
        """Facet position of each point; points must lie in facet interiors."""
        tol = self.order.system.tol
        coords = self.coordinates(points)
        inside = np.all(coords >= -tol, axis=2)
        strict = np.all(coords > tol, axis=2)
        out = []
        for p in range(len(coords)):
            hits = np.flatnonzero(strict[p])
            if len(hits) == 0:
                raise NoFacet(f"point {p} lies in no facet interior "
                              f"({int(inside[p].sum())} closed facets)")
            if len(hits) > 1:
                raise MultipleFacets(
                    f"point {p} lies in facets {[self.facets[h].indices for h in hits]}")
            out.append(int(hits[0]))
        return out

    def locate(self, w: GroupElement) -> Facet:
        x = w.apply(w.system.base_point)
        return self.facets[self.locate_points(x)[0]]

    def assign(self, elements):
        """Map each element's ``perm_key`` to the position of its facet."""
        elements = list(elements)
        points = np.stack([w.apply(w.system.base_point) for w in elements])
        slots = self.locate_points(points)
        return {w.perm_key: k for w, k in zip(elements, slots)}


def facet_of_chamber(w, facets, order) -> Facet:
    return FacetLocator(order, facets).locate(w)


@dataclass(frozen=True)
class Filtration:
    """``Z_i``: the intersection of the halfspaces ``rho_j . x >= 0`` over ``rho_indices``."""

    i: int
    rho_indices: tuple
    normals: np.ndarray
    tol: float

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        return bool(np.all(self.normals @ x >= -self.tol))


def filtration_Z(i, order) -> Filtration:
    """Halfspace description of ``Z_i`` for ``n <= i <= nh/2 + n``."""
    n, P = order.n, order.n_positive
    if not n <= i <= P + n:
        raise IndexRange(f"filtration index {i} outside {n}..{P + n}")
    idx = tuple(range(i - n + 1, P + 1))
    normals = order.rho_vectors[[j - 1 for j in idx]].reshape(len(idx), n)
    return Filtration(i, idx, normals, order.system.tol)


def neighbor_across(facet, order, facets) -> Facet:
    """The other facet sharing the face of ``facet`` opposite its last ray.

    The neighbour is checked to lie in ``Z_{i-1}`` where ``i`` is the last
    index of ``facet``.
    """
    i = facet.last_index
    if i <= order.n:
        raise IndexRange("the fundamental facet has no neighbour across its last ray")
    face = set(facet.indices[:-1])
    hits = [g for g in facets if g != facet and face <= set(g.indices)]
    if len(hits) != 1:
        raise NotFound(f"expected one neighbour of {facet.indices}, found {len(hits)}")
    g = hits[0]
    z = filtration_Z(i - 1, order)
    if not all(z.contains(v) for v in g.vertices):
        raise NotFound(f"neighbour {g.indices} of {facet.indices} is not inside Z_{i - 1}")
    return g
