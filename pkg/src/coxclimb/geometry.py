"""Finite Coxeter systems, their roots, and group elements.

Group elements are stored as permutations of the full root list (positive
roots first, then their negatives in the same order).  Restricting such a
permutation to the positive roots gives a signed permutation, which is the
exact identity key of the element; all set logic downstream runs on these
keys rather than on floating point matrices.

Generator labels in words are 1-based, matching the usual ``s_1, ..., s_n``
notation.  Root indices are 0-based positions in :attr:`CoxeterSystem.roots`.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import BadSpec, BudgetExceeded, NonFiniteGroup, NotReduced

DEFAULT_TOL = 1e-9
DEFAULT_BUDGET = 200_000

# Root lookup after several reflections tolerates more drift than the
# comparison tolerance; distinct unit roots are far apart at these ranks.
_LOOKUP_TOL = 1e-6

_TYPE_RE = re.compile(r"^([A-H])([0-9]+)$")
_DIHEDRAL_RE = re.compile(r"^I2\(([0-9]+)\)$")


def _cartan_type_matrix(family, n):
    m = np.full((n, n), 2, dtype=int)
    np.fill_diagonal(m, 1)

    def edge(i, j, label=3):
        m[i - 1, j - 1] = m[j - 1, i - 1] = label

    if family == "A" and n >= 1:
        for i in range(1, n):
            edge(i, i + 1)
    elif family in "BC" and n >= 2:
        for i in range(1, n - 1):
            edge(i, i + 1)
        edge(n - 1, n, 4)
    elif family == "D" and n >= 4:
        for i in range(1, n - 1):
            edge(i, i + 1)
        edge(n - 2, n)
    elif family == "E" and 6 <= n <= 8:
        edge(1, 3)
        edge(2, 4)
        for i in range(3, n):
            edge(i, i + 1)
    elif family == "F" and n == 4:
        edge(1, 2)
        edge(2, 3, 4)
        edge(3, 4)
    elif family == "G" and n == 2:
        edge(1, 2, 6)
    elif family == "H" and n in (3, 4):
        edge(1, 2, 5)
        for i in range(2, n):
            edge(i, i + 1)
    else:
        raise BadSpec(f"no finite Coxeter type {family}{n}")
    return m


def parse_type(symbol):
    """Return the Coxeter matrix for a type symbol such as ``"B3"`` or ``"I2(7)"``."""
    if not isinstance(symbol, str):
        raise BadSpec(f"type symbol must be a string, got {symbol!r}")
    text = symbol.strip()
    match = _DIHEDRAL_RE.match(text)
    if match:
        m = int(match.group(1))
        if m < 2:
            raise BadSpec(f"I2(m) needs m >= 2, got {m}")
        return np.array([[1, m], [m, 1]])
    match = _TYPE_RE.match(text)
    if not match:
        raise BadSpec(f"cannot parse group type {symbol!r}")
    return _cartan_type_matrix(match.group(1), int(match.group(2)))


def read_coxeter_matrix(path):
    """Read ``n`` followed by an ``n x n`` whitespace separated Coxeter matrix."""
    tokens = Path(path).read_text().split()
    try:
        n = int(tokens[0])
        values = [float(t) for t in tokens[1:]]
    except (IndexError, ValueError) as exc:
        raise BadSpec(f"malformed Coxeter matrix file {path}") from exc
    if n < 1 or len(values) != n * n:
        raise BadSpec(f"expected {n * n} matrix entries in {path}, found {len(values)}")
    return np.array(values).reshape(n, n)


def _validate_coxeter_matrix(matrix):
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise BadSpec("Coxeter matrix must be square and non-empty")
    if not np.array_equal(m, m.T):
        raise BadSpec("Coxeter matrix must be symmetric")
    if np.any(np.diag(m) != 1):
        raise BadSpec("Coxeter matrix must have 1 on the diagonal")
    off = m[~np.eye(len(m), dtype=bool)]
    if np.any(np.isinf(off)) or np.any(off <= 0):
        raise NonFiniteGroup("infinite Coxeter matrix entries give an infinite group")
    if np.any(off != np.round(off)) or np.any(off < 2):
        raise BadSpec("off-diagonal Coxeter matrix entries must be integers >= 2")
    return m.astype(np.int64)


class CoxeterSystem:
    """A finite Coxeter system realised by unit simple roots in R^n.

    Parameters
    ----------
    coxeter_matrix : array_like of int
        Symmetric matrix with ones on the diagonal and entries ``m_ij >= 2``.
    name : str, optional
        Type label used in reports.
    tol : float
        Tolerance for scalar and vector comparisons.
    simple_roots : array_like, optional
        Explicit unit simple roots (rows).  Their Gram matrix must match the
        Coxeter matrix.  By default they are the rows of the Cholesky factor
        of the Gram matrix.

    Attributes
    ----------
    simple_roots, dual_basis : ndarray, shape (n, n)
        Rows ``alpha_i`` and ``beta_j`` with ``alpha_i . beta_j = delta_ij``.
    roots : ndarray, shape (2N, n)
        All roots: the ``N`` positive roots in breadth-first order from the
        simple roots (so root ``i < n`` is ``alpha_{i+1}``), followed by
        their negatives.
    generator_perms : ndarray, shape (n, 2N)
        Action of each simple reflection on the root list.
    """

    def __init__(self, coxeter_matrix, name=None, tol=DEFAULT_TOL, simple_roots=None):
        if not 0 < tol < 1e-3:
            raise BadSpec(f"tolerance must lie in (0, 1e-3), got {tol}")
        self.coxeter_matrix = _validate_coxeter_matrix(coxeter_matrix)
        self.coxeter_matrix.setflags(write=False)
        self.rank = n = len(self.coxeter_matrix)
        self.name = name or "custom"
        self.tol = tol
        self.gram = -np.cos(np.pi / self.coxeter_matrix)
        if np.linalg.eigvalsh(self.gram).min() <= tol:
            raise NonFiniteGroup(f"Gram matrix of {self.name} is not positive definite")
        if simple_roots is None:
            simple_roots = np.linalg.cholesky(self.gram)
        else:
            simple_roots = np.array(simple_roots, dtype=float)
            if simple_roots.shape != (n, n) or not np.allclose(
                simple_roots @ simple_roots.T, self.gram, atol=1e-8
            ):
                raise BadSpec("simple roots do not realise the Coxeter matrix")
        self.simple_roots = simple_roots
        self.dual_basis = np.linalg.inv(simple_roots).T
        self.base_point = self.dual_basis.sum(axis=0)
        self.group_order = None
        self._build_roots()
        for arr in (self.simple_roots, self.dual_basis, self.base_point, self.roots,
                    self.coefficients, self.generator_perms):
            arr.setflags(write=False)

    @classmethod
    def from_type(cls, symbol, tol=DEFAULT_TOL):
        return cls(parse_type(symbol), name=symbol.strip(), tol=tol)

    def __repr__(self):
        return f"CoxeterSystem({self.name!r}, rank={self.rank})"

    # -- roots -------------------------------------------------------------

    def _reflect(self, vectors, alpha):
        return vectors - 2.0 * np.outer(vectors @ alpha, alpha)

    def _build_roots(self):
        n = self.rank
        positives = [row.copy() for row in self.simple_roots]
        queue = deque(range(n))
        while queue:
            v = positives[queue.popleft()]
            for alpha in self.simple_roots:
                image = v - 2.0 * (v @ alpha) * alpha
                if image @ self.base_point < 0:
                    continue
                known = np.array(positives)
                if np.abs(known - image).max(axis=1).min() < _LOOKUP_TOL:
                    continue
                positives.append(image)
                queue.append(len(positives) - 1)
                if len(positives) > 100_000:
                    raise NonFiniteGroup("root orbit does not close")
        pos = np.array(positives)
        self.n_positive = len(pos)
        self.roots = np.vstack([pos, -pos])
        self.coefficients = self.roots @ self.dual_basis.T
        perms = np.empty((n, len(self.roots)), dtype=np.int16)
        for i, alpha in enumerate(self.simple_roots):
            perms[i] = self.find_roots(self._reflect(self.roots, alpha))
        self.generator_perms = perms

    def find_roots(self, vectors):
        """Indices of the roots equal to each row of ``vectors``."""
        vectors = np.atleast_2d(vectors)
        idx = np.argmax(vectors @ self.roots.T, axis=1)
        err = np.abs(self.roots[idx] - vectors).max(axis=1)
        if np.any(err > _LOOKUP_TOL):
            raise KeyError("vector is not a root")
        return idx

    def find_root(self, vector):
        return int(self.find_roots(vector)[0])

    def is_positive(self, index):
        return index < self.n_positive

    def negate(self, index):
        """Index of the opposite root."""
        N = self.n_positive
        return index + N if index < N else index - N

    def root_sign(self, vector):
        """+1 or -1 from the first simple-root coordinate exceeding the tolerance."""
        coeffs = self.dual_basis @ np.asarray(vector, dtype=float)
        for value in coeffs:
            if value > self.tol:
                return 1
            if value < -self.tol:
                return -1
        return 0

    # -- elements ----------------------------------------------------------

    def identity(self):
        return GroupElement(self, np.arange(len(self.roots), dtype=np.int16), ())

    def generator(self, label):
        """The simple reflection ``s_label`` (1-based)."""
        return GroupElement(self, self.generator_perms[label - 1], (label,))

    def element(self, word: Sequence[int]):
        """Evaluate a word of 1-based generator labels, leftmost letter outermost."""
        perm = np.arange(len(self.roots), dtype=np.int16)
        for label in word:
            if not 1 <= label <= self.rank:
                raise BadSpec(f"generator label {label} out of range 1..{self.rank}")
            perm = perm[self.generator_perms[label - 1]]
        return GroupElement(self, perm, tuple(word))

    def element_from_matrix(self, matrix):
        """Wrap an orthogonal matrix preserving the root system."""
        try:
            perm = self.find_roots(self.roots @ np.asarray(matrix, dtype=float).T)
        except KeyError as exc:
            raise BadSpec("matrix does not permute the roots") from exc
        return GroupElement(self, perm.astype(np.int16))


class GroupElement:
    """An element of a finite Coxeter group.

    Equality and hashing use :attr:`perm_key`, the signed permutation of the
    positive roots, so they are exact.  ``word``, when known, is a word of
    1-based generator labels evaluating to the element.
    """

    __slots__ = ("system", "perm", "word", "perm_key", "_inverse_perm", "_inv_mask")

    def __init__(self, system, perm, word=None):
        perm = np.asarray(perm, dtype=np.int16)
        perm.setflags(write=False)
        self.system = system
        self.perm = perm
        self.word = None if word is None else tuple(word)
        self.perm_key = perm[: system.n_positive].tobytes()
        self._inverse_perm = None
        self._inv_mask = None

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.perm_key == other.perm_key

    def __hash__(self):
        return hash(self.perm_key)

    def __repr__(self):
        word = "?" if self.word is None else ("e" if not self.word else
                                               "".join(f"s{i}" for i in self.word))
        return f"<GroupElement {word} of {self.system.name}>"

    def __mul__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        word = None
        if self.word is not None and other.word is not None:
            word = self.word + other.word
        return GroupElement(self.system, self.perm[other.perm], word)

    @property
    def inverse_perm(self):
        if self._inverse_perm is None:
            inv = np.empty_like(self.perm)
            inv[self.perm] = np.arange(len(self.perm), dtype=np.int16)
            inv.setflags(write=False)
            self._inverse_perm = inv
        return self._inverse_perm

    def inverse(self):
        word = None if self.word is None else self.word[::-1]
        return GroupElement(self.system, self.inverse_perm, word)

    @property
    def transform(self):
        """The n x n orthogonal matrix, sum over i of w(alpha_i) beta_i^T."""
        sys = self.system
        images = sys.roots[self.perm[: sys.rank]]
        return images.T @ sys.dual_basis

    def apply(self, vectors):
        return np.asarray(vectors, dtype=float) @ self.transform.T

    def act_on_root(self, index):
        return int(self.perm[index])

    def is_identity(self):
        return bool(np.all(self.perm == np.arange(len(self.perm))))

    @property
    def inversion_mask(self):
        """Bitmask over positive-root indices of the inversion set."""
        if self._inv_mask is None:
            N = self.system.n_positive
            flags = self.inverse_perm[:N] >= N
            self._inv_mask = sum(1 << int(i) for i in np.flatnonzero(flags))
        return self._inv_mask

    @property
    def length(self):
        return int(self.inversion_mask).bit_count()


@dataclass(frozen=True)
class Root:
    """A root of a system, identified by its index in ``system.roots``."""

    index: int
    vector: np.ndarray
    positive: bool
    rho_index: int | None = None


def build_system(spec, tol=DEFAULT_TOL) -> CoxeterSystem:
    """Build a :class:`CoxeterSystem` from a type symbol or a Coxeter matrix.

    >>> round(float(build_system("A2").gram[0, 1]), 6)
    -0.5
    """
    if isinstance(spec, CoxeterSystem):
        return spec
    if isinstance(spec, str):
        return CoxeterSystem.from_type(spec, tol=tol)
    return CoxeterSystem(spec, tol=tol)


def reflection(system, root) -> GroupElement:
    """The reflection ``I - 2 r r^T`` in the hyperplane orthogonal to ``root``.

    ``root`` is a root index or a unit vector that is a root of ``system``.
    """
    if isinstance(root, (int, np.integer)):
        vector = system.roots[root]
    else:
        vector = np.asarray(getattr(root, "vector", root), dtype=float)
        if abs(vector @ vector - 1.0) > 1e-6:
            raise ValueError("reflection needs a unit root")
    images = system.roots - 2.0 * np.outer(system.roots @ vector, vector)
    return GroupElement(system, system.find_roots(images).astype(np.int16))


class Group:
    """Breadth-first enumeration of a finite Coxeter group.

    Elements are listed in BFS order from the identity under right
    multiplication by the generators, so each stored word is a shortest
    (reduced) word.
    """

    def __init__(self, system, elements):
        self.system = system
        self.elements = elements
        self.index = {w.perm_key: i for i, w in enumerate(elements)}

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, w):
        return w.perm_key in self.index

    def lookup(self, w):
        """The stored element (carrying its reduced word) equal to ``w``."""
        return self.elements[self.index[w.perm_key]]

    @property
    def longest(self):
        return self.elements[-1]


def enumerate_group(system, budget=DEFAULT_BUDGET) -> Group:
    start = system.identity()
    elements = [start]
    seen = {start.perm_key}
    queue = deque([start])
    gens = system.generator_perms
    while queue:
        w = queue.popleft()
        for label in range(1, system.rank + 1):
            perm = w.perm[gens[label - 1]]
            key = perm[: system.n_positive].tobytes()
            if key in seen:
                continue
            seen.add(key)
            u = GroupElement(system, perm, w.word + (label,))
            elements.append(u)
            queue.append(u)
            if len(elements) > budget:
                raise BudgetExceeded(
                    f"{system.name} has more than {budget} elements")
    system.group_order = len(elements)
    return Group(system, elements)


def positive_roots(system, order=None) -> list[Root]:
    """Positive roots in system order, tagged with ``rho_index`` when ``order`` is given."""
    out = []
    for i in range(system.n_positive):
        rho = None if order is None else int(order.rho_index[i])
        out.append(Root(i, system.roots[i], True, rho))
    return out


def inversion_set(w: GroupElement) -> frozenset[int]:
    """Positive roots ``lambda`` (as indices) with ``w^{-1}(lambda)`` negative."""
    mask = w.inversion_mask
    return frozenset(i for i in range(w.system.n_positive) if mask >> i & 1)


def inversion_set_by_base_point(w: GroupElement) -> frozenset[int]:
    """Same set via the sign test ``lambda . w(v0) < 0``."""
    sys = w.system
    x = w.apply(sys.base_point)
    dots = sys.roots[: sys.n_positive] @ x
    return frozenset(int(i) for i in np.flatnonzero(dots < 0))


def inversions_from_word(system, word: Iterable[int]) -> tuple[int, ...]:
    """Ordered inversion roots of a reduced word.

    The k-th entry is ``s_{i_1} ... s_{i_{k-1}}(alpha_{i_k})``.  Raises
    :class:`NotReduced` if a root repeats or comes out negative.
    """
    perm = np.arange(len(system.roots), dtype=np.int16)
    seen = []
    for label in word:
        if not 1 <= label <= system.rank:
            raise BadSpec(f"generator label {label} out of range 1..{system.rank}")
        root = int(perm[label - 1])
        if root >= system.n_positive or root in seen:
            raise NotReduced(f"word {tuple(word)} is not reduced")
        seen.append(root)
        perm = perm[system.generator_perms[label - 1]]
    return tuple(seen)


def weak_order_leq(u: GroupElement, w: GroupElement) -> bool:
    """Weak order comparison by inversion-set containment."""
    return u.inversion_mask & ~w.inversion_mask == 0


def reduced_words(group, w, _memo=None):
    """All reduced words of ``w``, built from its right descents."""
    memo = {} if _memo is None else _memo
    return _reduced_words(group.system, w, memo)


def _reduced_words(system, w, memo):
    key = w.perm_key
    if key in memo:
        return memo[key]
    if w.is_identity():
        memo[key] = [()]
        return memo[key]
    out = []
    N = system.n_positive
    for label in range(1, system.rank + 1):
        # s is a right descent of w iff w(alpha_s) is negative.
        if w.perm[label - 1] >= N:
            shorter = GroupElement(system, w.perm[system.generator_perms[label - 1]])
            out.extend(word + (label,) for word in _reduced_words(system, shorter, memo))
    memo[key] = out
    return out
