"""Bipartite Coxeter elements and the root and ray sequences they generate."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import BadSpec, OddCycle, SequenceMismatch, Singular
from .geometry import CoxeterSystem, GroupElement, inversions_from_word


def bipartite_coloring(system: CoxeterSystem):
    """Two-colour the Coxeter diagram by BFS.

    The lowest unvisited vertex of each component is coloured left.

    Returns
    -------
    left, right : tuple of int
        1-based generator labels in ascending order.
    labels : tuple of int
        The relabelling: left block then right block.
    """
    m = system.coxeter_matrix
    n = system.rank
    colour = [None] * n
    for start in range(n):
        if colour[start] is not None:
            continue
        colour[start] = 0
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for j in range(n):
                if j == i or m[i, j] < 3:
                    continue
                if colour[j] is None:
                    colour[j] = 1 - colour[i]
                    queue.append(j)
                elif colour[j] == colour[i]:
                    raise OddCycle(f"Coxeter diagram of {system.name} has an odd cycle")
    left = tuple(i + 1 for i in range(n) if colour[i] == 0)
    right = tuple(i + 1 for i in range(n) if colour[i] == 1)
    return left, right, left + right


def _is_connected(system):
    m = system.coxeter_matrix
    seen = {0}
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(system.rank):
            if j not in seen and m[i, j] >= 3:
                seen.add(j)
                stack.append(j)
    return len(seen) == system.rank


def coxeter_element(system, labels):
    """``c = s_{labels[0]} ... s_{labels[-1]}`` and its order ``h``."""
    c = system.element(labels)
    identity = system.identity()
    power = c
    h = 1
    while power != identity:
        power = power * c
        h += 1
    return c, h


@dataclass(frozen=True, eq=False)
class BipartiteOrder:
    """The bipartite Coxeter element with its root and ray sequences.

    Sequence positions are 1-based in the public accessors (``rho_vector(i)``
    etc.) to match the usual ``rho_1, rho_2, ...`` indexing; the underlying
    arrays are 0-based.

    Attributes
    ----------
    labels : tuple of int
        Generator labels in bipartite order, left block first.
    s : int
        Size of the left block.
    c : GroupElement
    h : int
        Order of ``c`` (the Coxeter number).
    rho : ndarray of int, shape (nh/2 + n,)
        Root indices of ``rho_1, ..., rho_{nh/2+n}``.
    mu : ndarray, shape (nh/2 + n, n)
        The rays ``mu_1, ..., mu_{nh/2+n}``.
    mu_map : ndarray, shape (n, n)
        ``2 (I - c)^{-1}``.
    rho_index : ndarray of int, shape (N,)
        1-based position in the rho sequence of each positive root.
    """

    system: CoxeterSystem
    labels: tuple
    s: int
    c: GroupElement
    h: int
    rho: np.ndarray
    mu: np.ndarray
    mu_map: np.ndarray
    rho_index: np.ndarray
    word: tuple = field(default=())

    @property
    def n(self):
        return self.system.rank

    @property
    def n_positive(self):
        return self.n * self.h // 2

    @property
    def length(self):
        """Number of rays, ``nh/2 + n``."""
        return len(self.rho)

    @property
    def left_block(self):
        return self.labels[: self.s]

    @property
    def right_block(self):
        return self.labels[self.s:]

    @property
    def rho_vectors(self):
        return self.system.roots[self.rho]

    def rho_vector(self, i):
        return self.system.roots[self.rho[i - 1]]

    def mu_vector(self, i):
        return self.mu[i - 1]

    def rho_root(self, i):
        """Root index of ``rho_i``."""
        return int(self.rho[i - 1])


def rho_mu_sequences(system, labels, c, h):
    """Root indices of ``rho_i`` and vectors ``mu_i`` for ``i = 1 .. nh/2 + n``."""
    n = system.rank
    count = n * h // 2 + n
    rho = np.empty(count, dtype=np.int64)
    mu = np.empty((count, n))
    prefix = system.identity()
    for i in range(count):
        label = labels[i % n]
        rho[i] = prefix.act_on_root(label - 1)
        mu[i] = prefix.apply(system.dual_basis[label - 1])
        prefix = prefix * system.generator(label)
    N = system.n_positive
    head = rho[: n * h // 2]
    if len(set(head.tolist())) != N or np.any(head >= N) or np.any(rho[n * h // 2:] < N):
        raise SequenceMismatch(
            f"rho_1..rho_nh/2 of {system.name} do not list the positive roots")
    return rho, mu


def mu_map(system, c):
    """The linear map ``2 (I - c)^{-1}``."""
    a = np.eye(system.rank) - c.transform
    if abs(np.linalg.det(a)) < system.tol:
        raise Singular("I - c is singular; c is not a Coxeter element")
    return 2.0 * np.linalg.inv(a)


def longest_word(labels, s, h):
    """Bipartite reduced word for the longest element."""
    if h % 2 == 0:
        return tuple(labels) * (h // 2)
    return tuple(labels) * ((h - 1) // 2) + tuple(labels[:s])


def build_order(system, labels=None, s=None) -> BipartiteOrder:
    """Assemble the :class:`BipartiteOrder` of an irreducible system.

    ``labels``/``s`` override the BFS colouring; the first ``s`` labels must
    be pairwise commuting, as must the rest.
    """
    if not _is_connected(system):
        raise BadSpec(f"{system.name} is reducible; bipartite orders need an irreducible type")
    if labels is None:
        left, _, labels = bipartite_coloring(system)
        s = len(left)
    labels = tuple(labels)
    m = system.coxeter_matrix
    for block in (labels[:s], labels[s:]):
        for a in block:
            for b in block:
                if a != b and m[a - 1, b - 1] != 2:
                    raise BadSpec(f"labels {block} are not pairwise commuting")
    c, h = coxeter_element(system, labels)
    rho, mu = rho_mu_sequences(system, labels, c, h)
    rho_index = np.zeros(system.n_positive, dtype=np.int64)
    rho_index[rho[: system.rank * h // 2]] = np.arange(1, system.rank * h // 2 + 1)
    arrays = (rho, mu, rho_index)
    for arr in arrays:
        arr.setflags(write=False)
    mmap = mu_map(system, c)
    mmap.setflags(write=False)
    return BipartiteOrder(system, labels, s, c, h, rho, mu, mmap, rho_index,
                          longest_word(labels, s, h))


def longest_element(order):
    """The longest element together with its bipartite reduced word."""
    word = order.word
    return order.system.element(word), word


@dataclass
class SignTableReport:
    """Outcome of the sign-table check; ``violations`` holds ``(clause, i, j, value)``."""

    checked: dict
    violations: list
    max_deviation: float

    @property
    def ok(self):
        return not self.violations


def verify_sign_table(order, tol=None) -> SignTableReport:
    """Exhaustively check the four sign relations between ``mu_i`` and ``rho_j``.

    (a) ``mu_i . rho_j = -mu_{j+n} . rho_i``;
    (b) ``mu_i . rho_j >= 0`` for ``i <= j <= nh/2``;
    (c) ``mu_{i+t} . rho_i = 0`` for ``1 <= t <= n-1``;
    (d) ``mu_j . rho_i <= 0`` for ``i < j <= nh/2``.
    """
    tol = order.system.tol if tol is None else tol
    n, L, P = order.n, order.length, order.n_positive
    # dots[i, j] = mu_{i+1} . rho_{j+1}
    dots = order.mu @ order.rho_vectors.T
    checked = dict.fromkeys("abcd", 0)
    violations = []
    worst = 0.0

    def record(clause, i, j, value, deviation):
        nonlocal worst
        checked[clause] += 1
        worst = max(worst, deviation)
        if deviation > tol:
            violations.append((clause, i, j, float(value)))

    for i in range(1, L + 1):
        for j in range(1, L - n + 1):
            lhs = dots[i - 1, j - 1]
            rhs = -dots[j + n - 1, i - 1]
            record("a", i, j, lhs - rhs, abs(lhs - rhs))
    for i in range(1, P + 1):
        for j in range(i, P + 1):
            v = dots[i - 1, j - 1]
            record("b", i, j, v, max(0.0, -v))
        for j in range(i + 1, P + 1):
            v = dots[j - 1, i - 1]
            record("d", i, j, v, max(0.0, v))
    for i in range(1, L + 1):
        for t in range(1, n):
            if i + t <= L:
                v = dots[i + t - 1, i - 1]
                record("c", i + t, i, v, abs(v))
    return SignTableReport(checked, violations, worst)


def check_order_invariants(order):
    """Return a list of failure messages for the structural invariants."""
    sys = order.system
    tol = 1e-8
    n, L = order.n, order.length
    failures = []
    a = sys.simple_roots
    for block in (order.left_block, order.right_block):
        idx = [label - 1 for label in block]
        gram = a[idx] @ a[idx].T
        if not np.allclose(gram, np.eye(len(idx)), atol=tol):
            failures.append("block simple roots are not orthonormal")
    ct = order.c.transform
    rv = order.rho_vectors
    for i in range(L - n):
        if not np.allclose(ct @ rv[i], rv[i + n], atol=tol):
            failures.append(f"rho_{i + n + 1} != c(rho_{i + 1})")
        if not np.allclose(ct @ order.mu[i], order.mu[i + n], atol=tol):
            failures.append(f"mu_{i + n + 1} != c(mu_{i + 1})")
    for i in range(L):
        if not np.allclose(order.mu_map @ rv[i], order.mu[i], atol=tol):
            failures.append(f"mu_{i + 1} != mu_map(rho_{i + 1})")
        if not np.allclose(0.5 * (np.eye(n) - ct) @ order.mu[i], rv[i], atol=tol):
            failures.append(f"rho_{i + 1} != (I - c) mu_{i + 1} / 2")
        if abs(rv[i] @ order.mu[i] - 1.0) > tol:
            failures.append(f"rho_{i + 1} . mu_{i + 1} != 1")
    if inversions_from_word(sys, order.word) != tuple(order.rho[: order.n_positive]):
        failures.append("rho sequence differs from inversions of the longest word")
    return failures
