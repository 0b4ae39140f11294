"""Machine checks of every structural property, grouped into named checks.

Each check returns ``(status, detail)`` with status ``"pass"``, ``"fail"``
or ``"skipped"``.  :func:`run_checks` drives them for one group type.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass

import numpy as np
from scipy.optimize import nnls

from .bipartite import check_order_invariants, verify_sign_table
from .catalan import class_maximum, sortable_oracle
from .errors import CoxeterError
from .fan import enumerate_facets, enumerate_facets_brute, filtration_Z, neighbor_across
from .geometry import (inversion_set, inversion_set_by_base_point, inversions_from_word,
                       reduced_words, reflection)
from .papi import is_climbing, is_falling, papi_check, word_from_ordered_roots

log = logging.getLogger(__name__)

SWEEP_LIMIT = 240          # all reduced words of every element
EXHAUSTIVE_LIMIT = 1152    # exhaustive scans over the group
BRUTE_FACET_RANK = 3       # full C(L, n) facet scan
TABLE_TOL = 1e-8


@dataclass
class CheckResult:
    check: str
    status: str
    detail: str = ""


def _fail(msg):
    return "fail", msg


def _ok(msg=""):
    return "pass", msg


def check_geometry(a):
    sys, order = a.system, a.order
    tol = TABLE_TOL
    al, be = sys.simple_roots, sys.dual_basis
    if not np.allclose(al @ al.T, sys.gram, atol=tol):
        return _fail("simple root Gram matrix mismatch")
    if not np.allclose(al @ be.T, np.eye(sys.rank), atol=tol):
        return _fail("dual basis is not dual")
    if not np.allclose(al @ sys.base_point, 1.0, atol=tol):
        return _fail("v0 . alpha_i != 1")
    if not np.allclose(np.linalg.norm(sys.roots, axis=1), 1.0, atol=tol):
        return _fail("roots are not unit vectors")
    if sys.n_positive != order.n * order.h // 2:
        return _fail(f"{sys.n_positive} positive roots, expected nh/2 = {order.n_positive}")
    return _ok(f"{sys.n_positive} positive roots")


def check_inversions(a):
    sys = a.system
    for w in a.group:
        inv = inversion_set(w)
        if set(inversions_from_word(sys, w.word)) != inv:
            return _fail(f"word inversions of {w} disagree with its inversion set")
        if inversion_set_by_base_point(w) != inv:
            return _fail(f"base point test disagrees for {w}")
        if len(inv) != len(w.word):
            return _fail(f"|Inv({w})| != length")
    return _ok(f"{len(a.group)} elements")


def check_perm_keys(a):
    if len(a.group) > EXHAUSTIVE_LIMIT:
        return "skipped", f"|W| = {len(a.group)} > {EXHAUSTIVE_LIMIT}"
    mats = np.stack([w.transform for w in a.group]).reshape(len(a.group), -1)
    for w, m in zip(a.group, mats):
        product = np.eye(a.system.rank)
        for label in w.word:
            alpha = a.system.simple_roots[label - 1]
            product = product @ (np.eye(a.system.rank) - 2 * np.outer(alpha, alpha))
        if not np.allclose(product.ravel(), m, atol=TABLE_TOL):
            return _fail(f"word of {w} does not evaluate to its transform")
    dist = np.abs(mats[:, None, :] - mats[None, :, :]).max(axis=2)
    np.fill_diagonal(dist, np.inf)
    if dist.min() < 1e-6:
        return _fail("two distinct perm keys share a transform")
    return _ok()


def check_order(a):
    failures = check_order_invariants(a.order)
    return _fail("; ".join(failures[:3])) if failures else _ok(f"h = {a.order.h}")


def check_sign_table(a):
    report = verify_sign_table(a.order, tol=TABLE_TOL)
    if not report.ok:
        return _fail(f"{len(report.violations)} violations, first {report.violations[0]}")
    return _ok(f"max deviation {report.max_deviation:.2e}")


def check_longest(a):
    w0, word = a.longest
    order = a.order
    if len(word) != order.n_positive:
        return _fail("longest word has the wrong length")
    if not (w0 * w0).is_identity() or w0 != a.group.longest:
        return _fail("bipartite word does not give the longest element")
    if len(inversion_set(w0)) != a.system.n_positive:
        return _fail("longest element does not invert every positive root")
    # The last n rays span the opposite chamber w0(C).
    images = w0.apply(a.system.dual_basis)
    for q in range(order.n_positive + 1, order.length + 1):
        mu = order.mu_vector(q)
        if not any(np.allclose(mu / np.linalg.norm(mu), v / np.linalg.norm(v), atol=TABLE_TOL)
                   for v in images):
            return _fail(f"mu_{q} is not a ray of w0(C)")
    return _ok()


def _word_orders(a):
    memo = {}
    orders = set()
    words = 0
    for w in a.group:
        for word in reduced_words(a.group, w, memo):
            orders.add(inversions_from_word(a.system, word))
            words += 1
    return orders, words, memo


def check_papi_soundness(a):
    if len(a.group) > SWEEP_LIMIT:
        return "skipped", f"|W| = {len(a.group)} > {SWEEP_LIMIT}"
    sys = a.system
    memo = {}
    count = 0
    for w in a.group:
        for word in reduced_words(a.group, w, memo):
            sigma = inversions_from_word(sys, word)
            verdict = papi_check(sigma, sys)
            if not verdict:
                return _fail(f"word {word} rejected ({verdict.clause})")
            if word_from_ordered_roots(sigma, sys) != word:
                return _fail(f"word {word} does not round trip")
            count += 1
    return _ok(f"{count} reduced words")


def check_papi_completeness(a, seed=0, probes=1000):
    if len(a.group) > SWEEP_LIMIT:
        return "skipped", f"|W| = {len(a.group)} > {SWEEP_LIMIT}"
    sys = a.system
    rng = random.Random(seed)
    valid, _, _ = _word_orders(a)
    rejected = 0
    for k in range(probes):
        if k % 2:
            roots = sorted(inversion_set(rng.choice(a.group.elements)))
        else:
            roots = [r for r in range(sys.n_positive) if rng.random() < 0.5]
        rng.shuffle(roots)
        sigma = tuple(roots)
        expected = sigma in valid
        if bool(papi_check(sigma, sys)) != expected:
            return _fail(f"order {sigma} misjudged (word-induced: {expected})")
        rejected += not expected
    return _ok(f"{probes} probes, {rejected} rejected")


def check_climbing_monotone(a):
    if len(a.group) > SWEEP_LIMIT:
        return "skipped", f"|W| = {len(a.group)} > {SWEEP_LIMIT}"
    memo = {}
    rho_index = a.order.rho_index
    for w in a.group:
        seqs = (rho_index[list(inversions_from_word(a.system, word))]
                for word in reduced_words(a.group, w, memo))
        brute = any(np.all(np.diff(s) > 0) for s in seqs)
        if brute != is_climbing(w, a.order):
            return _fail(f"climbing test disagrees with word scan on {w}")
    return _ok()


def check_facets_brute(a):
    if a.system.rank > BRUTE_FACET_RANK:
        return "skipped", f"rank {a.system.rank} > {BRUTE_FACET_RANK}"
    brute = [f.indices for f in enumerate_facets_brute(a.order)]
    if brute != [f.indices for f in a.facets]:
        return _fail("pruned search disagrees with the full scan")
    return _ok(f"{len(brute)} facets")


def check_catalan(a):
    counts = {
        "facets": len(a.facets),
        "climbing": len(set(a.climbing)),
        "falling": len(set(a.falling)),
        "catalan": a.catalan,
    }
    if len(set(counts.values())) != 1:
        return _fail(str(counts))
    return _ok(f"{a.catalan}")


def check_partition(a):
    assignment = a.assignment
    if len(assignment) != len(a.group):
        return _fail("assignment is not total")
    sizes = np.bincount(list(assignment.values()), minlength=len(a.facets))
    if sizes.sum() != len(a.group) or np.any(sizes == 0):
        return _fail("fibres do not partition the group")
    first = assignment[a.system.identity().perm_key]
    last = assignment[a.group.longest.perm_key]
    if first != 0 or last != len(a.facets) - 1:
        return _fail(f"identity in facet {first}, w0 in facet {last}")
    return _ok(f"fibre sizes {sizes.min()}..{sizes.max()}")


def check_facet_walls(a):
    order = a.order
    n, P = order.n, order.n_positive
    for f in a.facets:
        i = f.last_index
        if i <= n:
            continue
        wall = order.rho_vector(i - n)
        if n > 1 and np.abs(f.vertices[:-1] @ wall).max() > TABLE_TOL:
            return _fail(f"face of {f.indices} opposite its last ray is off the wall")
        normals = order.rho_vectors[i - n - 1: P]
        signs = f.vertices @ normals.T
        if np.any(signs[:, 0] > TABLE_TOL) or np.any(signs[:, 1:] < -TABLE_TOL):
            return _fail(f"{f.indices} leaves the slab of its last index")
    return _ok()


def check_filtration_span(a, seed=0, probes=200):
    order = a.order
    n, L = order.n, order.length
    rng = np.random.default_rng(seed)
    tested = 0
    for _ in range(probes):
        i = int(rng.integers(n, L + 1))
        x = rng.normal(size=n)
        z = filtration_Z(i, order)
        margin = np.abs(z.normals @ x).min() if len(z.normals) else 1.0
        if margin < 1e-3:
            continue
        # nnls's reported rnorm is unreliable on some scipy builds; recompute it.
        coeffs, _ = nnls(order.mu[:i].T, x)
        resid = np.linalg.norm(order.mu[:i].T @ coeffs - x)
        if z.contains(x) != (resid < 1e-7):
            return _fail(f"Z_{i} membership disagrees with the span of V_{i} at {x}")
        tested += 1
    return _ok(f"{tested} probes")


def check_climbing_scan(a):
    order = a.order
    facet_set = set(a.climbing)
    if len(facet_set) != len(a.facets):
        return _fail("two facets share a climbing element")
    if len(a.group) > EXHAUSTIVE_LIMIT:
        bad = [w for w in a.climbing if not is_climbing(w, order) or not sortable_oracle(w, order)]
        if bad:
            return _fail(f"{bad[0]} is not climbing and sortable")
        return _ok("facet-generated candidates only")
    climbing = {w for w in a.group if is_climbing(w, order)}
    sortable = {w for w in a.group if sortable_oracle(w, order)}
    by_word = set()
    for w in a.group:
        sigma = tuple(sorted(inversion_set(w), key=lambda r: order.rho_index[r]))
        try:
            word_from_ordered_roots(sigma, a.system)
        except CoxeterError:
            continue
        by_word.add(w)
    if climbing != by_word:
        return _fail("papi test and word extraction disagree on climbing")
    if climbing != facet_set:
        return _fail("exhaustive climbing scan differs from facet construction")
    if sortable != climbing:
        return _fail("sortable elements differ from climbing elements")
    return _ok(f"{len(climbing)} climbing")


def check_dual(a):
    dual = a.dual  # raises DualMismatch on any identity failure
    flipped = sorted(a.dual.flip(f.indices) for f in a.facets)
    if [f.indices for f in enumerate_facets(dual.order)] != flipped:
        return _fail("dual facets are not the flipped primal facets")
    if dual.order.h != a.order.h:
        return _fail("c^{-1} has a different order")
    return _ok(f"alpha' = -alpha at {dual.label_map}")


def check_neighbour_step(a):
    order = a.order
    n = order.n
    for f, x in zip(a.facets, a.climbing):
        i = f.last_index
        if i <= n:
            continue
        y = reflection(a.system, order.rho_root(i - n)) * x
        if not is_climbing(y, order):
            return _fail(f"R(rho_{i - n}) x_F is not climbing for {f.indices}")
        if a.locator.locate(y) != neighbor_across(f, order, a.facets):
            return _fail(f"R(rho_{i - n}) x_F leaves the neighbour of {f.indices}")
    return _ok()


def check_falling(a):
    order = a.order
    w0 = a.group.longest
    for f, x in zip(a.facets, a.falling):
        if not is_falling(x, order):
            return _fail(f"{x} is not falling")
        if a.locator.locate(x * w0) != f:
            return _fail(f"f w0 leaves the class of {f.indices}")
    if len(a.group) <= EXHAUSTIVE_LIMIT:
        scan = {w for w in a.group if is_falling(w, order)}
        if scan != set(a.falling):
            return _fail("falling scan differs from dual construction")
    return _ok()


def check_classes(a):
    for cls, x in zip(a.classes, a.climbing):
        if cls.min_element != x:
            return _fail(f"class minimum of {cls.facet.indices} is not its climbing element")
        if class_maximum(cls.members) != cls.max_element:
            return _fail(f"f w0 is not the top of {cls.facet.indices}")
    return _ok(f"{len(a.classes)} intervals")


CHECKS = [
    ("system-geometry", check_geometry),
    ("inversion-sets", check_inversions),
    ("perm-keys", check_perm_keys),
    ("order-invariants", check_order),
    ("sign-table", check_sign_table),
    ("longest-word", check_longest),
    ("papi-soundness", check_papi_soundness),
    ("papi-completeness", check_papi_completeness),
    ("climbing-monotone", check_climbing_monotone),
    ("facets-bruteforce", check_facets_brute),
    ("catalan-counts", check_catalan),
    ("fan-partition", check_partition),
    ("facet-walls", check_facet_walls),
    ("filtration-span", check_filtration_span),
    ("climbing-sortable", check_climbing_scan),
    ("dual-identities", check_dual),
    ("neighbour-step", check_neighbour_step),
    ("falling-elements", check_falling),
    ("class-intervals", check_classes),
]

_SEEDED = {"papi-completeness", "filtration-span"}


def run_checks(analysis, seed=0, only=None):
    """Run every check (or those named in ``only``) and collect results."""
    results = []
    for name, fn in CHECKS:
        if only is not None and name not in only:
            continue
        log.info("%s: %s", analysis.name, name)
        try:
            status, detail = fn(analysis, seed=seed) if name in _SEEDED else fn(analysis)
        except CoxeterError as exc:
            status, detail = "fail", f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, status, detail))
    return results
