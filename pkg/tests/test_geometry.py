import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coxclimb import (BadSpec, CoxeterSystem, NonFiniteGroup, NotReduced, build_system,
                      enumerate_group, inversion_set, inversions_from_word, positive_roots,
                      reflection, weak_order_leq)
from coxclimb.errors import BudgetExceeded
from coxclimb.geometry import (inversion_set_by_base_point, parse_type, read_coxeter_matrix,
                               reduced_words)

from oracles import COXETER_NUMBER


def unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def closure_order(generators):
    """Order of the group generated by integer matrices, by brute-force closure."""
    gens = [np.array(g, dtype=int) for g in generators]
    start = np.eye(len(gens[0]), dtype=int)
    seen = {start.tobytes()}
    frontier = [start]
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                p = m @ g
                if p.tobytes() not in seen:
                    seen.add(p.tobytes())
                    nxt.append(p)
        frontier = nxt
    return len(seen)


def test_a2_gram_entry():
    sys = build_system("A2")
    a1, a2 = sys.simple_roots
    assert a1 @ a2 == pytest.approx(-0.5)


def test_i24_gram_entry():
    a1, a2 = build_system("I2(4)").simple_roots
    assert a1 @ a2 == pytest.approx(-math.cos(math.pi / 4))
    assert a1 @ a2 == pytest.approx(-0.7071, abs=1e-4)


@pytest.mark.parametrize("spec", ["A1", "A3", "B4", "D4", "E6", "F4", "G2", "H3", "H4", "I2(7)"])
def test_system_invariants(spec):
    sys = build_system(spec)
    a, b = sys.simple_roots, sys.dual_basis
    np.testing.assert_allclose(np.linalg.norm(a, axis=1), 1.0, atol=1e-12)
    np.testing.assert_allclose(a @ b.T, np.eye(sys.rank), atol=1e-12)
    np.testing.assert_allclose(a @ a.T, -np.cos(np.pi / sys.coxeter_matrix), atol=1e-12)
    np.testing.assert_allclose(a @ sys.base_point, 1.0, atol=1e-12)
    # Triangular realisation.
    np.testing.assert_allclose(np.triu(a, 1), 0.0, atol=0)
    assert np.linalg.det(a @ a.T) > 0


def test_huge_label_is_not_finite():
    with pytest.raises(NonFiniteGroup):
        CoxeterSystem([[1, 10**9], [10**9, 1]])


def test_infinite_label_rejected():
    with pytest.raises(NonFiniteGroup):
        CoxeterSystem([[1, float("inf")], [float("inf"), 1]])


def test_affine_diagram_rejected():
    # Triangle of 3s is affine A2~: Gram matrix is singular.
    with pytest.raises(NonFiniteGroup):
        CoxeterSystem([[1, 3, 3], [3, 1, 3], [3, 3, 1]])


@pytest.mark.parametrize("bad", ["Z9", "A0", "B1", "D3", "E9", "F5", "H5", "I2(1)", "a2", "", "I3(4)"])
def test_bad_symbols(bad):
    with pytest.raises(BadSpec):
        parse_type(bad)


@pytest.mark.parametrize("matrix", [
    [[1, 3], [2, 1]],
    [[2, 3], [3, 1]],
    [[1, 1], [1, 1]],
    [[1, 2.5], [2.5, 1]],
])
def test_bad_matrices(matrix):
    with pytest.raises(BadSpec):
        CoxeterSystem(matrix)


def test_matrix_file(tmp_path):
    path = tmp_path / "b3.txt"
    path.write_text("3\n1 4 2\n4 1 3\n2 3 1\n")
    sys = build_system(read_coxeter_matrix(path))
    assert len(enumerate_group(sys)) == 48
    path.write_text("3\n1 4\n")
    with pytest.raises(BadSpec):
        read_coxeter_matrix(path)


def test_reflection_examples():
    sys = build_system("A2")
    a1, a2 = sys.simple_roots
    b2 = sys.dual_basis[1]
    r = reflection(sys, 0)
    np.testing.assert_allclose(r.apply(a1), -a1, atol=1e-12)
    np.testing.assert_allclose(r.apply(b2), b2, atol=1e-12)
    # At 120 degrees, a2 - 2 (a1.a2) a1 = a1 + a2, already of unit length.
    np.testing.assert_allclose(r.apply(a2), unit(a1 + a2), atol=1e-12)
    t = r.transform
    np.testing.assert_allclose(t, np.eye(2) - 2 * np.outer(a1, a1), atol=1e-12)
    assert (r * r).is_identity()


def test_reflection_by_vector_matches_index():
    sys = build_system("H3")
    for k in range(sys.n_positive):
        assert reflection(sys, sys.roots[k]) == reflection(sys, k)
    with pytest.raises(ValueError):
        reflection(sys, 2 * sys.roots[0])


def test_group_orders_from_oracles():
    assert len(enumerate_group(build_system("A2"))) == 2 * 3
    for m in range(2, 13):
        assert len(enumerate_group(build_system(f"I2({m})"))) == 2 * m
    # B3 as signed permutation matrices; A3 as permutation matrices of R^4.
    b3 = [np.eye(3)[[1, 0, 2]], np.eye(3)[[0, 2, 1]], np.diag([1, 1, -1])]
    assert len(enumerate_group(build_system("B3"))) == closure_order(b3) == 2**3 * 6
    a3 = [np.eye(4)[list(p)] for p in ([1, 0, 2, 3], [0, 2, 1, 3], [0, 1, 3, 2])]
    assert len(enumerate_group(build_system("A3"))) == closure_order(a3) == 24
    assert len(enumerate_group(build_system("H3"))) == 120


def test_budget():
    with pytest.raises(BudgetExceeded):
        enumerate_group(build_system("F4"), budget=1000)


@pytest.mark.parametrize("spec,h", sorted(COXETER_NUMBER.items()))
def test_positive_root_count(spec, h):
    sys = build_system(spec)
    assert sys.n_positive == sys.rank * h // 2
    roots = positive_roots(sys)
    assert len(roots) == sys.n_positive
    for r in roots:
        assert r.positive and sys.root_sign(r.vector) == 1
        assert np.all(sys.coefficients[r.index] > -1e-9)
    for k in range(sys.n_positive, 2 * sys.n_positive):
        assert sys.root_sign(sys.roots[k]) == -1


def test_inversion_set_examples():
    sys = build_system("A2")
    g = enumerate_group(sys)
    e = sys.identity()
    assert inversion_set(e) == frozenset()
    assert inversion_set(g.longest) == frozenset(range(3))
    s1s2 = sys.element([1, 2])
    a1, a2 = sys.simple_roots
    expected = {0, sys.find_root(unit(a1 + a2))}
    assert inversion_set(s1s2) == expected


def test_inversions_from_word_examples():
    sys = build_system("A2")
    a1, a2 = sys.simple_roots
    assert inversions_from_word(sys, [1]) == (0,)
    assert inversions_from_word(sys, [1, 2, 1]) == (0, sys.find_root(unit(a1 + a2)), 1)
    with pytest.raises(NotReduced):
        inversions_from_word(sys, [1, 1])
    with pytest.raises(NotReduced):
        inversions_from_word(sys, [1, 2, 1, 2])


def test_weak_order_examples():
    sys = build_system("A2")
    g = enumerate_group(sys)
    e = sys.identity()
    assert all(weak_order_leq(e, w) for w in g)
    assert not weak_order_leq(g.longest, e)
    assert weak_order_leq(sys.element([1]), sys.element([1, 2]))
    assert not weak_order_leq(sys.element([2]), sys.element([1, 2]))


def test_inversions_agree_on_every_element(small):
    sys = small.system
    for w in small.group:
        inv = inversion_set(w)
        assert inv == inversion_set_by_base_point(w)
        assert len(inv) == len(w.word) == w.length
        for word in reduced_words(small.group, w)[:20]:
            assert set(inversions_from_word(sys, word)) == inv


def test_perm_key_matches_transform(small):
    elements = small.group.elements
    mats = np.stack([w.transform for w in elements]).reshape(len(elements), -1)
    dist = np.abs(mats[:, None] - mats[None, :]).max(axis=2)
    same = dist < 1e-9
    assert np.array_equal(same, np.eye(len(elements), dtype=bool))
    for w in elements:
        assert small.system.element_from_matrix(w.transform) == w
        m = w.transform
        np.testing.assert_allclose(m @ m.T, np.eye(small.system.rank), atol=1e-12)


def test_root_orbit_closed():
    sys = build_system("F4")
    for perm in sys.generator_perms:
        assert sorted(perm.tolist()) == list(range(len(sys.roots)))


words = st.lists(st.integers(min_value=1, max_value=3), max_size=30)


@settings(max_examples=200, deadline=None)
@given(words, st.sampled_from(["A3", "B3", "H3"]))
def test_word_evaluation_matches_matrices(word, spec):
    sys = build_system(spec)
    w = sys.element(word)
    product = np.eye(3)
    for label in word:
        alpha = sys.simple_roots[label - 1]
        product = product @ (np.eye(3) - 2 * np.outer(alpha, alpha))
    np.testing.assert_allclose(w.transform, product, atol=1e-9)
    assert sys.element_from_matrix(product) == w
    assert (w * w.inverse()).is_identity()


@settings(max_examples=200, deadline=None)
@given(words, st.sampled_from(["A3", "B3", "H3"]))
def test_prefixes_below_in_weak_order(word, spec):
    sys = build_system(spec)
    w = sys.element(word)
    g_len = w.length
    # A shortest word for w: greedily strip right descents.
    if g_len == 0:
        return
    reduced = []
    u = w
    while not u.is_identity():
        label = next(k for k in range(1, 4) if u.perm[k - 1] >= sys.n_positive)
        reduced.append(label)
        u = u * sys.generator(label)
    reduced.reverse()
    assert len(reduced) == g_len
    assert set(inversions_from_word(sys, reduced)) == inversion_set(w)
    for k in range(len(reduced) + 1):
        assert weak_order_leq(sys.element(reduced[:k]), w)


def test_group_closed_under_generators():
    g = enumerate_group(build_system("B3"))
    for w in g:
        for k in range(1, 4):
            assert w * g.system.generator(k) in g
    assert g.system.group_order == 48


def test_reduced_words_count_a3_longest():
    g = enumerate_group(build_system("A3"))
    words = reduced_words(g, g.longest)
    # Brute force: all length-6 words over three letters that are reduced for w0.
    brute = [w for w in itertools.product([1, 2, 3], repeat=6)
             if g.system.element(w) == g.longest]
    assert sorted(words) == sorted(brute)
    assert len(words) == 16
