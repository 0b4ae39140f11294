import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coxclimb import (IsSimple, NotSimple, build_system, inversion_set, inversions_from_word,
                      is_climbing, is_falling, nonsimple_decomposition, papi_check,
                      positive_triples, word_from_ordered_roots)
from coxclimb.geometry import reduced_words

from oracles import brute_triples


def a2_roots(sys):
    a1, a2 = sys.simple_roots
    return 0, sys.find_root(a1 + a2), 1


def test_a2_single_triple():
    sys = build_system("A2")
    (t,) = positive_triples(sys)
    a1, mid, a2 = a2_roots(sys)
    assert (t.sigma, t.tau, t.rho) == (a1, a2, mid)
    assert t.a == pytest.approx(1) and t.b == pytest.approx(1)


def test_a1_no_triples():
    assert positive_triples(build_system("A1")) == []


def test_b2_triples():
    # Four positive roots 45 degrees apart: the pairs (0, 135), (0, 90) and (45, 135)
    # enclose two, one and one roots respectively.
    assert len(positive_triples(build_system("B2"))) == 4


@pytest.mark.parametrize("spec", ["A3", "B3", "H3", "D4", "F4"])
def test_triples_match_brute_force(spec):
    sys = build_system(spec)
    got = {(t.sigma, t.tau, t.rho) for t in positive_triples(sys)}
    assert got == brute_triples(sys.roots[: sys.n_positive])
    for t in positive_triples(sys):
        residual = sys.roots[t.rho] - t.a * sys.roots[t.sigma] - t.b * sys.roots[t.tau]
        assert np.abs(residual).max() < 1e-9
        assert t.a > 1e-9 and t.b > 1e-9


def test_papi_examples():
    sys = build_system("A2")
    a1, mid, a2 = a2_roots(sys)
    assert papi_check((a1, mid, a2), sys)
    v = papi_check((a1, a2, mid), sys)
    assert not v and v.clause == "i"
    v = papi_check((mid,), sys)
    assert not v and v.clause == "ii"
    assert papi_check((), sys)
    assert papi_check((a1, a1), sys).clause == "entries"
    assert papi_check((3,), sys).clause == "entries"


def test_word_extraction_examples():
    sys = build_system("A2")
    a1, mid, a2 = a2_roots(sys)
    assert word_from_ordered_roots((a1, mid, a2), sys) == (1, 2, 1)
    assert word_from_ordered_roots((), sys) == ()
    assert word_from_ordered_roots((a2,), sys) == (2,)
    with pytest.raises(NotSimple):
        word_from_ordered_roots((mid,), sys)


def test_climbing_falling_examples(get):
    a = get("A2")
    sys, order = a.system, a.order
    e, s1s2, s2s1, w0 = (sys.identity(), sys.element([1, 2]), sys.element([2, 1]),
                         a.group.longest)
    assert is_climbing(e, order) and is_falling(e, order)
    assert not is_climbing(s2s1, order)
    assert is_climbing(w0, order)
    assert is_climbing(s1s2, order)
    assert not is_falling(s1s2, order)
    assert is_falling(s2s1, order)


def test_nonsimple_decomposition_a2():
    sys = build_system("A2")
    a1, mid, a2 = a2_roots(sys)
    t = nonsimple_decomposition(mid, sys)
    assert (t.sigma, t.tau, t.rho) == (a2, a1, mid)
    assert t.b == pytest.approx(2 * sys.roots[mid] @ sys.roots[a1])
    with pytest.raises(IsSimple):
        nonsimple_decomposition(a1, sys)


@pytest.mark.parametrize("spec", ["B2", "H3", "F4", "H4"])
def test_nonsimple_decomposition_residuals(spec):
    sys = build_system(spec)
    for r in range(sys.rank, sys.n_positive):
        t = nonsimple_decomposition(r, sys)
        assert t.b > 0 and t.sigma < sys.n_positive
        residual = sys.roots[r] - sys.roots[t.sigma] - t.b * sys.roots[t.tau]
        assert np.abs(residual).max() < 1e-9


def test_soundness_and_round_trip(small):
    sys = small.system
    memo = {}
    for w in small.group:
        for word in reduced_words(small.group, w, memo):
            sigma = inversions_from_word(sys, word)
            assert papi_check(sigma, sys)
            assert word_from_ordered_roots(sigma, sys) == word


def test_climbing_agrees_with_word_scan(small):
    order = small.order
    memo = {}
    for w in small.group:
        brute = any(
            np.all(np.diff(order.rho_index[list(inversions_from_word(small.system, word))]) > 0)
            for word in reduced_words(small.group, w, memo))
        assert brute == is_climbing(w, order)
        brute = any(
            np.all(np.diff(order.rho_index[list(inversions_from_word(small.system, word))]) < 0)
            for word in reduced_words(small.group, w, memo))
        assert brute == is_falling(w, order)


@pytest.fixture(scope="module")
def word_orders():
    from conftest import analysis
    out = {}
    for spec in ("A3", "B3", "H3"):
        a = analysis(spec)
        memo = {}
        out[spec] = {inversions_from_word(a.system, word)
                     for w in a.group for word in reduced_words(a.group, w, memo)}
    return out


@settings(max_examples=300, deadline=None)
@given(spec=st.sampled_from(["A3", "B3", "H3"]), data=st.data())
def test_completeness_on_random_orders(word_orders, spec, data):
    from conftest import analysis
    a = analysis(spec)
    w = data.draw(st.sampled_from(a.group.elements))
    sigma = tuple(data.draw(st.permutations(sorted(inversion_set(w)))))
    assert bool(papi_check(sigma, a.system)) == (sigma in word_orders[spec])


@settings(max_examples=300, deadline=None)
@given(spec=st.sampled_from(["A3", "B3", "H3"]), data=st.data())
def test_arbitrary_subsets_judged(word_orders, spec, data):
    from conftest import analysis
    a = analysis(spec)
    roots = data.draw(st.lists(st.integers(0, a.system.n_positive - 1), unique=True, max_size=8))
    sigma = tuple(roots)
    valid = bool(papi_check(sigma, a.system))
    assert valid == (sigma in word_orders[spec])
    if valid:
        word = word_from_ordered_roots(sigma, a.system)
        assert inversions_from_word(a.system, word) == sigma
    else:
        with pytest.raises(NotSimple):
            word_from_ordered_roots(sigma, a.system)
