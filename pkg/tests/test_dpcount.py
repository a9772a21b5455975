import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import named
from sparsecount.algebra import AlgebraState, get_algebra, is_algebra, vc_algebra
from sparsecount.dpcount import count_table, poly_mul, poly_shift, table_from_entries, table_polynomial
from sparsecount.graph import BGraph, Graph
from sparsecount.oracle import brute_state_table
from sparsecount.treedec import TreeDecomposition, heuristic_decomposition, make_nice, rooted_region_decomposition


def table(g, boundary, alg, k, d=None):
    d = d or rooted_region_decomposition(g, boundary)
    return count_table(BGraph(g, boundary), make_nice(d, g, boundary), alg, k)


def test_vc_examples(c3, p3):
    t = table(c3[0], (), vc_algebra(), 2)
    assert t[AlgebraState((), (True,)), 2] == 3
    t = table(p3[0], (), vc_algebra(), 1)
    assert t[AlgebraState((), (True,)), 1] == 1
    assert t[AlgebraState((), (False,)), 1] == 2


def test_is_example(c4):
    g, n = c4
    t = table(g, {n["a"]}, is_algebra(), 2)
    assert t[AlgebraState((), (True,)), 2] == 1


def test_table_polynomial_examples():
    r = AlgebraState((), (True,))
    t = table_from_entries([(r, 0, 1), (r, 1, 4)], (), 2)
    assert table_polynomial(t, r, 0, 1) == [1, 4]
    assert table_polynomial(t, r, 1, 1) == [4, 0]
    empty = table_from_entries([], (), 2)
    assert table_polynomial(empty, r, 0, 2) == [0, 0, 0]


def test_poly_helpers():
    assert poly_mul([1, 2], [3, 4], 5) == [3, 10, 8, 0, 0, 0]
    assert poly_mul([1, 2], [3, 4], 1) == [3, 10]
    assert poly_shift([1, 2, 3], 1, 2) == [0, 1, 2]
    assert poly_shift([1, 2, 3], -1, 2) == [2, 3, 0]


def test_count_table_preconditions(c3):
    g, n = c3
    nd = make_nice(TreeDecomposition.single_bag(g.vertices), g, {n["a"]})
    with pytest.raises(ValueError):
        count_table(BGraph(g, {n["b"]}), nd, vc_algebra(), 2)
    with pytest.raises(ValueError):
        count_table(BGraph(g, {n["a"]}), nd, vc_algebra(), -1)


@pytest.mark.parametrize("name", ["vc", "is", "ds"])
def test_matches_oracle_table(name):
    alg = get_algebra(name)
    rng = random.Random(31)
    for _ in range(80):
        n = rng.randint(0, 9)
        g = Graph(range(n), [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.35])
        b = frozenset(rng.sample(range(n), rng.randint(0, min(n, 3))))
        k = rng.randint(0, n)
        d = heuristic_decomposition(g) if rng.random() < 0.5 else None
        got = table(g, b, alg, k, d).as_plain()
        want = brute_state_table(g, b, name, k)
        assert got == {s: r for s, r in want.items() if any(r)}


@given(st.integers(0, 9), st.data())
@settings(max_examples=40, deadline=None)
def test_totals_are_binomial(n, data):
    pairs = list(itertools.combinations(range(n), 2))
    edges = data.draw(st.lists(st.sampled_from(pairs), unique=True, max_size=2 * n)) if pairs else []
    g = Graph(range(n), edges)
    b = frozenset(data.draw(st.sets(st.integers(0, max(n - 1, 0)), max_size=3))) if n else frozenset()
    for name in ("vc", "is", "ds"):
        t = table(g, b, get_algebra(name), n)
        for k in range(n + 1):
            assert t.total(k) == math.comb(n, k)


def test_join_convolution_matches_pairs():
    # two triangles sharing the edge {0,1}; the join bag is {0,1}
    g = Graph(range(4), [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3)])
    d = TreeDecomposition({0: {0, 1}, 1: {0, 1, 2}, 2: {0, 1, 3}}, {0: {1, 2}}, 0)
    nd = make_nice(d, g, {0, 1})
    t = count_table(BGraph(g, {0, 1}), nd, vc_algebra(), 4)
    want = brute_state_table(g, {0, 1}, "vc", 4)
    assert t.as_plain() == {s: r for s, r in want.items() if any(r)}


def test_deterministic_order(c4):
    g, n = c4
    t1 = table(g, {n["a"], n["c"]}, vc_algebra(), 3)
    t2 = table(g, {n["a"], n["c"]}, vc_algebra(), 3)
    assert list(t1.entries.items()) == list(t2.entries.items())
