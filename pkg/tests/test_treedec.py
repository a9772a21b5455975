import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import named
from sparsecount.errors import UnsupportedScale
from sparsecount.generators import complete, cycle, partial_two_tree, path, random_tree
from sparsecount.graph import Graph
from sparsecount.treedec import (
    NotBounded,
    TreeDecomposition,
    decompose_bounded,
    elimination_width,
    exact_treewidth,
    heuristic_decomposition,
    is_nice,
    make_nice,
    rooted_region_decomposition,
    treewidth_at_most,
    validate,
    width,
)


def td(bags, edges, root=None):
    tree = {q: set() for q in bags}
    for p, q in edges:
        tree[p].add(q)
    return TreeDecomposition(bags, tree, root)


def test_validate_examples(p3):
    g, n = p3
    a, b, c = n["a"], n["b"], n["c"]
    assert validate(TreeDecomposition.single_bag(g.vertices), g)
    d = td({0: {a, b}, 1: {b, c}}, [(0, 1)])
    assert validate(d, g) and width(d) == 1
    h, m = named("a b\na c")
    d2 = td({0: {m["a"], m["b"]}, 1: {m["b"], m["c"]}}, [(0, 1)])
    assert not validate(d2, h)


def test_validate_rejects_broken_trees_and_occurrence():
    g = path(3)
    assert not validate(td({0: {0, 1}, 1: {1, 2}}, []), g)
    assert not validate(td({0: {0, 1}, 1: {2}, 2: {1, 2}}, [(0, 1), (1, 2)]), g)


def test_width_examples():
    assert width(TreeDecomposition.single_bag(range(4))) == 3
    assert width(td({0: {0, 1}, 1: {1, 2}}, [(0, 1)])) == 1
    assert width(TreeDecomposition.single_bag([0])) == 0
    with pytest.raises(ValueError):
        width(TreeDecomposition({}, {}))


def test_exact_treewidth_examples():
    assert exact_treewidth(random_tree(9, random.Random(1))) == 1
    assert exact_treewidth(cycle(4)) == 2
    assert exact_treewidth(complete(4)) == 3
    grid = Graph(range(9), [(i, i + 1) for i in range(9) if i % 3 != 2] + [(i, i + 3) for i in range(6)])
    assert exact_treewidth(grid) == 3
    with pytest.raises(UnsupportedScale):
        exact_treewidth(path(15))


def test_exact_matches_all_elimination_orders():
    rng = random.Random(7)
    for _ in range(25):
        n = rng.randint(1, 7)
        g = Graph(range(n), [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.45])
        best = min(elimination_width(g, list(p)) for p in itertools.permutations(range(n)))
        assert exact_treewidth(g) == best


def test_decompose_bounded_examples():
    d = decompose_bounded(path(5), 1)
    assert not isinstance(d, NotBounded) and validate(d, path(5)) and width(d) <= 1
    nb = decompose_bounded(complete(4), 2)
    assert isinstance(nb, NotBounded) and nb.exact and not nb
    g = partial_two_tree(10, random.Random(3))
    assert exact_treewidth(g) <= 2
    d = decompose_bounded(g, 2)
    assert validate(d, g) and width(d) <= 2


def test_decompose_bounded_at_exact_width():
    rng = random.Random(11)
    for _ in range(30):
        n = rng.randint(1, 12)
        g = Graph(range(n), [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.35])
        tw = exact_treewidth(g)
        d = decompose_bounded(g, tw)
        assert not isinstance(d, NotBounded) and validate(d, g) and width(d) <= tw
        if tw > 0:
            assert treewidth_at_most(g, tw - 1) is None


def test_make_nice_examples(p3):
    g = Graph(range(3), [(0, 1), (1, 2), (0, 2)])
    nd = make_nice(TreeDecomposition.single_bag(range(3)), g, {0, 1})
    assert is_nice(nd) and validate(nd.as_tree_decomposition(), g) and nd.root_bag == {0, 1}
    assert sum(1 for node in nd.nodes.values() if node.kind == "forget") == 1

    h, n = p3
    d = td({0: {n["a"], n["b"]}, 1: {n["b"], n["c"]}}, [(0, 1)])
    nd = make_nice(d, h, {n["b"]})
    assert is_nice(nd) and validate(nd.as_tree_decomposition(), h) and nd.width() == 1
    again = make_nice(nd.as_tree_decomposition(), h, {n["b"]})
    assert is_nice(again) and validate(again.as_tree_decomposition(), h) and again.width() == 1


@given(st.integers(1, 11), st.data())
@settings(max_examples=80, deadline=None)
def test_make_nice_any_root(n, data):
    pairs = list(itertools.combinations(range(n), 2))
    edges = data.draw(st.lists(st.sampled_from(pairs), unique=True, max_size=2 * n)) if pairs else []
    g = Graph(range(n), edges)
    root = frozenset(data.draw(st.sets(st.integers(0, n - 1), max_size=3)))
    d = heuristic_decomposition(g)
    nd = make_nice(d, g, root)
    assert is_nice(nd)
    assert validate(nd.as_tree_decomposition(), g)
    assert nd.root_bag == root
    if any(root <= b for b in d.bags.values()):
        assert nd.width() <= max(width(d), len(root) - 1)


@given(st.integers(0, 10), st.data())
@settings(max_examples=60, deadline=None)
def test_rooted_region_decomposition(n, data):
    pairs = list(itertools.combinations(range(n), 2))
    edges = data.draw(st.lists(st.sampled_from(pairs), unique=True, max_size=2 * n)) if pairs else []
    g = Graph(range(n), edges)
    b = frozenset(data.draw(st.sets(st.integers(0, max(n - 1, 0)), max_size=3))) if n else frozenset()
    d = rooted_region_decomposition(g, b)
    assert validate(d, g) and d.bags[d.root] == b
