import itertools
import random

import pytest

from conftest import named
from sparsecount.algebra import (
    AlgebraState,
    decode_state,
    ds_algebra,
    encode_state,
    get_algebra,
    is_algebra,
    state_of,
    vc_algebra,
)
from sparsecount.generators import star
from sparsecount.graph import BStructure, Graph, glue
from sparsecount.oracle import definitional_state
from sparsecount.treedec import TreeDecomposition, heuristic_decomposition, make_nice, rooted_region_decomposition


def test_vc_predicate_and_leaf(c3):
    g, n = c3
    alg = vc_algebra()
    assert alg.predicate(g, {n["a"], n["b"]})
    assert not alg.predicate(g, {n["a"]})
    edge = Graph([0, 1], [(0, 1)])
    assert alg.leaf(edge, frozenset())[1] is False


def test_is_predicate(c4, p3):
    g, n = c4
    assert is_algebra().predicate(g, {n["a"], n["c"]})
    h, m = p3
    assert not is_algebra().predicate(h, {m["a"], m["b"]})


def test_is_conflict_inside_join_bag():
    # triangle bag joined with itself: the annotated edge 0-1 lives in the join bag
    g = Graph(range(4), [(0, 1), (1, 2), (0, 3)])
    d = TreeDecomposition({0: {0, 1}, 1: {0, 1, 2}, 2: {0, 1, 3}}, {0: {1, 2}})
    nd = make_nice(d, g, {0, 1})
    assert any(node.kind == "join" for node in nd.nodes.values())
    s = state_of(is_algebra(), BStructure(g, {0, 1}, {0, 1}), nd)
    assert s == AlgebraState((1, 2), (False,))
    s = state_of(is_algebra(), BStructure(g, {0, 1}, {1, 2}), nd)
    assert s == AlgebraState((2,), (False,))
    s = state_of(is_algebra(), BStructure(g, {0, 1}, {1, 3}), nd)
    assert s == AlgebraState((2,), (True,))


def test_ds_predicate_and_forget(p3):
    g = star(3)
    assert ds_algebra().predicate(g, {0})
    h, n = p3
    assert not ds_algebra().predicate(h, {n["a"]})
    alg = ds_algebra()
    state = (frozenset(), frozenset({5}), True)
    assert alg.forget(state, 5)[2] is False
    assert alg.forget((frozenset(), frozenset(), True), 5)[2] is True


def test_state_of_examples(c3):
    g, n = c3
    a, b = n["a"], n["b"]
    alg = vc_algebra()
    assert state_of(alg, BStructure(g, {a}, {a, b})) == AlgebraState((1,), (True,))
    assert state_of(alg, BStructure(g, {a}, {a})) == AlgebraState((1,), (False,))
    p4, m = named("a b\nb c\nc d")
    s = state_of(ds_algebra(), BStructure(p4, {m["a"]}, {m["c"]}))
    assert s == AlgebraState((), ((1,), True))


def test_state_of_rejects_bad_decompositions(c3):
    g, n = c3
    x = BStructure(g, {n["a"]}, ())
    with pytest.raises(ValueError):
        state_of(vc_algebra(), x, TreeDecomposition.single_bag({n["a"], n["b"]}))
    bad_root = TreeDecomposition.single_bag(g.vertices).rooted(0)
    with pytest.raises(ValueError):
        state_of(vc_algebra(), x, bad_root)


def test_join_incompatible_exactly_on_trace_mismatch():
    for alg in (vc_algebra(), is_algebra(), ds_algebra()):
        g = Graph(range(3), [(0, 1), (1, 2)])
        states = [alg.leaf(g, frozenset(a)) for r in range(4) for a in itertools.combinations(range(3), r)]
        for s1, s2 in itertools.product(states, states):
            assert (alg.join(s1, s2) is None) == (alg.annotated_of(s1) != alg.annotated_of(s2))


@pytest.mark.parametrize("name", ["vc", "is", "ds"])
def test_state_encoding_round_trip(name):
    alg = get_algebra(name)
    rng = random.Random(4)
    for _ in range(50):
        n = rng.randint(0, 6)
        g = Graph(range(n), [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.4])
        b = frozenset(rng.sample(range(n), min(n, 3)))
        a = frozenset(v for v in range(n) if rng.random() < 0.5)
        s = state_of(alg, BStructure(g, b, a), rooted_region_decomposition(g, b))
        text = encode_state(alg, s)
        assert " " not in text
        assert decode_state(alg, text) == s


def test_state_encoding_format():
    assert encode_state(vc_algebra(), AlgebraState((1, 3), (True,))) == "A{1,3}:cov=1"
    assert encode_state(is_algebra(), AlgebraState((), (False,))) == "A{}:ok=0"
    assert encode_state(ds_algebra(), AlgebraState((2,), ((1,), True))) == "A{2}:und={1};int=1"
    for bad in ("A{2,1}:cov=1", "A{1}cov=1", "{1}:cov=1", "A{1}:cov=2", "A{1}:ok=1", "A{0}:cov=1"):
        with pytest.raises(ValueError):
            decode_state(vc_algebra(), bad)


def test_get_algebra_unknown():
    with pytest.raises(ValueError):
        get_algebra("clique")


@pytest.mark.parametrize("name", ["vc", "is", "ds"])
def test_dp_state_matches_definition(name):
    alg = get_algebra(name)
    rng = random.Random(hash(name) % 1000)
    for _ in range(300):
        n = rng.randint(0, 6)
        g = Graph(range(n), [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.45])
        b = frozenset(rng.sample(range(n), rng.randint(0, min(n, 3))))
        a = frozenset(v for v in range(n) if rng.random() < 0.4)
        d = heuristic_decomposition(g) if rng.random() < 0.5 else rooted_region_decomposition(g, b)
        nd = make_nice(d, g, b)
        s = state_of(alg, BStructure(g, b, a), nd)
        assert (s.annotated_boundary, s.payload) == definitional_state(name, g, b, a)


@pytest.mark.parametrize("name", ["vc", "is", "ds"])
def test_congruence_sampled(name):
    """Equal states glue to equal verdicts (random pairs, boundary up to 3)."""
    alg = get_algebra(name)
    rng = random.Random(17)
    pool = {}
    for _ in range(600):
        nb = rng.randint(0, 3)
        n = rng.randint(nb, 6)
        g = Graph(range(n), [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.4])
        x = BStructure(g, range(nb), frozenset(v for v in range(n) if rng.random() < 0.4))
        pool.setdefault((nb, x.boundary_graph_signature()), []).append((state_of(alg, x), x))
    for items in pool.values():
        for (s1, x1), (s2, x2) in itertools.combinations(items[:25], 2):
            if s1 != s2:
                continue
            for _, y in items[:25]:
                if y.annotated_boundary_index() != x1.annotated_boundary_index():
                    continue
                g1, a1 = glue(x1, y)
                g2, a2 = glue(x2, y)
                assert alg.predicate(g1, a1) == alg.predicate(g2, a2)


@pytest.mark.parametrize("name", ["vc", "is", "ds"])
def test_combine_matches_predicate_on_glued_graph(name):
    alg = get_algebra(name)
    rng = random.Random(23)
    for _ in range(200):
        n0 = rng.randint(1, 4)
        center = Graph(range(n0), [(i, j) for i in range(n0) for j in range(i + 1, n0) if rng.random() < 0.5])
        a0 = frozenset(v for v in range(n0) if rng.random() < 0.4)
        whole, ann = center, set(a0)
        boundaries, states = [], []
        for _ in range(rng.randint(0, 2)):
            bd = sorted(rng.sample(range(n0), rng.randint(0, min(2, n0))))
            m = len(bd) + rng.randint(0, 3)
            # protrusion vertices 0..len(bd)-1 stand for the boundary, in order
            edges = [(i, j) for i in range(m) for j in range(i + 1, m) if j >= len(bd) and rng.random() < 0.5]
            edges += [(i, j) for i, j in itertools.combinations(range(len(bd)), 2) if center.has_edge(bd[i], bd[j])]
            pg = Graph(range(m), edges)
            pa = frozenset(i for i, v in enumerate(bd) if v in a0) | frozenset(
                v for v in range(len(bd), m) if rng.random() < 0.4
            )
            p = BStructure(pg, range(len(bd)), pa)
            boundaries.append(tuple(bd))
            states.append(state_of(alg, p))
            whole_b = BStructure(whole, bd, ann)
            whole, glued_ann = glue(whole_b, p)
            ann = set(glued_ann)
        assert alg.combine(center, a0, boundaries, states) == alg.predicate(whole, frozenset(ann))
