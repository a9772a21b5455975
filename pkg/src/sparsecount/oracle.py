"""Naive brute-force references.

Nothing here imports the pipeline modules (algebra, dpcount, modulator,
protrusion, compactor); only graph-core, plus exact treewidth for t >= 2.
States are plain tuples ``(annotated_boundary_indices, payload)`` so they
can be compared against the pipeline's AlgebraState fields.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from collections.abc import Callable, Iterable

from .errors import UnsupportedScale
from .graph import Graph, boundary_index, connected_components, is_forest

COUNT_LIMIT = 10**7
STATE_LIMIT = 10**6
MODULATOR_LIMIT = 14

Predicate = Callable[[Graph, frozenset], bool]


def _covers(g: Graph, a: frozenset) -> bool:
    return all(u in a or v in a for u, v in g.edges())


def _independent(g: Graph, a: frozenset) -> bool:
    return not any(u in a and v in a for u, v in g.edges())


def _dominated(g: Graph, a: frozenset) -> frozenset:
    out = set(a)
    for v in a:
        out |= g.neighbors(v)
    return frozenset(out)


def _dominating(g: Graph, a: frozenset) -> bool:
    return _dominated(g, a) == g.vertices


PREDICATES: dict[str, Predicate] = {
    "vc": _covers,
    "is": _independent,
    "ds": _dominating,
}


def _resolve(predicate: str | Predicate | object) -> Predicate:
    if isinstance(predicate, str):
        return PREDICATES[predicate]
    if hasattr(predicate, "predicate"):
        return predicate.predicate
    return predicate


def brute_count(g: Graph, k: int, predicate: str | Predicate | object) -> int:
    """Number of k-subsets A with (G, A) satisfying the predicate."""
    n = len(g)
    if k < 0 or k > n:
        return 0
    if math.comb(n, k) > COUNT_LIMIT:
        raise UnsupportedScale(f"C({n},{k}) subsets exceed the oracle limit")
    pred = _resolve(predicate)
    return sum(1 for a in itertools.combinations(g.order(), k) if pred(g, frozenset(a)))


def _tw_at_most(g: Graph, t: int) -> bool:
    if t == 0:
        return g.num_edges() == 0
    if t == 1:
        return is_forest(g)
    from .treedec import exact_treewidth

    return all(exact_treewidth(g.induced(c)) <= t for c in connected_components(g))


def brute_min_modulator(g: Graph, t: int) -> int:
    """Minimum |A| with tw(G - A) <= t, by subset enumeration."""
    if len(g) > MODULATOR_LIMIT:
        raise UnsupportedScale(f"brute modulator limited to {MODULATOR_LIMIT} vertices")
    for size in range(len(g) + 1):
        for a in itertools.combinations(g.order(), size):
            if _tw_at_most(g.without(a), t):
                return size
    return len(g)


def definitional_state(problem: str, g: Graph, boundary: Iterable[int], a: Iterable[int]) -> tuple:
    """State of (G, B, A) recomputed from the whole structure."""
    boundary = frozenset(boundary)
    a = frozenset(a)
    ann = boundary_index(g, boundary, a & boundary)
    if problem == "vc":
        return (ann, (_covers(g, a),))
    if problem == "is":
        return (ann, (_independent(g, a),))
    if problem == "ds":
        dom = _dominated(g, a)
        und = boundary_index(g, boundary, boundary - dom)
        return (ann, (und, (g.vertices - boundary) <= dom))
    raise ValueError(f"no definitional state for {problem!r}")


def brute_state_table(g: Graph, boundary: Iterable[int], problem: str, k: int) -> dict[tuple, tuple[int, ...]]:
    """(state, size) buckets over every annotation of size <= k."""
    if 2 ** len(g) > STATE_LIMIT:
        raise UnsupportedScale(f"2^{len(g)} annotations exceed the oracle limit")
    boundary = frozenset(boundary)
    rows: dict[tuple, list[int]] = defaultdict(lambda: [0] * (k + 1))
    order = g.order()
    for size in range(min(k, len(g)) + 1):
        for a in itertools.combinations(order, size):
            rows[definitional_state(problem, g, boundary, a)][size] += 1
    return {s: tuple(r) for s, r in rows.items()}


def brute_min_vertex_cover(g: Graph) -> int:
    return brute_min_modulator(g, 0)
