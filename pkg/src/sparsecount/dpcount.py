"""Per-state solution counts of a b-graph by DP over a nice tree decomposition.

For a b-graph G with boundary B, the table maps (state R, size k') to the
number of annotations A of size k' whose b-structure (G, B, A) is in class R.
Counts are exact Python integers; tables store coefficient lists indexed by k'.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

from .algebra import AlgebraState, ProblemAlgebra
from .graph import BStructure, Graph
from .treedec import FORGET, INTRODUCE, JOIN, LEAF, NiceTreeDecomposition, is_nice, validate

Poly = list[int]


def poly_add_into(acc: Poly, p: Sequence[int]) -> None:
    for i, c in enumerate(p):
        if c:
            acc[i] += c


def poly_mul(p: Sequence[int], q: Sequence[int], cap: int) -> Poly:
    """Product truncated to degree cap."""
    out = [0] * (cap + 1)
    for i, a in enumerate(p):
        if not a or i > cap:
            continue
        for j, b in enumerate(q[: cap - i + 1]):
            if b:
                out[i + j] += a * b
    return out


def poly_shift(p: Sequence[int], by: int, cap: int) -> Poly:
    """Multiply by x**by (by may be negative), truncated to degree cap."""
    out = [0] * (cap + 1)
    for i, c in enumerate(p):
        j = i + by
        if c and 0 <= j <= cap:
            out[j] = c
    return out


@dataclass(frozen=True)
class CountTable:
    entries: Mapping[AlgebraState, tuple[int, ...]]
    boundary: tuple[int, ...]
    k_max: int

    def __getitem__(self, key: tuple[AlgebraState, int]) -> int:
        state, k = key
        row = self.entries.get(state)
        if row is None or not 0 <= k <= self.k_max:
            return 0
        return row[k]

    def states(self) -> list[AlgebraState]:
        return sorted(self.entries)

    def stored_values(self) -> int:
        return sum(1 for row in self.entries.values() for c in row if c)

    def total(self, k: int) -> int:
        return sum(row[k] for row in self.entries.values())

    def as_plain(self) -> dict[tuple[tuple[int, ...], tuple], tuple[int, ...]]:
        return {(s.annotated_boundary, s.payload): row for s, row in self.entries.items()}


def _freeze(table: Mapping[AlgebraState, Poly]) -> dict[AlgebraState, tuple[int, ...]]:
    return {s: tuple(row) for s, row in sorted(table.items()) if any(row)}


def count_table(bg: BStructure, nd: NiceTreeDecomposition, alg: ProblemAlgebra, k: int) -> CountTable:
    """#sol for every reachable state and every size 0..k."""
    if k < 0:
        raise ValueError("k must be non-negative")
    g = bg.graph
    if nd.root_bag != bg.boundary:
        raise ValueError("root bag must equal the boundary")
    if not is_nice(nd) or not validate(nd.as_tree_decomposition(), g):
        raise ValueError("not a valid nice tree decomposition of the b-graph")

    tables: dict[int, dict] = {}
    bag_graphs: dict[frozenset[int], Graph] = {}

    def bag_graph(bag: frozenset[int]) -> Graph:
        if bag not in bag_graphs:
            bag_graphs[bag] = g.induced(bag)
        return bag_graphs[bag]

    for q in nd.postorder():
        node = nd.nodes[q]
        out: dict = defaultdict(lambda: [0] * (k + 1))
        if node.kind == LEAF:
            # every annotation of the leaf bag contributes one at its size
            bag = sorted(node.bag)
            bg_leaf = bag_graph(node.bag)
            for size in range(min(len(bag), k) + 1):
                for ann in itertools.combinations(bag, size):
                    out[alg.leaf(bg_leaf, frozenset(ann))][size] += 1
        elif node.kind == INTRODUCE:
            child = tables.pop(node.children[0])
            v = node.vertex
            bgx = bag_graph(node.bag)
            for s, p in child.items():
                poly_add_into(out[alg.introduce(s, v, False, bgx)], p)
                poly_add_into(out[alg.introduce(s, v, True, bgx)], poly_shift(p, 1, k))
        elif node.kind == FORGET:
            child = tables.pop(node.children[0])
            for s, p in child.items():
                poly_add_into(out[alg.forget(s, node.vertex)], p)
        elif node.kind == JOIN:
            left = tables.pop(node.children[0])
            right = tables.pop(node.children[1])
            by_trace: dict[frozenset[int], list] = defaultdict(list)
            for s2, p2 in right.items():
                by_trace[alg.annotated_of(s2)].append((s2, p2))
            for s1, p1 in left.items():
                ann = alg.annotated_of(s1)
                r = len(ann)
                for s2, p2 in by_trace.get(ann, ()):
                    s = alg.join(s1, s2)
                    # annotated bag vertices are counted on both sides
                    prod = poly_mul(p1, p2, k + r)
                    poly_add_into(out[s], prod[r:])
        else:
            raise ValueError(f"unknown node kind {node.kind!r}")
        tables[q] = {s: p for s, p in out.items() if any(p)}

    root_table = tables[nd.root]
    canon: dict[AlgebraState, Poly] = defaultdict(lambda: [0] * (k + 1))
    for s, p in root_table.items():
        poly_add_into(canon[alg.canonical(s, g, bg.boundary)], p)
    return CountTable(_freeze(canon), tuple(g.sort(bg.boundary)), k)


def table_polynomial(tbl: CountTable, state: AlgebraState, shift: int, degree_cap: int) -> Poly:
    """Coefficient j is tbl[state, j + shift], for j in 0..degree_cap."""
    return [tbl[state, j + shift] for j in range(degree_cap + 1)]


def table_from_entries(entries: Iterable[tuple[AlgebraState, int, int]], boundary: Sequence[int], k: int) -> CountTable:
    rows: dict[AlgebraState, Poly] = defaultdict(lambda: [0] * (k + 1))
    for s, kk, c in entries:
        rows[s][kk] += c
    return CountTable(_freeze(rows), tuple(boundary), k)
