"""Labeled simple graphs, boundaried structures and gluing.

Vertices are integer ids. Every graph carries an injective labeling
(vertex -> natural number) which fixes the order used to index boundary
vertices; the labeling survives induced subgraphs so indices stay stable.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from .errors import ParseError, UnsupportedScale


class Graph:
    """Immutable labeled simple undirected graph."""

    __slots__ = ("_adj", "_labels", "_names", "_order")

    def __init__(
        self,
        vertices: Iterable[int] = (),
        edges: Iterable[tuple[int, int]] = (),
        labels: Mapping[int, int] | None = None,
        names: Mapping[int, str] | None = None,
    ):
        adj: dict[int, set[int]] = {v: set() for v in vertices}
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop on vertex {u}")
            if u not in adj or v not in adj:
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside the vertex set")
            adj[u].add(v)
            adj[v].add(u)
        if labels is None:
            labels = {v: v for v in adj}
        else:
            labels = {v: labels[v] for v in adj}
        if len(set(labels.values())) != len(labels):
            raise ValueError("labels must be injective")
        if any(lab < 0 for lab in labels.values()):
            raise ValueError("labels must be natural numbers")
        self._adj = {v: frozenset(ns) for v, ns in adj.items()}
        self._labels = labels
        self._names = dict(names) if names else {}
        self._order = tuple(sorted(adj, key=labels.__getitem__))

    # -- basic accessors -------------------------------------------------

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self._adj)

    @property
    def labels(self) -> Mapping[int, int]:
        return self._labels

    @property
    def names(self) -> Mapping[int, str]:
        return self._names

    def name(self, v: int) -> str:
        return self._names.get(v, str(v))

    def order(self) -> tuple[int, ...]:
        """Vertices sorted by label."""
        return self._order

    def label(self, v: int) -> int:
        return self._labels[v]

    def sort(self, vs: Iterable[int]) -> list[int]:
        return sorted(vs, key=self._labels.__getitem__)

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj.get(u, ())

    def edges(self) -> list[tuple[int, int]]:
        """Edges as (u, v) pairs with label(u) < label(v), in label order."""
        out = []
        for u in self._order:
            lu = self._labels[u]
            for v in self.sort(self._adj[u]):
                if self._labels[v] > lu:
                    out.append((u, v))
        return out

    def num_vertices(self) -> int:
        return len(self._adj)

    def num_edges(self) -> int:
        return sum(len(ns) for ns in self._adj.values()) // 2

    def __len__(self) -> int:
        return len(self._adj)

    def __contains__(self, v: object) -> bool:
        return v in self._adj

    def __iter__(self):
        return iter(self._order)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._adj == other._adj and self._labels == other._labels

    def __hash__(self) -> int:
        return hash((frozenset(self._labels.items()), frozenset(self._adj.items())))

    def __repr__(self) -> str:
        return f"Graph(n={len(self)}, m={self.num_edges()})"

    # -- derived graphs --------------------------------------------------

    def _check_subset(self, s: Iterable[int]) -> frozenset[int]:
        s = frozenset(s)
        if not s <= self._adj.keys():
            raise ValueError(f"vertices {sorted(s - self._adj.keys())} are not in the graph")
        return s

    def induced(self, s: Iterable[int]) -> Graph:
        s = self._check_subset(s)
        return Graph(
            s,
            ((u, v) for u in s for v in self._adj[u] if v in s and u < v),
            labels=self._labels,
            names={v: self._names[v] for v in s if v in self._names},
        )

    def without(self, s: Iterable[int]) -> Graph:
        s = frozenset(s)
        return self.induced(self._adj.keys() - s)

    def with_edges(self, extra: Iterable[tuple[int, int]]) -> Graph:
        return Graph(self._adj, itertools.chain(self.edges(), extra), self._labels, self._names)

    def relabeled(self) -> Graph:
        """Copy with vertices renamed 0..n-1 in label order (labels = new ids)."""
        pos = {v: i for i, v in enumerate(self._order)}
        return Graph(
            range(len(pos)),
            ((pos[u], pos[v]) for u, v in self.edges()),
            names={pos[v]: n for v, n in self._names.items()},
        )


def induced_subgraph(g: Graph, s: Iterable[int]) -> Graph:
    return g.induced(s)


def neighborhood(g: Graph, s: Iterable[int]) -> frozenset[int]:
    """N_G(S): neighbours of S outside S."""
    s = g._check_subset(s)
    out: set[int] = set()
    for v in s:
        out |= g.neighbors(v)
    return frozenset(out - s)


def closed_neighborhood(g: Graph, s: Iterable[int]) -> frozenset[int]:
    s = frozenset(s)
    return s | neighborhood(g, s)


def boundary_of(g: Graph, s: Iterable[int]) -> frozenset[int]:
    """Vertices of S that have a neighbour outside S."""
    s = g._check_subset(s)
    return frozenset(v for v in s if not g.neighbors(v) <= s)


def connected_components(g: Graph) -> list[frozenset[int]]:
    """Components ordered by their minimum label."""
    seen: set[int] = set()
    comps = []
    for v in g.order():
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for w in g.neighbors(u):
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


def is_forest(g: Graph) -> bool:
    return g.num_edges() == len(g) - len(connected_components(g))


# -- edge-list ingestion ---------------------------------------------------


def parse_edge_list(text: str | bytes) -> Graph:
    """Parse whitespace-separated edge lines; a single name declares a vertex.

    Vertex labels follow first appearance of the names.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    ids: dict[str, int] = {}
    edges: list[tuple[int, int]] = []
    seen_edges: set[frozenset[int]] = set()

    def vid(name: str) -> int:
        if name not in ids:
            ids[name] = len(ids)
        return ids[name]

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) == 1:
            vid(parts[0])
        elif len(parts) == 2:
            a, b = parts
            if a == b:
                raise ParseError(f"self-loop on {a!r}", lineno)
            u, v = vid(a), vid(b)
            key = frozenset((u, v))
            if key in seen_edges:
                raise ParseError(f"duplicate edge {a} {b}", lineno)
            seen_edges.add(key)
            edges.append((u, v))
        else:
            raise ParseError(f"expected one or two vertex names, got {len(parts)} fields", lineno)
    return Graph(ids.values(), edges, names={i: n for n, i in ids.items()})


def format_edge_list(g: Graph) -> str:
    lines = [f"{g.name(u)} {g.name(v)}" for u, v in g.edges()]
    touched = {v for e in g.edges() for v in e}
    lines += [g.name(v) for v in g.order() if v not in touched]
    return "\n".join(lines) + ("\n" if lines else "")


# -- boundaried structures ---------------------------------------------------


@dataclass(frozen=True)
class BStructure:
    """A graph with a boundary B and an annotated set A (both vertex subsets)."""

    graph: Graph
    boundary: frozenset[int]
    annotated: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "boundary", frozenset(self.boundary))
        object.__setattr__(self, "annotated", frozenset(self.annotated))
        if not self.boundary <= self.graph.vertices:
            raise ValueError("boundary must be a subset of the vertices")
        if not self.annotated <= self.graph.vertices:
            raise ValueError("annotated set must be a subset of the vertices")

    @property
    def boundary_order(self) -> tuple[int, ...]:
        return tuple(self.graph.sort(self.boundary))

    @property
    def interior(self) -> frozenset[int]:
        return self.graph.vertices - self.boundary

    def index_of(self, s: Iterable[int]) -> tuple[int, ...]:
        return boundary_index(self.graph, self.boundary, s)

    def annotated_boundary_index(self) -> tuple[int, ...]:
        return self.index_of(self.annotated & self.boundary)

    def boundary_graph_signature(self) -> tuple[tuple[int, int], ...]:
        return boundary_signature(self.graph, self.boundary)

    def with_annotation(self, a: Iterable[int]) -> BStructure:
        return BStructure(self.graph, self.boundary, frozenset(a))


def BGraph(graph: Graph, boundary: Iterable[int]) -> BStructure:
    """A b-graph: a b-structure whose annotated set is the whole vertex set."""
    return BStructure(graph, frozenset(boundary), graph.vertices)


def is_bgraph(x: BStructure) -> bool:
    return x.annotated == x.graph.vertices


def boundary_index(g: Graph, boundary: Iterable[int], s: Iterable[int]) -> tuple[int, ...]:
    """1-based positions of S inside the label-sorted boundary."""
    order = g.sort(boundary)
    pos = {v: i + 1 for i, v in enumerate(order)}
    return tuple(sorted(pos[v] for v in s))


def boundary_signature(g: Graph, boundary: Iterable[int]) -> tuple[tuple[int, int], ...]:
    """Edges of G[B] written over boundary indices."""
    order = g.sort(boundary)
    pos = {v: i + 1 for i, v in enumerate(order)}
    sig = []
    for u in order:
        for v in g.neighbors(u):
            if v in pos and pos[u] < pos[v]:
                sig.append((pos[u], pos[v]))
    return tuple(sorted(sig))


def compatible(x: BStructure, y: BStructure) -> bool:
    return (
        len(x.boundary) == len(y.boundary)
        and x.annotated_boundary_index() == y.annotated_boundary_index()
        and x.boundary_graph_signature() == y.boundary_graph_signature()
    )


def glue_with_map(x: BStructure, y: BStructure) -> tuple[Graph, frozenset[int], dict[int, int]]:
    """Glue y onto x; also return where each vertex of y ended up.

    x keeps its vertex ids and labels. Interior vertices of y receive fresh
    ids and labels above those of x, in y's label order.
    """
    if not compatible(x, y):
        raise ValueError("b-structures are not compatible")
    gx, gy = x.graph, y.graph
    mapping = dict(zip(y.boundary_order, x.boundary_order))
    next_id = max(gx.vertices, default=-1) + 1
    next_label = max(gx.labels.values(), default=-1) + 1
    labels = dict(gx.labels)
    names = dict(gx.names)
    for v in gy.order():
        if v in mapping:
            continue
        mapping[v] = next_id
        labels[next_id] = next_label
        if v in gy.names:
            names[next_id] = gy.names[v]
        next_id += 1
        next_label += 1
    edges = set(gx.edges())
    for u, v in gy.edges():
        a, b = mapping[u], mapping[v]
        if (b, a) not in edges:
            edges.add((a, b))
    graph = Graph(labels.keys(), edges, labels=labels, names=names)
    annotated = x.annotated | frozenset(mapping[v] for v in y.annotated)
    return graph, annotated, mapping


def glue(x: BStructure, y: BStructure) -> tuple[Graph, frozenset[int]]:
    graph, annotated, _ = glue_with_map(x, y)
    return graph, annotated


# -- topological minors (oracle scale) ----------------------------------------

_TM_MAX_H = 6
_TM_MAX_G = 20


def contains_topological_minor(g: Graph, h: Graph) -> bool:
    """Whether some subdivision of h is a subgraph of g.

    Exhaustive: branch vertices are mapped injectively (degree permitting),
    then h's edges are routed one at a time along internally disjoint paths.
    """
    if len(h) > _TM_MAX_H or len(g) > _TM_MAX_G:
        raise UnsupportedScale(
            f"topological minor check limited to |V(h)| <= {_TM_MAX_H}, |V(g)| <= {_TM_MAX_G}"
        )
    if len(h) > len(g) or h.num_edges() > g.num_edges():
        return False
    hv = sorted(h.vertices, key=lambda v: -h.degree(v))
    h_edges = h.edges()
    gv = g.order()

    def route(i: int, used: set[int]) -> bool:
        if i == len(h_edges):
            return True
        a, b = phi[h_edges[i][0]], phi[h_edges[i][1]]
        # depth-first over simple a-b paths avoiding used vertices
        stack = [(a, (a,))]
        while stack:
            u, path = stack.pop()
            for w in g.neighbors(u):
                if w == b:
                    interior = path[1:]
                    used.update(interior)
                    if route(i + 1, used):
                        return True
                    used.difference_update(interior)
                elif w not in used and w not in path:
                    stack.append((w, path + (w,)))
        return False

    phi: dict[int, int] = {}

    def assign(i: int) -> bool:
        if i == len(hv):
            return route(0, set(phi.values()))
        x = hv[i]
        for v in gv:
            if v in phi.values() or g.degree(v) < h.degree(x):
                continue
            phi[x] = v
            if assign(i + 1):
                return True
            del phi[x]
        return False

    return assign(0)
