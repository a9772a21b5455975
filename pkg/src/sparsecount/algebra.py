"""Finite-state problem algebras.

An algebra stands in for the equivalence classes of a vertex-certified
property on b-structures. Its canonical `AlgebraState` is the class id: the
index set of annotated boundary vertices plus a small problem payload.

During dynamic programming the algebras work on *local* states keyed by
vertex ids (bag vertices); `canonical` turns a local state at the root bag
into an index-based `AlgebraState`.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Any, Hashable

from .graph import BStructure, Graph, boundary_index
from .treedec import (
    FORGET,
    INTRODUCE,
    JOIN,
    LEAF,
    NiceTreeDecomposition,
    TreeDecomposition,
    is_nice,
    make_nice,
    rooted_region_decomposition,
    validate,
)


@dataclass(frozen=True, order=True)
class AlgebraState:
    annotated_boundary: tuple[int, ...]
    payload: tuple

    def __str__(self) -> str:
        return f"A{set(self.annotated_boundary) or '{}'}:{self.payload}"


class ProblemAlgebra:
    """Interface shared by all algebras; subclasses fill in the semantics."""

    name: str = ""
    # (t, size factor) when every solution of size k certifies a t-treewidth
    # modulator of size factor*k; None when the property is not modulable
    modulability: tuple[int, int] | None = None
    has_transitions = True

    def predicate(self, g: Graph, a: frozenset[int]) -> bool:
        raise NotImplementedError

    # local DP transitions -------------------------------------------------
    def leaf(self, bag_graph: Graph, annotated: frozenset[int]) -> Hashable:
        raise NotImplementedError

    def introduce(self, state: Any, v: int, annotated: bool, bag_graph: Graph) -> Hashable:
        raise NotImplementedError

    def forget(self, state: Any, v: int) -> Hashable:
        raise NotImplementedError

    def join(self, s1: Any, s2: Any) -> Hashable | None:
        raise NotImplementedError

    def annotated_of(self, state: Any) -> frozenset[int]:
        return state[0]

    def canonical(self, state: Any, g: Graph, boundary: Iterable[int]) -> AlgebraState:
        raise NotImplementedError

    # center combination ---------------------------------------------------
    def combine_start(self, center: Graph, a0: frozenset[int]) -> Hashable | None:
        raise NotImplementedError

    def combine_step(self, acc: Any, boundary: Sequence[int], state: AlgebraState) -> Hashable | None:
        raise NotImplementedError

    def combine_accept(self, acc: Any) -> bool:
        raise NotImplementedError

    def combine(
        self,
        center: Graph,
        a0: Iterable[int],
        boundaries: Sequence[Sequence[int]],
        states: Sequence[AlgebraState],
    ) -> bool:
        """Whether the center glued with the protrusion states satisfies the property.

        Boundaries are label-ordered center vertices; a state whose annotated
        trace disagrees with a0 on its boundary makes the result False.
        """
        a0 = frozenset(a0)
        acc = self.combine_start(center, a0)
        for b, s in zip(boundaries, states):
            if acc is None:
                return False
            trace = tuple(i + 1 for i, v in enumerate(b) if v in a0)
            if trace != s.annotated_boundary:
                return False
            acc = self.combine_step(acc, b, s)
        return acc is not None and self.combine_accept(acc)

    # file encoding --------------------------------------------------------
    def encode_payload(self, payload: tuple) -> str:
        raise NotImplementedError

    def decode_payload(self, text: str) -> tuple:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"


def _flag(text: str) -> bool:
    if text not in ("0", "1"):
        raise ValueError(f"bad flag {text!r}")
    return text == "1"


def _parse_index_set(text: str) -> tuple[int, ...]:
    if not (text.startswith("{") and text.endswith("}")):
        raise ValueError(f"bad index set {text!r}")
    body = text[1:-1]
    if not body:
        return ()
    out = tuple(int(x) for x in body.split(","))
    if list(out) != sorted(set(out)) or any(i < 1 for i in out):
        raise ValueError(f"index set not canonical: {text!r}")
    return out


def _render_index_set(idx: Iterable[int]) -> str:
    return "{" + ",".join(str(i) for i in idx) + "}"


class _FlagAlgebra(ProblemAlgebra):
    """Payload is a single flag that holds iff no edge seen so far is bad."""

    flag_name = "ok"

    def bad_edge(self, u_in: bool, v_in: bool) -> bool:
        raise NotImplementedError

    def _edges_ok(self, bag_graph: Graph, a: frozenset[int]) -> bool:
        return not any(self.bad_edge(u in a, v in a) for u, v in bag_graph.edges())

    def predicate(self, g: Graph, a: frozenset[int]) -> bool:
        return self._edges_ok(g, frozenset(a))

    def leaf(self, bag_graph, annotated):
        return (annotated, self._edges_ok(bag_graph, annotated))

    def introduce(self, state, v, annotated, bag_graph):
        ann, ok = state
        if annotated:
            ann = ann | {v}
        if ok:
            ok = not any(self.bad_edge(annotated, u in ann) for u in bag_graph.neighbors(v))
        return (ann, ok)

    def forget(self, state, v):
        return (state[0] - {v}, state[1])

    def join(self, s1, s2):
        if s1[0] != s2[0]:
            return None
        return (s1[0], s1[1] and s2[1])

    def canonical(self, state, g, boundary):
        return AlgebraState(boundary_index(g, boundary, state[0]), (state[1],))

    def combine_start(self, center, a0):
        return True if self._edges_ok(center, a0) else None

    def combine_step(self, acc, boundary, state):
        return True if state.payload[0] else None

    def combine_accept(self, acc):
        return acc is True

    def encode_payload(self, payload):
        return f"{self.flag_name}={int(payload[0])}"

    def decode_payload(self, text):
        key, _, val = text.partition("=")
        if key != self.flag_name:
            raise ValueError(f"expected {self.flag_name}=, got {text!r}")
        return (_flag(val),)


class VertexCoverAlgebra(_FlagAlgebra):
    """A covers every edge. Payload: all edges seen so far are covered."""

    name = "vc"
    flag_name = "cov"
    modulability = (0, 1)

    def bad_edge(self, u_in, v_in):
        return not (u_in or v_in)


class IndependentSetAlgebra(_FlagAlgebra):
    """A spans no edge. Payload: no conflict seen so far."""

    name = "is"
    flag_name = "ok"

    def bad_edge(self, u_in, v_in):
        return u_in and v_in


class DominatingSetAlgebra(ProblemAlgebra):
    """Every vertex lies in N[A].

    Local state: (annotated bag vertices, undominated bag vertices,
    all forgotten vertices dominated).
    """

    name = "ds"

    def predicate(self, g, a):
        a = frozenset(a)
        dominated = set(a)
        for v in a:
            dominated |= g.neighbors(v)
        return dominated >= g.vertices

    def leaf(self, bag_graph, annotated):
        dominated = set(annotated)
        for v in annotated:
            dominated |= bag_graph.neighbors(v)
        return (annotated, bag_graph.vertices - dominated, True)

    def introduce(self, state, v, annotated, bag_graph):
        ann, und, ok = state
        ns = bag_graph.neighbors(v)
        if annotated:
            return (ann | {v}, und - ns, ok)
        if ns & ann:
            return (ann, und, ok)
        return (ann, und | {v}, ok)

    def forget(self, state, v):
        ann, und, ok = state
        return (ann - {v}, und - {v}, ok and v not in und)

    def join(self, s1, s2):
        if s1[0] != s2[0]:
            return None
        return (s1[0], s1[1] & s2[1], s1[2] and s2[2])

    def canonical(self, state, g, boundary):
        ann, und, ok = state
        return AlgebraState(boundary_index(g, boundary, ann), (boundary_index(g, boundary, und), ok))

    def combine_start(self, center, a0):
        dominated = set(a0)
        for v in a0:
            dominated |= center.neighbors(v)
        return frozenset(center.vertices - dominated)

    def combine_step(self, acc, boundary, state):
        und_idx, ok = state.payload
        if not ok:
            return None
        undominated_here = {boundary[i - 1] for i in und_idx}
        return acc - (frozenset(boundary) - undominated_here)

    def combine_accept(self, acc):
        return not acc

    def encode_payload(self, payload):
        return f"und={_render_index_set(payload[0])};int={int(payload[1])}"

    def decode_payload(self, text):
        left, sep, right = text.partition(";")
        if not sep or not left.startswith("und=") or not right.startswith("int="):
            raise ValueError(f"bad ds payload {text!r}")
        return (_parse_index_set(left[4:]), _flag(right[4:]))


_ALGEBRAS = {
    "vc": VertexCoverAlgebra,
    "is": IndependentSetAlgebra,
    "ds": DominatingSetAlgebra,
}


def vc_algebra() -> ProblemAlgebra:
    return VertexCoverAlgebra()


def is_algebra() -> ProblemAlgebra:
    return IndependentSetAlgebra()


def ds_algebra() -> ProblemAlgebra:
    return DominatingSetAlgebra()


def get_algebra(name: str) -> ProblemAlgebra:
    try:
        return _ALGEBRAS[name]()
    except KeyError:
        raise ValueError(f"unknown problem {name!r}; choose from {sorted(_ALGEBRAS)}") from None


def encode_state(alg: ProblemAlgebra, state: AlgebraState) -> str:
    """Whitespace-free canonical rendering, e.g. ``A{1,3}:cov=1``."""
    return f"A{_render_index_set(state.annotated_boundary)}:{alg.encode_payload(state.payload)}"


def decode_state(alg: ProblemAlgebra, text: str) -> AlgebraState:
    if not text.startswith("A{"):
        raise ValueError(f"bad state encoding {text!r}")
    head, sep, payload = text[1:].partition(":")
    if not sep:
        raise ValueError(f"bad state encoding {text!r}")
    return AlgebraState(_parse_index_set(head), alg.decode_payload(payload))


def fold_annotation(alg: ProblemAlgebra, g: Graph, nd: NiceTreeDecomposition, a: frozenset[int]):
    """Run the transitions for one fixed annotation; local state at the root."""
    states: dict[int, Any] = {}
    for q in nd.postorder():
        node = nd.nodes[q]
        if node.kind == LEAF:
            states[q] = alg.leaf(g.induced(node.bag), node.bag & a)
        elif node.kind == INTRODUCE:
            child = states.pop(node.children[0])
            states[q] = alg.introduce(child, node.vertex, node.vertex in a, g.induced(node.bag))
        elif node.kind == FORGET:
            states[q] = alg.forget(states.pop(node.children[0]), node.vertex)
        elif node.kind == JOIN:
            s1 = states.pop(node.children[0])
            s2 = states.pop(node.children[1])
            joined = alg.join(s1, s2)
            if joined is None:
                raise AssertionError("a single annotation cannot produce disagreeing traces")
            states[q] = joined
    return states[nd.root]


def state_of(
    alg: ProblemAlgebra,
    x: BStructure,
    d: TreeDecomposition | NiceTreeDecomposition | None = None,
) -> AlgebraState:
    """Class of a b-structure, computed by folding the DP over a nice decomposition."""
    if d is None:
        d = rooted_region_decomposition(x.graph, x.boundary)
    if isinstance(d, NiceTreeDecomposition):
        nd = d
        if not is_nice(nd) or not validate(nd.as_tree_decomposition(), x.graph):
            raise ValueError("invalid nice decomposition")
        if nd.root_bag != x.boundary:
            raise ValueError("decomposition must be rooted at the boundary")
    else:
        if not validate(d, x.graph):
            raise ValueError("invalid tree decomposition")
        if d.root is not None and d.bags[d.root] != x.boundary:
            raise ValueError("decomposition must be rooted at the boundary")
        nd = make_nice(d, x.graph, x.boundary)
    local = fold_annotation(alg, x.graph, nd, x.annotated)
    return alg.canonical(local, x.graph, x.boundary)
