"""Approximate t-treewidth modulators by iterated region replacement.

While the working graph is larger than c*k, a region Y with a small
boundary, bounded size and interior treewidth <= t is located and replaced
by a strictly smaller b-graph with the same type vector (per annotation size
up to d, the set of reachable classes). A modulator of the final graph is
lifted back step by step.

Null verdicts are only reported when certified: a matching larger than k
(t = 0), or an exact bounded search that finds no modulator of size <= k.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field

from .algebra import AlgebraState, ProblemAlgebra, fold_annotation, vc_algebra
from .config import Config
from .dpcount import count_table
from .errors import DecompositionFailure, InvariantBreach, PipelineStalled
from .graph import (
    BGraph,
    BStructure,
    Graph,
    boundary_index,
    boundary_of,
    boundary_signature,
    connected_components,
    glue_with_map,
    is_forest,
    neighborhood,
)
from .treedec import NiceTreeDecomposition, NotBounded, decompose_bounded, make_nice, rooted_region_decomposition

log = logging.getLogger(__name__)

CERTIFY_LIMIT = 200_000


# -- the modulator property as an algebra -------------------------------------


def is_t_modulator(g: Graph, a: Iterable[int], t: int) -> bool:
    rest = g.without(a)
    if t == 0:
        return rest.num_edges() == 0
    if t == 1:
        return is_forest(rest)
    return not isinstance(decompose_bounded(rest, t), NotBounded)


class TreewidthModulatorAlgebra(ProblemAlgebra):
    """tw(G - A) <= t for t >= 1; states computed from the whole (small) structure.

    For t = 1 the class of (G, B, A) is captured by: acyclicity of G - A, and
    which non-annotated boundary vertices are connected in G - A without the
    boundary edges. For larger t the payload is the exact structure of G - A
    over boundary indices, which is sound but never merges distinct regions.
    """

    has_transitions = False

    def __init__(self, t: int):
        if t < 1:
            raise ValueError("use the vertex cover algebra for t = 0")
        self.t = t
        self.name = f"tw{t}"
        self.shrinkable = t == 1

    def predicate(self, g, a):
        return is_t_modulator(g, a, self.t)

    def structure_state(self, g: Graph, boundary: frozenset[int], a: frozenset[int]) -> AlgebraState:
        ann = boundary_index(g, boundary, a & boundary)
        rest = g.without(a)
        live = boundary - a
        if self.t == 1:
            no_b_edges = Graph(
                rest.vertices,
                [(u, v) for u, v in rest.edges() if not (u in live and v in live)],
                rest.labels,
            )
            blocks = []
            for comp in connected_components(no_b_edges):
                hit = comp & live
                if hit:
                    blocks.append(boundary_index(g, boundary, hit))
            return AlgebraState(ann, (is_forest(rest), tuple(sorted(blocks))))
        pos = {v: ("b", i) for v, i in zip(g.sort(boundary), itertools.count(1))}
        for i, v in enumerate(rest.sort(rest.vertices - boundary)):
            pos[v] = ("i", i)
        edges = tuple(sorted(tuple(sorted((pos[u], pos[v]))) for u, v in rest.edges()))
        return AlgebraState(ann, (len(rest) - len(live), edges))


def modulator_algebra(t: int) -> ProblemAlgebra:
    return vc_algebra() if t == 0 else TreewidthModulatorAlgebra(t)


def _find(parent: list[int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


class _ForestStates:
    """Same states as TreewidthModulatorAlgebra(1).structure_state, via union-find."""

    def __init__(self, bg: BStructure):
        g = bg.graph
        order = g.order()
        self.pos = {v: i for i, v in enumerate(order)}
        border = g.sort(bg.boundary)
        self.bidx = {self.pos[v]: i + 1 for i, v in enumerate(border)}
        self.edges = [(self.pos[u], self.pos[v]) for u, v in g.edges()]
        self.n = len(order)

    def __call__(self, a: frozenset[int]) -> AlgebraState:
        ann = frozenset(self.pos[v] for v in a)
        acyclic = True
        full = list(range(self.n))
        cut = list(range(self.n))
        for u, v in self.edges:
            if u in ann or v in ann:
                continue
            ru, rv = _find(full, u), _find(full, v)
            if ru == rv:
                acyclic = False
            else:
                full[ru] = rv
            if u in self.bidx and v in self.bidx:
                continue
            cu, cv = _find(cut, u), _find(cut, v)
            if cu != cv:
                cut[cu] = cv
        blocks: dict[int, list[int]] = {}
        for p, i in self.bidx.items():
            if p not in ann:
                blocks.setdefault(_find(cut, p), []).append(i)
        ann_idx = tuple(sorted(self.bidx[p] for p in ann if p in self.bidx))
        return AlgebraState(ann_idx, (acyclic, tuple(sorted(tuple(sorted(b)) for b in blocks.values()))))


class _RegionStates:
    """Class lookup for annotations of one fixed b-graph."""

    def __init__(self, alg: ProblemAlgebra, bg: BStructure):
        self.alg = alg
        self.bg = bg
        self.nd: NiceTreeDecomposition | None = None
        self.fast = None
        if alg.has_transitions:
            g = bg.graph
            self.nd = make_nice(rooted_region_decomposition(g, bg.boundary), g, bg.boundary)
        elif getattr(alg, "t", None) == 1:
            self.fast = _ForestStates(bg)

    def __call__(self, a: frozenset[int]) -> AlgebraState:
        g, b = self.bg.graph, self.bg.boundary
        if self.nd is not None:
            return self.alg.canonical(fold_annotation(self.alg, g, self.nd, a), g, b)
        if self.fast is not None:
            return self.fast(a)
        return self.alg.structure_state(g, b, a)


# -- type vectors and the catalog ---------------------------------------------


@dataclass(frozen=True)
class TypeVector:
    """Per size i in 0..d, the classes reachable by annotations of size i."""

    boundary_size: int
    boundary_edges: tuple[tuple[int, int], ...]
    types: tuple[frozenset[AlgebraState], ...]


def type_vector(bg: BStructure, alg: ProblemAlgebra, d: int) -> TypeVector:
    if len(bg.boundary) > d:
        raise ValueError("boundary larger than d")
    g = bg.graph
    sig = boundary_signature(g, bg.boundary)
    if alg.has_transitions:
        nd = make_nice(rooted_region_decomposition(g, bg.boundary), g, bg.boundary)
        tbl = count_table(BGraph(g, bg.boundary), nd, alg, d)
        types = tuple(frozenset(s for s, row in tbl.entries.items() if row[i]) for i in range(d + 1))
        return TypeVector(len(bg.boundary), sig, types)
    states = _RegionStates(alg, bg)
    sets: list[set[AlgebraState]] = [set() for _ in range(d + 1)]
    for i in range(min(d, len(g)) + 1):
        for a in itertools.combinations(g.order(), i):
            sets[i].add(states(frozenset(a)))
    return TypeVector(len(bg.boundary), sig, tuple(frozenset(s) for s in sets))


def _delete(bg: BStructure, v: int) -> BStructure:
    return BGraph(bg.graph.without([v]), bg.boundary)


def _contract(bg: BStructure, u: int, v: int) -> BStructure:
    g = bg.graph
    rest = g.without([v])
    extra = [(u, w) for w in g.neighbors(v) if w != u and not g.has_edge(u, w)]
    return BGraph(rest.with_edges(extra), bg.boundary)


def _shrink_candidates(bg: BStructure, contract: bool) -> Iterator[BStructure]:
    g = bg.graph
    interior = g.sort(bg.interior)
    seen: set[tuple] = set()
    for v in interior:
        # twins are interchangeable, so one deletion per twin class suffices
        key = (g.neighbors(v) - {v}, g.neighbors(v) | {v})
        open_key, closed_key = ("o", key[0]), ("c", key[1])
        if open_key in seen and closed_key in seen:
            continue
        seen.add(open_key)
        seen.add(closed_key)
        yield _delete(bg, v)
    if contract:
        for u, v in g.edges():
            if u in bg.interior and v in bg.interior:
                yield _contract(bg, u, v)


@dataclass
class CatalogEntry:
    representative: BStructure
    nice: NiceTreeDecomposition


@dataclass
class Catalog:
    """Smallest known b-graph (at most b vertices) per type vector, grown lazily.

    A new type vector is seeded by shrinking the region that exhibited it;
    type vectors whose region cannot be shrunk to b vertices are remembered
    and skipped.
    """

    alg: ProblemAlgebra
    d: int
    b: int
    entries: dict[TypeVector, CatalogEntry] = field(default_factory=dict)
    unshrinkable: set[TypeVector] = field(default_factory=set)

    def _shrink(self, bg: BStructure, tv: TypeVector) -> BStructure:
        if not getattr(self.alg, "shrinkable", True):
            return bg
        contract = not self.alg.has_transitions
        current = bg
        improved = True
        while improved and len(current.graph) > 0:
            improved = False
            for cand in _shrink_candidates(current, contract):
                if type_vector(cand, self.alg, self.d) == tv:
                    current = cand
                    improved = True
                    break
        return current

    def representative(self, bg: BStructure, tv: TypeVector | None = None) -> BStructure | None:
        if tv is None:
            tv = type_vector(bg, self.alg, self.d)
        entry = self.entries.get(tv)
        if entry is not None and len(entry.representative.graph) <= len(bg.graph):
            return entry.representative
        if entry is None and tv in self.unshrinkable:
            return None
        rep = self._shrink(bg, tv)
        if len(rep.graph) > self.b:
            if entry is None:
                self.unshrinkable.add(tv)
            return entry.representative if entry else None
        if entry is None or len(rep.graph) < len(entry.representative.graph):
            g = rep.graph
            nice = make_nice(rooted_region_decomposition(g, rep.boundary), g, rep.boundary)
            self.entries[tv] = CatalogEntry(rep, nice)
        return self.entries[tv].representative

    def __len__(self) -> int:
        return len(self.entries)


# -- region search ------------------------------------------------------------


def is_region(g: Graph, y: frozenset[int], t: int, d: int, b: int) -> bool:
    if not b < len(y) <= 2 * b:
        return False
    bd = boundary_of(g, y)
    if len(bd) > d:
        return False
    inner = g.induced(y - bd)
    return is_t_modulator(inner, (), t)


def _greedy_regions(g: Graph, t: int, d: int, b: int) -> Iterator[frozenset[int]]:
    for start in g.order():
        y = {start}
        while len(y) < 2 * b:
            frontier = neighborhood(g, y)
            if not frontier:
                break

            def cost(u: int) -> tuple:
                y2 = y | {u}
                out = sum(1 for w in y2 if not g.neighbors(w) <= y2)
                return (out, -len(g.neighbors(u) & y), g.label(u))

            y.add(min(frontier, key=cost))
            if len(y) > b:
                fy = frozenset(y)
                if is_region(g, fy, t, d, b):
                    yield fy


def _connected_subsets(g: Graph, lo: int, hi: int, budget: int) -> Iterator[frozenset[int] | None]:
    """Connected vertex sets with lo <= size <= hi; yields None once the budget runs out."""
    rank = {v: i for i, v in enumerate(g.order())}
    visited = 0
    for v in g.order():
        stack = [(frozenset([v]), frozenset(w for w in g.neighbors(v) if rank[w] > rank[v]))]
        while stack:
            sub, ext = stack.pop()
            visited += 1
            if visited > budget:
                yield None
                return
            if lo <= len(sub):
                yield sub
            if len(sub) == hi:
                continue
            ext_list = sorted(ext, key=rank.__getitem__)
            for i, w in enumerate(ext_list):
                new_ext = frozenset(ext_list[i + 1 :]) | frozenset(
                    x for x in g.neighbors(w) if rank[x] > rank[v] and x not in sub and x not in ext
                )
                stack.append((sub | {w}, new_ext))


def candidate_regions(
    g: Graph, t: int, d: int, b: int, exhaustive_budget: int = 0
) -> Iterator[frozenset[int]]:
    """Valid regions: greedy growth from every vertex, then (optionally) exhaustive search."""
    seen: set[frozenset[int]] = set()
    for y in _greedy_regions(g, t, d, b):
        if y not in seen:
            seen.add(y)
            yield y
    if exhaustive_budget:
        for y in _connected_subsets(g, b + 1, 2 * b, exhaustive_budget):
            if y is None:
                return
            if y not in seen and is_region(g, y, t, d, b):
                seen.add(y)
                yield y


def find_replaceable_region(g: Graph, t: int, d: int, b: int, exhaustive_budget: int = 200_000) -> frozenset[int] | None:
    """A set Y with |boundary| <= d, b < |Y| <= 2b and interior treewidth <= t, or None."""
    if d < 1 or b < 1:
        raise ValueError("d and b must be positive")
    if len(g) <= b:
        return None
    return next(candidate_regions(g, t, d, b, exhaustive_budget), None)


# -- replacement trace and lifting --------------------------------------------


@dataclass(frozen=True)
class ReplacementStep:
    region: frozenset[int]
    boundary: tuple[int, ...]
    region_graph: Graph
    representative: BStructure
    placed: Mapping[int, int]  # representative vertex -> vertex of the next graph


@dataclass
class ReplacementTrace:
    t: int
    d: int
    steps: list[ReplacementStep] = field(default_factory=list, repr=False)

    def __len__(self) -> int:
        return len(self.steps)


def replace_region(g: Graph, y: frozenset[int], rep: BStructure) -> tuple[Graph, ReplacementStep]:
    bd = boundary_of(g, y)
    outside = BStructure(g.without(y - bd), bd)
    inside = BStructure(rep.graph, rep.boundary)
    new_graph, _, placed = glue_with_map(outside, inside)
    step = ReplacementStep(y, tuple(g.sort(bd)), g.induced(y), rep, placed)
    return new_graph, step


def lift_solution(trace: ReplacementTrace, a: Iterable[int]) -> frozenset[int]:
    """Carry a modulator of the last graph back to the original graph."""
    alg = modulator_algebra(trace.t)
    a = frozenset(a)
    for step in reversed(trace.steps):
        rep = step.representative
        back = {w: v for v, w in step.placed.items()}
        image = frozenset(step.placed.values())
        local = frozenset(back[w] for w in a & image)
        if len(local) > trace.d:
            # swapping the part inside the representative for its boundary
            # keeps a modulator and does not grow it
            local = frozenset(rep.boundary)
        target = _RegionStates(alg, rep)(local)
        region = BGraph(step.region_graph, step.boundary)
        states = _RegionStates(alg, region)
        order = step.region_graph.sort(region.interior)
        ann_b = frozenset(step.boundary[i - 1] for i in target.annotated_boundary)
        need = len(local) - len(ann_b)
        found = None
        if need >= 0:
            for extra in itertools.combinations(order, need):
                cand = ann_b | frozenset(extra)
                if states(cand) == target:
                    found = cand
                    break
        if found is None:
            raise InvariantBreach("no lift with matching class; type vectors disagree")
        a = (a - image) | found
    return a


# -- exact certificates ---------------------------------------------------------


def vc_modulator_2approx(g: Graph) -> frozenset[int]:
    """Endpoints of a greedy maximal matching (label order)."""
    cover: set[int] = set()
    for u, v in g.edges():
        if u not in cover and v not in cover:
            cover.update((u, v))
    return frozenset(cover)


def matching_size(g: Graph) -> int:
    return len(vc_modulator_2approx(g)) // 2


def vertex_cover_at_most(g: Graph, k: int) -> frozenset[int] | None:
    """Bounded search tree: a vertex cover of size <= k, or None."""
    adj = {v: set(g.neighbors(v)) for v in g.vertices if g.neighbors(v)}

    def rec(adj: dict[int, set[int]], k: int) -> list[int] | None:
        if not adj:
            return []
        if k <= 0:
            return None
        m = sum(len(ns) for ns in adj.values()) // 2
        maxdeg = max(len(ns) for ns in adj.values())
        if m > k * maxdeg:
            return None
        v = max(sorted(adj, key=g.label), key=lambda x: len(adj[x]))
        for take in ([v], sorted(adj[v], key=g.label)):
            if len(take) > k:
                continue
            sub = {u: ns - set(take) for u, ns in adj.items() if u not in take}
            sub = {u: ns for u, ns in sub.items() if ns}
            got = rec(sub, k - len(take))
            if got is not None:
                return take + got
        return None

    found = rec(adj, k)
    return None if found is None else frozenset(found)


def certify_no_modulator(g: Graph, t: int, k: int) -> bool | None:
    """True if no t-modulator of size <= k exists, False if one does, None if undecided."""
    if t == 0:
        if matching_size(g) > k:
            return True
        return vertex_cover_at_most(g, k) is None
    n = len(g)
    if sum(math.comb(n, i) for i in range(min(k, n) + 1)) > CERTIFY_LIMIT:
        return None
    if t >= 2 and n > 14:
        return None
    for size in range(min(k, n) + 1):
        for a in itertools.combinations(g.order(), size):
            if is_t_modulator(g, a, t):
                return False
    return True


def minimalize(g: Graph, a: Iterable[int], t: int) -> frozenset[int]:
    """Drop vertices (label order) while the set stays a t-modulator."""
    a = set(a)
    for v in g.sort(a):
        if t == 0:
            ok = all(w in a for w in g.neighbors(v))
        else:
            ok = is_t_modulator(g, a - {v}, t)
        if ok:
            a.discard(v)
    return frozenset(a)


# -- the approximation loop -----------------------------------------------------


@dataclass
class ModulatorResult:
    modulator: frozenset[int]
    trace: ReplacementTrace
    final_size: int
    catalog_size: int
    bound: int

    def __iter__(self):
        return iter(sorted(self.modulator))


@dataclass(frozen=True)
class NoSmallModulator:
    k: int
    t: int
    reason: str

    def __bool__(self) -> bool:
        return False


def approx_modulator(g: Graph, k: int, t: int, cfg: Config | None = None) -> ModulatorResult | NoSmallModulator:
    """A t-treewidth modulator of size <= c*k, or a certified NoSmallModulator.

    Raises PipelineStalled when neither is reachable.
    """
    cfg = cfg or Config()
    c, d, b = cfg.c, cfg.d, cfg.b
    bound = c * k
    if t == 0 and matching_size(g) > k:
        return NoSmallModulator(k, t, f"matching of size {matching_size(g)} exceeds k")
    alg = modulator_algebra(t)
    catalog = Catalog(alg, d, b)
    trace = ReplacementTrace(t, d)
    current = g
    while len(current) > bound:
        replaced = False
        attempts = 0
        for y in candidate_regions(current, t, d, b, cfg.region_budget):
            attempts += 1
            rep = catalog.representative(BGraph(current.induced(y), boundary_of(current, y)))
            if rep is not None and len(rep.graph) < len(y):
                current, step = replace_region(current, y, rep)
                trace.steps.append(step)
                replaced = True
                break
            if attempts >= cfg.region_attempts:
                break
        if not replaced:
            break
    log.debug("replacement loop: %d steps, %d -> %d vertices", len(trace), len(g), len(current))

    if t == 0:
        a_q = minimalize(current, vc_modulator_2approx(current), 0)
    else:
        a_q = minimalize(current, current.vertices, t)
    if len(current) < len(a_q):
        a_q = current.vertices
    lifted = lift_solution(trace, a_q)
    if not is_t_modulator(g, lifted, t):
        if t >= 2:
            raise DecompositionFailure("could not certify the lifted modulator")
        raise InvariantBreach("lifted set is not a modulator of the input graph")
    lifted = minimalize(g, lifted, t)
    if len(lifted) <= bound:
        return ModulatorResult(lifted, trace, len(current), len(catalog), bound)
    verdict = certify_no_modulator(g, t, k)
    if verdict:
        return NoSmallModulator(k, t, "exact search found no modulator of size <= k")
    raise PipelineStalled(
        f"best modulator has {len(lifted)} > c*k = {bound} vertices"
        + (" although one of size <= k exists" if verdict is False else "")
    )
