"""Protrusion decompositions from a treewidth modulator.

Given a t-modulator X, a set Y0 containing X is grown by cutting the
decomposition of each component of G - X at the lowest bags whose subtree
sees at least r vertices of X (closed under lowest common ancestors). The
components of G - Y0, grouped by their neighbourhood in Y0, are the clusters;
cluster Y_i becomes the b-graph (G[N[Y_i]], N(Y_i)).
"""

from __future__ import annotations

import logging
from collections import defaultdict
from collections.abc import Iterable
from dataclasses import dataclass, field

from .algebra import ProblemAlgebra
from .config import Config
from .errors import DecompositionFailure
from .graph import BGraph, BStructure, Graph, closed_neighborhood, connected_components, neighborhood
from .modulator import (
    NoSmallModulator,
    approx_modulator,
    is_t_modulator,
    minimalize,
    vc_modulator_2approx,
)
from .treedec import (
    NotBounded,
    TreeDecomposition,
    decompose_bounded,
    join_decompositions,
    restrict,
    validate,
    with_boundary,
)

log = logging.getLogger(__name__)


def _component_decomposition(g: Graph, comp: frozenset[int], t: int) -> TreeDecomposition:
    d = decompose_bounded(g.induced(comp), t)
    if isinstance(d, NotBounded):
        if d.exact:
            raise ValueError(f"not a {t}-treewidth modulator: {d.reason}")
        raise DecompositionFailure(d.reason)
    return d


def _cut_nodes(g: Graph, x: frozenset[int], d: TreeDecomposition, r: int) -> set[int]:
    root = min(d.bags)
    kids = d.children(root)
    post: list[int] = []
    stack = [(root, False)]
    while stack:
        q, done = stack.pop()
        if done:
            post.append(q)
            continue
        stack.append((q, True))
        stack.extend((c, False) for c in kids[q])

    marked: set[int] = set()
    below: dict[int, set[int]] = {}
    for q in post:
        s = set(d.bags[q])
        for c in kids[q]:
            if c not in marked:
                s |= below.pop(c)
            else:
                below.pop(c, None)
        seen_x = set()
        for v in s:
            seen_x |= g.neighbors(v) & x
        if len(seen_x) >= r:
            marked.add(q)
        below[q] = s

    # closure under lowest common ancestors
    has_mark: dict[int, bool] = {}
    for q in post:
        hits = sum(1 for c in kids[q] if has_mark[c])
        if hits >= 2:
            marked.add(q)
        has_mark[q] = q in marked or hits > 0
    return marked


def build_y0(g: Graph, x: Iterable[int], r: int, t: int) -> tuple[frozenset[int], int]:
    """Y0 containing x with every component Z of g - Y0 seeing < r vertices of x.

    Returns (Y0, number of cut bags).
    """
    if r < 1:
        raise ValueError("r must be positive")
    x = frozenset(x)
    # for t >= 2 the per-component decomposition below does the check
    if t <= 1 and not is_t_modulator(g, x, t):
        raise ValueError(f"not a {t}-treewidth modulator")
    y0 = set(x)
    cuts = 0
    for comp in connected_components(g.without(x)):
        d = _component_decomposition(g, comp, t)
        for q in _cut_nodes(g, x, d, r):
            y0 |= d.bags[q]
            cuts += 1
    return frozenset(y0), cuts


def clusters(g: Graph, y0: Iterable[int]) -> list[frozenset[int]]:
    """Components of g - y0 grouped by their neighbourhood in y0, ordered by min label."""
    y0 = frozenset(y0)
    groups: dict[frozenset[int], set[int]] = defaultdict(set)
    for comp in connected_components(g.without(y0)):
        groups[neighborhood(g, comp)] |= comp
    out = [frozenset(s) for s in groups.values()]
    out.sort(key=lambda s: min(g.label(v) for v in s))
    return out


@dataclass(frozen=True)
class ProtrusionParams:
    alpha: int
    beta: int
    gamma: int


@dataclass
class ProtrusionDecomposition:
    center: frozenset[int]
    protrusions: list[BStructure]
    decompositions: list[TreeDecomposition]
    params: ProtrusionParams
    t: int
    r: int
    modulator: frozenset[int] = frozenset()
    cuts: int = 0

    @property
    def interiors(self) -> list[frozenset[int]]:
        return [p.interior for p in self.protrusions]

    @property
    def widths(self) -> list[int]:
        return [d.width() for d in self.decompositions]

    @property
    def width_bound(self) -> int:
        return 3 * self.t + self.r + 1

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class NullReport:
    """No solution of size <= k exists."""

    reason: str

    def __bool__(self) -> bool:
        return False


def protrusion_decomposition(g: Graph, x: Iterable[int], t: int, r: int) -> ProtrusionDecomposition:
    x = frozenset(x)
    y0, cuts = build_y0(g, x, r, t)
    comp_decs = {comp: _component_decomposition(g, comp, t) for comp in connected_components(g.without(x))}
    owner = {v: comp for comp in comp_decs for v in comp}
    protrusions: list[BStructure] = []
    decs: list[TreeDecomposition] = []
    for cl in clusters(g, y0):
        bd = neighborhood(g, cl)
        parts = []
        for z in connected_components(g.induced(cl)):
            parts.append(restrict(comp_decs[owner[next(iter(z))]], z))
        protrusions.append(BGraph(g.induced(closed_neighborhood(g, cl)), bd))
        decs.append(with_boundary(join_decompositions(parts), bd))
    s = len(protrusions)
    beta = max([d.width() for d in decs] + [len(p.boundary) for p in protrusions], default=0)
    params = ProtrusionParams(max(s, len(y0)), beta, t)
    return ProtrusionDecomposition(y0, protrusions, decs, params, t, r, x, cuts)


@dataclass
class ValidationReport:
    conditions: dict[int, bool]
    rooted: bool
    boundary_in_center: bool
    edges_covered: bool
    widths: list[int] = field(default_factory=list)
    width_bound: int = 0

    @property
    def width_within_bound(self) -> bool:
        return all(w <= self.width_bound for w in self.widths)

    @property
    def failed(self) -> list[str]:
        out = [f"condition {i}" for i, ok in sorted(self.conditions.items()) if not ok]
        for name in ("rooted", "boundary_in_center", "edges_covered"):
            if not getattr(self, name):
                out.append(name)
        return out

    def __bool__(self) -> bool:
        return not self.failed


def validate_protrusion_decomposition(g: Graph, pd: ProtrusionDecomposition) -> ValidationReport:
    a, b, c = pd.params.alpha, pd.params.beta, pd.params.gamma
    ps = pd.protrusions
    interiors = pd.interiors
    union = frozenset().union(*interiors) if interiors else frozenset()
    cond: dict[int, bool] = {}
    cond[1] = len(ps) <= a
    cond[2] = all(
        len(p.boundary) <= b and validate(d, p.graph) and d.width() <= b for p, d in zip(ps, pd.decompositions)
    )
    cond[3] = all(
        p.graph.vertices <= g.vertices and all(g.has_edge(u, v) for u, v in p.graph.edges()) for p in ps
    )
    cond[4] = sum(len(x) for x in interiors) == len(union)
    cond[5] = len(g.vertices - union) <= a
    cond[6] = all(is_t_modulator(g.induced(x), (), c) for x in interiors)
    rooted = len(pd.decompositions) == len(ps) and all(
        d.root is not None and d.bags[d.root] == p.boundary for p, d in zip(ps, pd.decompositions)
    )
    in_center = pd.center == g.vertices - union and all(p.boundary <= pd.center for p in ps)
    covered = True
    for u, v in g.edges():
        if u in pd.center and v in pd.center:
            continue
        if not any(p.graph.has_edge(u, v) for p in ps if u in p.graph.vertices and v in p.graph.vertices):
            covered = False
            break
    return ValidationReport(cond, rooted, in_center, covered, pd.widths, pd.width_bound)


def pipeline_modulator(
    g: Graph, k: int, alg: ProblemAlgebra, cfg: Config, modulator: Iterable[int] | None = None
) -> tuple[frozenset[int], int] | NullReport:
    """The modulator the pipeline decomposes around, with its treewidth target."""
    if modulator is not None:
        x = frozenset(modulator)
        if not x <= g.vertices:
            raise ValueError("modulator mentions unknown vertices")
        if not is_t_modulator(g, x, cfg.t):
            raise ValueError(f"supplied set is not a {cfg.t}-treewidth modulator")
        return x, cfg.t
    if alg.modulability is not None:
        t_mod, factor = alg.modulability
        res = approx_modulator(g, factor * k, t_mod, cfg)
        if isinstance(res, NoSmallModulator):
            return NullReport(res.reason)
        return res.modulator, t_mod
    if alg.name == "is":
        # independent sets do not bound a modulator; a vertex cover always works
        return minimalize(g, vc_modulator_2approx(g), 0), 0
    raise ValueError(f"problem {alg.name!r} needs an external modulator")


def full_pipeline_decomposition(
    g: Graph, k: int, alg: ProblemAlgebra, cfg: Config | None = None, modulator: Iterable[int] | None = None
) -> ProtrusionDecomposition | NullReport:
    cfg = cfg or Config()
    got = pipeline_modulator(g, k, alg, cfg, modulator)
    if isinstance(got, NullReport):
        return got
    x, t = got
    pd = protrusion_decomposition(g, x, t, cfg.r)
    log.debug("decomposition: |X|=%d center=%d s=%d params=%s", len(x), len(pd.center), len(pd.protrusions), pd.params)
    return pd


def format_decomposition(g: Graph, pd: ProtrusionDecomposition) -> str:
    lines = ["center " + " ".join(g.name(v) for v in g.sort(pd.center))]
    for i, p in enumerate(pd.protrusions, 1):
        bd = " ".join(g.name(v) for v in g.sort(p.boundary))
        inner = " ".join(g.name(v) for v in g.sort(p.interior))
        lines.append(f"protrusion {i} boundary [{bd}] interior [{inner}]")
    a, b, c = pd.params.alpha, pd.params.beta, pd.params.gamma
    lines.append(f"params alpha={a} beta={b} gamma={c} widths={pd.widths}")
    for i, d in enumerate(pd.decompositions, 1):
        lines.append(f"decomposition {i}")
        lines.append(d.dump(g))
    return "\n".join(lines) + "\n"
