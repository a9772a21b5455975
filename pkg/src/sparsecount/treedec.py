"""Tree decompositions: validation, construction, nice form, exact treewidth."""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from .errors import UnsupportedScale
from .graph import Graph, connected_components

EXACT_LIMIT = 14


@dataclass(frozen=True)
class TreeDecomposition:
    """Bags indexed by node id, an undirected tree over the nodes, optional root."""

    bags: Mapping[int, frozenset[int]]
    tree: Mapping[int, frozenset[int]]
    root: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "bags", {q: frozenset(b) for q, b in self.bags.items()})
        adj = {q: set() for q in self.bags}
        for q, ns in self.tree.items():
            for p in ns:
                adj[q].add(p)
                adj[p].add(q)
        object.__setattr__(self, "tree", {q: frozenset(ns) for q, ns in adj.items()})

    @classmethod
    def single_bag(cls, vertices: Iterable[int]) -> TreeDecomposition:
        return cls({0: frozenset(vertices)}, {0: frozenset()}, 0)

    @property
    def nodes(self) -> list[int]:
        return sorted(self.bags)

    def width(self) -> int:
        return width(self)

    def tree_edges(self) -> list[tuple[int, int]]:
        return sorted((p, q) for p, ns in self.tree.items() for q in ns if p < q)

    def rooted(self, root: int) -> TreeDecomposition:
        return TreeDecomposition(self.bags, self.tree, root)

    def children(self, root: int | None = None) -> dict[int, list[int]]:
        """Child lists with respect to root (default: self.root or min node)."""
        if root is None:
            root = self.root if self.root is not None else min(self.bags)
        out: dict[int, list[int]] = {root: []}
        stack = [root]
        while stack:
            q = stack.pop()
            for p in sorted(self.tree[q]):
                if p not in out:
                    out[p] = []
                    out[q].append(p)
                    stack.append(p)
        return out

    def dump(self, g: Graph | None = None) -> str:
        """Indented text rendering, one bag per line."""
        if not self.bags:
            return "(empty)"
        root = self.root if self.root is not None else min(self.bags)
        kids = self.children(root)
        lines: list[str] = []

        def name(v: int) -> str:
            return g.name(v) if g is not None else str(v)

        def rec(q: int, depth: int) -> None:
            bag = g.sort(self.bags[q]) if g is not None else sorted(self.bags[q])
            lines.append("  " * depth + "{" + ",".join(name(v) for v in bag) + "}")
            for c in kids[q]:
                rec(c, depth + 1)

        rec(root, 0)
        return "\n".join(lines)


@dataclass(frozen=True)
class NotBounded:
    """No decomposition of the requested width was found.

    `exact` is True when an exhaustive search backs the verdict.
    """

    width: int
    exact: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return False


def _is_tree(nodes: Iterable[int], tree: Mapping[int, frozenset[int]]) -> bool:
    nodes = list(nodes)
    if not nodes:
        return False
    edges = sum(len(ns) for ns in tree.values()) // 2
    if edges != len(nodes) - 1:
        return False
    seen = {nodes[0]}
    stack = [nodes[0]]
    while stack:
        q = stack.pop()
        for p in tree[q]:
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return len(seen) == len(nodes)


def validate(d: TreeDecomposition, g: Graph) -> bool:
    """Check the three tree-decomposition axioms (plus that T is a tree)."""
    if not _is_tree(d.bags, d.tree):
        return False
    covered: set[int] = set()
    for bag in d.bags.values():
        if not bag <= g.vertices:
            return False
        covered |= bag
    if covered != g.vertices:
        return False
    for u, v in g.edges():
        if not any(u in bag and v in bag for bag in d.bags.values()):
            return False
    for v in g.vertices:
        occ = [q for q, bag in d.bags.items() if v in bag]
        occ_set = set(occ)
        seen = {occ[0]}
        stack = [occ[0]]
        while stack:
            q = stack.pop()
            for p in d.tree[q]:
                if p in occ_set and p not in seen:
                    seen.add(p)
                    stack.append(p)
        if len(seen) != len(occ):
            return False
    return True


def width(d: TreeDecomposition) -> int:
    if not d.bags:
        raise ValueError("empty decomposition has no width")
    return max(len(b) for b in d.bags.values()) - 1


# -- elimination orderings ---------------------------------------------------


def _fill_adjacency(g: Graph) -> dict[int, set[int]]:
    return {v: set(g.neighbors(v)) for v in g.vertices}


def min_fill_order(g: Graph) -> list[int]:
    """Greedy min-fill elimination order (ties by degree, then label)."""
    adj = _fill_adjacency(g)
    order = []
    while adj:
        best = None
        for v in sorted(adj, key=g.label):
            ns = list(adj[v])
            fill = sum(1 for a, b in itertools.combinations(ns, 2) if b not in adj[a])
            key = (fill, len(ns))
            if best is None or key < best[0]:
                best = (key, v)
        v = best[1]
        ns = adj.pop(v)
        for a in ns:
            adj[a].discard(v)
            adj[a] |= ns - {a}
        order.append(v)
    return order


def elimination_width(g: Graph, order: list[int]) -> int:
    adj = _fill_adjacency(g)
    w = -1
    for v in order:
        ns = adj.pop(v)
        w = max(w, len(ns))
        for a in ns:
            adj[a].discard(v)
            adj[a] |= ns - {a}
    return w


def decomposition_from_order(g: Graph, order: list[int]) -> TreeDecomposition:
    """Standard bag-per-eliminated-vertex construction; components are chained."""
    if not order:
        return TreeDecomposition.single_bag(())
    pos = {v: i for i, v in enumerate(order)}
    adj = _fill_adjacency(g)
    bags: dict[int, frozenset[int]] = {}
    parent: dict[int, int] = {}
    for v in order:
        ns = adj.pop(v)
        bags[pos[v]] = frozenset(ns | {v})
        if ns:
            parent[pos[v]] = min(pos[a] for a in ns)
        for a in ns:
            adj[a].discard(v)
            adj[a] |= ns - {a}
    tree: dict[int, set[int]] = {q: set() for q in bags}
    roots = []
    for q in bags:
        if q in parent:
            tree[q].add(parent[q])
        else:
            roots.append(q)
    for a, b in zip(roots, roots[1:]):
        tree[a].add(b)
    return simplify(TreeDecomposition(bags, {q: frozenset(ns) for q, ns in tree.items()}))


def simplify(d: TreeDecomposition) -> TreeDecomposition:
    """Contract tree edges whose one bag is a subset of the other's."""
    bags = dict(d.bags)
    tree = {q: set(ns) for q, ns in d.tree.items()}
    root = d.root
    changed = True
    while changed and len(bags) > 1:
        changed = False
        for q in sorted(bags):
            for p in sorted(tree[q]):
                if bags[q] <= bags[p] and q != root:
                    for r in tree[q]:
                        if r != p:
                            tree[r].discard(q)
                            tree[r].add(p)
                            tree[p].add(r)
                    tree[p].discard(q)
                    del tree[q], bags[q]
                    changed = True
                    break
            if changed:
                break
    return TreeDecomposition(bags, {q: frozenset(ns) for q, ns in tree.items()}, root)


def heuristic_decomposition(g: Graph) -> TreeDecomposition:
    return decomposition_from_order(g, min_fill_order(g))


# -- exact treewidth over vertex subsets --------------------------------------


def _bitmask_adjacency(g: Graph) -> tuple[list[int], list[int]]:
    vs = list(g.order())
    pos = {v: i for i, v in enumerate(vs)}
    adj = [0] * len(vs)
    for u, v in g.edges():
        adj[pos[u]] |= 1 << pos[v]
        adj[pos[v]] |= 1 << pos[u]
    return vs, adj


def _q_size(adj: list[int], s: int, v: int) -> int:
    """|Q(S, v)|: vertices outside S+v reachable from v through S."""
    reach = 1 << v
    frontier = reach
    inside = s | reach
    while frontier:
        nxt = 0
        f = frontier
        while f:
            low = f & -f
            nxt |= adj[low.bit_length() - 1]
            f ^= low
        nxt &= inside & ~reach
        reach |= nxt
        frontier = nxt
    out = 0
    r = reach
    while r:
        low = r & -r
        out |= adj[low.bit_length() - 1]
        r ^= low
    out &= ~inside
    return out.bit_count() if hasattr(int, "bit_count") else bin(out).count("1")


def _order_at_most(adj: list[int], t: int) -> list[int] | None:
    """Elimination order of width <= t, by forward search over eliminated sets."""
    n = len(adj)
    full = (1 << n) - 1
    parent: dict[int, tuple[int, int]] = {0: (-1, -1)}
    layer = [0]
    for _ in range(n):
        nxt = []
        for s in layer:
            rest = full & ~s
            while rest:
                low = rest & -rest
                v = low.bit_length() - 1
                rest ^= low
                s2 = s | low
                if s2 in parent:
                    continue
                if _q_size(adj, s, v) <= t:
                    parent[s2] = (s, v)
                    nxt.append(s2)
        layer = nxt
        if not layer:
            return None
    order = []
    s = full
    while s:
        s, v = parent[s]
        order.append(v)
    return order[::-1]


def treewidth_at_most(g: Graph, t: int) -> list[int] | None:
    """Exact decision; returns an elimination order of width <= t or None."""
    if len(g) > EXACT_LIMIT:
        raise UnsupportedScale(f"exact treewidth limited to {EXACT_LIMIT} vertices")
    if t < 0:
        return [] if len(g) == 0 else None
    vs, adj = _bitmask_adjacency(g)
    found = _order_at_most(adj, t)
    if found is None:
        return None
    return [vs[i] for i in found]


def exact_treewidth(g: Graph) -> int:
    if len(g) > EXACT_LIMIT:
        raise UnsupportedScale(f"exact treewidth limited to {EXACT_LIMIT} vertices")
    if len(g) == 0:
        return -1
    best = 0
    for comp in connected_components(g):
        h = g.induced(comp)
        upper = elimination_width(h, min_fill_order(h))
        t = best
        while t < upper and treewidth_at_most(h, t) is None:
            t += 1
        best = max(best, min(t, upper))
    return best


def decompose_bounded(g: Graph, t: int) -> TreeDecomposition | NotBounded:
    """A decomposition of width <= t, or NotBounded.

    Min-fill is tried first; components it fails on are searched exactly when
    they have at most EXACT_LIMIT vertices, otherwise the verdict is advisory.
    """
    if len(g) == 0:
        return TreeDecomposition.single_bag(())
    order = min_fill_order(g)
    if elimination_width(g, order) <= t:
        return decomposition_from_order(g, order)
    full_order: list[int] = []
    for comp in connected_components(g):
        h = g.induced(comp)
        o = min_fill_order(h)
        if elimination_width(h, o) > t:
            if len(h) > EXACT_LIMIT:
                return NotBounded(t, exact=False, reason=f"min-fill exceeded width {t} on a component of {len(h)} vertices")
            o = treewidth_at_most(h, t)
            if o is None:
                return NotBounded(t, exact=True, reason=f"treewidth exceeds {t}")
        full_order += o
    return decomposition_from_order(g, full_order)


def join_decompositions(parts: list[TreeDecomposition]) -> TreeDecomposition:
    """Disjoint union of decompositions of vertex-disjoint graphs, trees chained."""
    bags: dict[int, frozenset[int]] = {}
    tree: dict[int, set[int]] = {}
    anchors = []
    offset = 0
    for d in parts:
        remap = {q: offset + i for i, q in enumerate(sorted(d.bags))}
        for q, b in d.bags.items():
            bags[remap[q]] = b
            tree[remap[q]] = {remap[p] for p in d.tree[q]}
        anchors.append(remap[min(d.bags)])
        offset += len(remap)
    for a, b in zip(anchors, anchors[1:]):
        tree[a].add(b)
        tree[b].add(a)
    if not bags:
        return TreeDecomposition.single_bag(())
    return TreeDecomposition(bags, {q: frozenset(ns) for q, ns in tree.items()})


def with_boundary(d: TreeDecomposition, boundary: Iterable[int]) -> TreeDecomposition:
    """Add the boundary to every bag and hang a new root bag equal to it."""
    boundary = frozenset(boundary)
    bags = {q: b | boundary for q, b in d.bags.items()}
    tree = {q: set(ns) for q, ns in d.tree.items()}
    root = max(bags, default=-1) + 1
    bags[root] = boundary
    tree[root] = set()
    if len(bags) > 1:
        anchor = min(q for q in bags if q != root)
        tree[root].add(anchor)
        tree[anchor].add(root)
    return TreeDecomposition(bags, {q: frozenset(ns) for q, ns in tree.items()}, root)


def restrict(d: TreeDecomposition, s: Iterable[int]) -> TreeDecomposition:
    s = frozenset(s)
    out = TreeDecomposition({q: b & s for q, b in d.bags.items()}, d.tree, d.root)
    return simplify(out) if d.root is None else out


# -- nice tree decompositions ------------------------------------------------

LEAF, INTRODUCE, FORGET, JOIN = "leaf", "introduce", "forget", "join"


@dataclass(frozen=True)
class NiceNode:
    kind: str
    bag: frozenset[int]
    children: tuple[int, ...] = ()
    vertex: int | None = None


@dataclass(frozen=True)
class NiceTreeDecomposition:
    nodes: Mapping[int, NiceNode]
    root: int
    _post: tuple[int, ...] = field(default=(), repr=False, compare=False)

    def postorder(self) -> tuple[int, ...]:
        if self._post:
            return self._post
        out = []
        stack = [(self.root, False)]
        while stack:
            q, done = stack.pop()
            if done:
                out.append(q)
                continue
            stack.append((q, True))
            for c in reversed(self.nodes[q].children):
                stack.append((c, False))
        object.__setattr__(self, "_post", tuple(out))
        return self._post

    @property
    def root_bag(self) -> frozenset[int]:
        return self.nodes[self.root].bag

    def width(self) -> int:
        return max(len(n.bag) for n in self.nodes.values()) - 1

    def as_tree_decomposition(self) -> TreeDecomposition:
        tree = {q: frozenset(n.children) for q, n in self.nodes.items()}
        return TreeDecomposition({q: n.bag for q, n in self.nodes.items()}, tree, self.root)

    def dump(self, g: Graph | None = None) -> str:
        lines: list[str] = []

        def rec(q: int, depth: int) -> None:
            n = self.nodes[q]
            bag = g.sort(n.bag) if g is not None else sorted(n.bag)
            names = ",".join(g.name(v) if g is not None else str(v) for v in bag)
            extra = ""
            if n.vertex is not None:
                extra = " " + (g.name(n.vertex) if g is not None else str(n.vertex))
            lines.append(f"{'  ' * depth}{n.kind}{extra} {{{names}}}")
            for c in n.children:
                rec(c, depth + 1)

        rec(self.root, 0)
        return "\n".join(lines)


def is_nice(nd: NiceTreeDecomposition) -> bool:
    for n in nd.nodes.values():
        kids = [nd.nodes[c] for c in n.children]
        if n.kind == LEAF:
            ok = not kids
        elif n.kind == JOIN:
            ok = len(kids) == 2 and all(k.bag == n.bag for k in kids)
        elif n.kind == INTRODUCE:
            ok = len(kids) == 1 and n.bag - kids[0].bag == {n.vertex} and kids[0].bag <= n.bag
        elif n.kind == FORGET:
            ok = len(kids) == 1 and kids[0].bag - n.bag == {n.vertex} and n.bag <= kids[0].bag
        else:
            ok = False
        if not ok:
            return False
    return True


def _attach_root(d: TreeDecomposition, root_bag: frozenset[int]) -> tuple[dict, dict, int]:
    bags = {q: set(b) for q, b in d.bags.items()}
    tree = {q: set(ns) for q, ns in d.tree.items()}
    anchor = max(sorted(bags), key=lambda q: len(bags[q] & root_bag))
    # vertices of the root bag missing at the anchor are carried along the
    # tree path from their nearest occurrence, which keeps occurrence sets connected
    for v in sorted(root_bag - bags[anchor]):
        prev = {anchor: None}
        queue = [anchor]
        hit = None
        for q in queue:
            if v in bags[q]:
                hit = q
                break
            for p in sorted(tree[q]):
                if p not in prev:
                    prev[p] = q
                    queue.append(p)
        q = prev[hit] if hit is not None else None
        while q is not None:
            bags[q].add(v)
            q = prev[q]
        if hit is None:
            bags[anchor].add(v)
    root = max(bags) + 1
    bags[root] = set(root_bag)
    tree[root] = {anchor}
    tree[anchor].add(root)
    return bags, tree, root


def make_nice(d: TreeDecomposition, g: Graph, root_bag: Iterable[int]) -> NiceTreeDecomposition:
    """Nice form rooted at a node whose bag is exactly root_bag."""
    root_bag = frozenset(root_bag)
    if not root_bag <= g.vertices:
        raise ValueError("root bag must consist of graph vertices")
    if not validate(d, g):
        raise ValueError("input is not a valid tree decomposition of the graph")
    bags, tree, root = _attach_root(d, root_bag)
    nodes: dict[int, NiceNode] = {}
    counter = itertools.count()

    def chain(top_bag: frozenset[int], bottom: int) -> int:
        """Nodes stepping from top_bag down to the bag of node `bottom`."""
        target = nodes[bottom].bag
        cur = bottom
        cur_bag = target
        # built bottom-up: first re-add what top has but target lacks is an
        # introduce, removing what target has beyond top is a forget
        for v in sorted(target - top_bag, key=g.label, reverse=True):
            new_bag = cur_bag - {v}
            q = next(counter)
            nodes[q] = NiceNode(FORGET, new_bag, (cur,), v)
            cur, cur_bag = q, new_bag
        for v in sorted(top_bag - target, key=g.label, reverse=True):
            new_bag = cur_bag | {v}
            q = next(counter)
            nodes[q] = NiceNode(INTRODUCE, new_bag, (cur,), v)
            cur, cur_bag = q, new_bag
        assert cur_bag == top_bag
        return cur

    def build(q: int, parent: int | None) -> int:
        bag = frozenset(bags[q])
        kids = [p for p in sorted(tree[q]) if p != parent]
        if not kids:
            nid = next(counter)
            nodes[nid] = NiceNode(LEAF, bag)
            return nid
        subs = [chain(bag, build(p, q)) for p in kids]
        while len(subs) > 1:
            a, b = subs[0], subs[1]
            nid = next(counter)
            nodes[nid] = NiceNode(JOIN, bag, (a, b))
            subs = [nid] + subs[2:]
        return subs[0]

    top = build(root, None)
    nd = NiceTreeDecomposition(nodes, top)
    nd = _collapse(nd)
    return nd


def _collapse(nd: NiceTreeDecomposition) -> NiceTreeDecomposition:
    """Renumber nodes in postorder (the chain builder never repeats a bag)."""
    order = nd.postorder()
    remap = {q: i for i, q in enumerate(order)}
    nodes = {
        remap[q]: NiceNode(n.kind, n.bag, tuple(remap[c] for c in n.children), n.vertex)
        for q, n in nd.nodes.items()
    }
    return NiceTreeDecomposition(nodes, remap[nd.root])


def rooted_region_decomposition(g: Graph, boundary: Iterable[int], t: int | None = None) -> TreeDecomposition:
    """Decomposition of g rooted at the boundary: interior decomposed, boundary added everywhere."""
    boundary = frozenset(boundary)
    interior = g.induced(g.vertices - boundary)
    if t is not None:
        inner = decompose_bounded(interior, t)
        if isinstance(inner, NotBounded):
            inner = heuristic_decomposition(interior)
    else:
        inner = heuristic_decomposition(interior)
    if len(interior) == 0:
        return TreeDecomposition.single_bag(boundary)
    return with_boundary(inner, boundary)
