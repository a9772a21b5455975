"""Seeded sparse graph families for tests, benchmarks and the selftest."""

from __future__ import annotations

import random
from collections.abc import Iterator

from .graph import Graph


def path(n: int) -> Graph:
    return Graph(range(n), [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph(range(n), [(i, (i + 1) % n) for i in range(n)])


def star(leaves: int) -> Graph:
    return Graph(range(leaves + 1), [(0, i) for i in range(1, leaves + 1)])


def complete(n: int) -> Graph:
    return Graph(range(n), [(i, j) for i in range(n) for j in range(i + 1, n)])


def edgeless(n: int) -> Graph:
    return Graph(range(n))


def random_tree(n: int, rng: random.Random) -> Graph:
    return Graph(range(n), [(rng.randrange(i), i) for i in range(1, n)])


def outerplanar(n: int, rng: random.Random, keep: float = 0.5) -> Graph:
    """A Hamiltonian cycle plus a random subset of chords of a random triangulation."""
    if n < 3:
        return path(n)
    edges = {(i, i + 1) for i in range(n - 1)} | {(0, n - 1)}
    stack = [list(range(n))]
    while stack:
        poly = stack.pop()
        if len(poly) < 4:
            continue
        # split the polygon along a chord from its first vertex
        j = rng.randrange(2, len(poly) - 1)
        if rng.random() < keep:
            edges.add((poly[0], poly[j]))
        stack.append(poly[: j + 1])
        stack.append([poly[0]] + poly[j:])
    return Graph(range(n), edges)


def partial_two_tree(n: int, rng: random.Random, keep: float = 0.7) -> Graph:
    if n < 3:
        return path(n)
    edges = [(0, 1), (1, 2), (0, 2)]
    for v in range(3, n):
        u, w = edges[rng.randrange(len(edges))]
        edges += [(u, v), (w, v)]
    kept = [e for e in edges if rng.random() < keep]
    return Graph(range(n), kept)


def sparse_random(n: int, rng: random.Random, density: float = 1.5) -> Graph:
    """About density*n random edges, never more than 2n."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    m = min(len(pairs), int(density * n), 2 * n)
    return Graph(range(n), rng.sample(pairs, m))


HUB_CLASSES = ((0,), (1,), (2,), (0, 1), (1, 2))


def hub_leaves(n: int) -> Graph:
    """Three hubs; every other vertex attaches to one of five fixed hub sets, in rotation."""
    if n < 3:
        raise ValueError("need at least the three hubs")
    edges = []
    for i, v in enumerate(range(3, n)):
        edges += [(h, v) for h in HUB_CLASSES[i % len(HUB_CLASSES)]]
    return Graph(range(n), edges)


FAMILIES = ("path", "cycle", "star", "tree", "outerplanar", "two_tree", "sparse")


def sample(family: str, n: int, rng: random.Random) -> Graph:
    if family == "path":
        return path(n)
    if family == "cycle":
        return cycle(n) if n >= 3 else path(n)
    if family == "star":
        return star(max(n - 1, 0))
    if family == "tree":
        return random_tree(n, rng)
    if family == "outerplanar":
        return outerplanar(n, rng)
    if family == "two_tree":
        return partial_two_tree(n, rng)
    if family == "sparse":
        return sparse_random(n, rng, rng.choice((0.8, 1.2, 1.6, 2.0)))
    raise ValueError(f"unknown family {family!r}")


def corpus(count: int, max_n: int, seed: int = 0, min_n: int = 1) -> Iterator[tuple[str, Graph]]:
    """count graphs cycling through FAMILIES, sizes drawn from [min_n, max_n]."""
    rng = random.Random(seed)
    for i in range(count):
        fam = FAMILIES[i % len(FAMILIES)]
        n = rng.randint(min_n, max_n)
        yield fam, sample(fam, n, rng)
