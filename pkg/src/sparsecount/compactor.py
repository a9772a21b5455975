"""Condenser and extractor.

`condense` keeps only the center graph, the protrusion boundaries and one
count table per protrusion. `extract` recovers the number of size-k
solutions from that summary alone: for every A0 inside the center, it picks
one state per protrusion whose trace matches A0, checks the glued result with
the algebra's combine fold, and multiplies per-protrusion counts so that the
interior sizes add up to k - |A0|. That last sum is the top coefficient of a
truncated polynomial product.
"""

from __future__ import annotations

import itertools
import logging
import re
import time
import zlib
from collections import defaultdict
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field

from .algebra import AlgebraState, ProblemAlgebra, decode_state, encode_state, get_algebra
from .config import Config
from .dpcount import CountTable, count_table, poly_mul, table_from_entries
from .errors import ChecksumError, CompactorFormatError
from .graph import Graph
from .protrusion import NullReport, full_pipeline_decomposition
from .treedec import make_nice

log = logging.getLogger(__name__)

VERSION = 1


@dataclass(frozen=True, eq=True)
class CompactorFile:
    problem: str
    k: int
    null: bool = False
    center_n: int = 0
    center_edges: tuple[tuple[int, int], ...] = ()
    boundaries: tuple[tuple[int, ...], ...] = ()
    tables: tuple[CountTable, ...] = ()
    stats: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def center(self) -> Graph:
        return Graph(range(self.center_n), self.center_edges)

    @property
    def s(self) -> int:
        return len(self.boundaries)

    def stored_values(self) -> int:
        return sum(t.stored_values() for t in self.tables)

    def max_states(self) -> int:
        return max((len(t.entries) for t in self.tables), default=0)


def null_file(problem: str, k: int, reason: str = "") -> CompactorFile:
    return CompactorFile(problem, k, null=True, stats={"reason": reason})


def condense(
    g: Graph, k: int, alg: ProblemAlgebra, cfg: Config | None = None, modulator: Iterable[int] | None = None
) -> CompactorFile:
    if k < 0:
        raise ValueError("k must be non-negative")
    cfg = cfg or Config()
    start = time.perf_counter()
    pd = full_pipeline_decomposition(g, k, alg, cfg, modulator)
    if isinstance(pd, NullReport):
        return null_file(alg.name, k, pd.reason)
    order = g.sort(pd.center)
    idx = {v: i for i, v in enumerate(order)}
    center_edges = tuple(sorted((idx[u], idx[v]) for u, v in g.induced(pd.center).edges()))
    boundaries = []
    tables = []
    for p, d in zip(pd.protrusions, pd.decompositions):
        nd = make_nice(d, p.graph, p.boundary)
        tbl = count_table(p, nd, alg, k)
        bidx = tuple(idx[v] for v in p.graph.sort(p.boundary))
        boundaries.append(bidx)
        tables.append(CountTable(tbl.entries, bidx, k))
    stats = {
        "n": len(g),
        "modulator": len(pd.modulator),
        "center": len(order),
        "s": len(boundaries),
        "alpha": pd.params.alpha,
        "beta": pd.params.beta,
        "gamma": pd.params.gamma,
        "widths": pd.widths,
        "states": sum(len(t.entries) for t in tables),
        "stored_values": sum(t.stored_values() for t in tables),
        "seconds": round(time.perf_counter() - start, 6),
    }
    f = CompactorFile(alg.name, k, False, len(order), center_edges, tuple(boundaries), tuple(tables), stats)
    log.debug("condensed: %s", stats)
    return f


# -- extraction ---------------------------------------------------------------


def _by_trace(tbl: CountTable) -> dict[tuple[int, ...], list[tuple[AlgebraState, tuple[int, ...]]]]:
    out: dict[tuple[int, ...], list] = defaultdict(list)
    for s, row in tbl.entries.items():
        out[s.annotated_boundary].append((s, row))
    return out


def _trace(boundary: tuple[int, ...], a0: frozenset[int]) -> tuple[int, ...]:
    return tuple(i + 1 for i, v in enumerate(boundary) if v in a0)


def _window(row: tuple[int, ...], shift: int, cap: int) -> list[int]:
    return [row[j + shift] if j + shift < len(row) else 0 for j in range(cap + 1)]


def _center_subsets(f: CompactorFile) -> Iterator[frozenset[int]]:
    for size in range(min(f.k, f.center_n) + 1):
        for a0 in itertools.combinations(range(f.center_n), size):
            yield frozenset(a0)


def extract(f: CompactorFile) -> int:
    """Number of size-k solutions encoded by the file; 0 for a null file."""
    if f.null:
        return 0
    alg = get_algebra(f.problem)
    center = f.center
    groups = [_by_trace(t) for t in f.tables]
    total = 0
    for a0 in _center_subsets(f):
        rem = f.k - len(a0)
        acc0 = alg.combine_start(center, a0)
        if acc0 is None:
            continue
        # accumulators with equal combine state are merged, so the number of
        # live partial mappings stays bounded by the accumulator space
        layer: dict = {acc0: [1] + [0] * rem}
        for bd, grp in zip(f.boundaries, groups):
            shift = sum(1 for v in bd if v in a0)
            nxt: dict = defaultdict(lambda: [0] * (rem + 1))
            for s, row in grp.get(_trace(bd, a0), ()):
                q = _window(row, shift, rem)
                if not any(q):
                    continue
                for acc, poly in layer.items():
                    acc2 = alg.combine_step(acc, bd, s)
                    if acc2 is None:
                        continue
                    prod = poly_mul(poly, q, rem)
                    tgt = nxt[acc2]
                    for j, c in enumerate(prod):
                        tgt[j] += c
            layer = nxt
            if not layer:
                break
        total += sum(poly[rem] for acc, poly in layer.items() if alg.combine_accept(acc))
    return total


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def contributions(f: CompactorFile, prune: bool = True) -> Iterator[tuple[frozenset[int], tuple[AlgebraState, ...], tuple[int, ...], int]]:
    """Every nonzero (A0, mapping, zeta) term of the extractor sum, enumerated explicitly."""
    if f.null:
        return
    alg = get_algebra(f.problem)
    center = f.center
    for a0 in _center_subsets(f):
        rem = f.k - len(a0)
        shifts = [sum(1 for v in bd if v in a0) for bd in f.boundaries]
        choices = []
        for bd, t, shift in zip(f.boundaries, f.tables, shifts):
            tr = _trace(bd, a0)
            opts = [s for s in t.states() if s.annotated_boundary == tr]
            if prune:
                opts = [s for s in opts if any(_window(t.entries[s], shift, rem))]
            choices.append(opts)
        for states in itertools.product(*choices):
            if not alg.combine(center, a0, f.boundaries, states):
                continue
            for zeta in _compositions(rem, len(states)):
                prod = 1
                for t, s, z, shift in zip(f.tables, states, zeta, shifts):
                    prod *= t[s, z + shift]
                    if not prod:
                        break
                if prod:
                    yield a0, tuple(states), zeta, prod


def extract_explicit(f: CompactorFile, prune: bool = True) -> int:
    return sum(c for *_, c in contributions(f, prune))


def count_end_to_end(
    g: Graph, k: int, alg: ProblemAlgebra, cfg: Config | None = None, modulator: Iterable[int] | None = None
) -> int:
    return extract(condense(g, k, alg, cfg, modulator))


# -- text format ----------------------------------------------------------------

_HEADER = re.compile(r"COMPACTOR v(\d+) ([a-z]+) k=(0|[1-9]\d*)")
_CHECKSUM = re.compile(r"CHECKSUM ([0-9a-f]{8})")


def _checksum(header: str, body: list[str]) -> str:
    data = "\n".join([header, *body]) + "\n"
    return f"{zlib.adler32(data.encode()):08x}"


def serialize(f: CompactorFile) -> bytes:
    header = f"COMPACTOR v{VERSION} {f.problem} k={f.k}"
    body: list[str] = []
    if f.null:
        body.append("NULL")
    else:
        alg = get_algebra(f.problem)
        body.append(f"CENTER {f.center_n} {len(f.center_edges)}")
        body.extend(f"{u} {v}" for u, v in f.center_edges)
        body.append(f"PROTRUSIONS {f.s}")
        for i, (bd, t) in enumerate(zip(f.boundaries, f.tables), 1):
            body.append(" ".join(["B", str(i), *map(str, bd)]))
            for s in t.states():
                for kk, c in enumerate(t.entries[s]):
                    if c:
                        body.append(f"ENTRY {i} {encode_state(alg, s)} {kk} {c}")
    lines = [header, f"CHECKSUM {_checksum(header, body)}", *body]
    return ("\n".join(lines) + "\n").encode()


def _ints(fields: list[str], what: str, lineno: int) -> list[int]:
    try:
        out = [int(x) for x in fields]
    except ValueError:
        raise CompactorFormatError(f"line {lineno}: bad {what}") from None
    if any(x < 0 for x in out):
        raise CompactorFormatError(f"line {lineno}: negative {what}")
    return out


def deserialize(data: bytes | str) -> CompactorFile:
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as e:
            raise CompactorFormatError(f"not UTF-8: {e}") from None
    else:
        text = data
    if not text.endswith("\n"):
        raise CompactorFormatError("missing final newline")
    lines = text[:-1].split("\n")
    if len(lines) < 3:
        raise CompactorFormatError("truncated file")
    m = _CHECKSUM.fullmatch(lines[1])
    if not m:
        raise CompactorFormatError("line 2: expected CHECKSUM <8 hex digits>")
    if _checksum(lines[0], lines[2:]) != m.group(1):
        raise ChecksumError("checksum mismatch")
    h = _HEADER.fullmatch(lines[0])
    if not h:
        raise CompactorFormatError("line 1: bad header")
    if int(h.group(1)) != VERSION:
        raise CompactorFormatError(f"unsupported version {h.group(1)}")
    problem, k = h.group(2), int(h.group(3))
    try:
        alg = get_algebra(problem)
    except ValueError as e:
        raise CompactorFormatError(str(e)) from None
    body = lines[2:]
    if body == ["NULL"]:
        return null_file(problem, k)

    pos = 0

    def take() -> tuple[int, list[str]]:
        nonlocal pos
        if pos >= len(body):
            raise CompactorFormatError("unexpected end of file")
        pos += 1
        return pos + 2, body[pos - 1].split(" ")

    ln, fs = take()
    if len(fs) != 3 or fs[0] != "CENTER":
        raise CompactorFormatError(f"line {ln}: expected CENTER <n0> <m0>")
    n0, m0 = _ints(fs[1:], "center size", ln)
    edges = []
    for _ in range(m0):
        ln, fs = take()
        if len(fs) != 2:
            raise CompactorFormatError(f"line {ln}: expected an edge")
        u, v = _ints(fs, "edge", ln)
        if not (u < v < n0):
            raise CompactorFormatError(f"line {ln}: edge out of range or not canonical")
        edges.append((u, v))
    if edges != sorted(set(edges)):
        raise CompactorFormatError("center edges not in canonical order")
    ln, fs = take()
    if len(fs) != 2 or fs[0] != "PROTRUSIONS":
        raise CompactorFormatError(f"line {ln}: expected PROTRUSIONS <s>")
    (s,) = _ints(fs[1:], "protrusion count", ln)
    boundaries: list[tuple[int, ...]] = []
    entries: list[list[tuple[AlgebraState, int, int]]] = []
    for i in range(1, s + 1):
        ln, fs = take()
        if len(fs) < 2 or fs[0] != "B" or fs[1] != str(i):
            raise CompactorFormatError(f"line {ln}: expected B {i} ...")
        bd = tuple(_ints(fs[2:], "boundary", ln))
        if any(v >= n0 for v in bd) or list(bd) != sorted(set(bd)):
            raise CompactorFormatError(f"line {ln}: bad boundary")
        boundaries.append(bd)
        rows: list[tuple[AlgebraState, int, int]] = []
        while pos < len(body) and body[pos].startswith(f"ENTRY {i} "):
            ln, fs = take()
            if len(fs) != 5:
                raise CompactorFormatError(f"line {ln}: bad ENTRY")
            try:
                st = decode_state(alg, fs[2])
            except ValueError as e:
                raise CompactorFormatError(f"line {ln}: {e}") from None
            kk, c = _ints(fs[3:], "entry", ln)
            if kk > k or c == 0 or (st.annotated_boundary and st.annotated_boundary[-1] > len(bd)):
                raise CompactorFormatError(f"line {ln}: entry out of range")
            rows.append((st, kk, c))
        entries.append(rows)
    if pos != len(body):
        raise CompactorFormatError(f"line {pos + 3}: trailing content")
    tables = tuple(table_from_entries(rows, bd, k) for rows, bd in zip(entries, boundaries))
    return CompactorFile(problem, k, False, n0, tuple(edges), tuple(boundaries), tables)
