"""Command-line front end.

Exit codes follow sysexits: 64 usage, 65 bad data or unsupported scale,
66 missing input, 70 pipeline failure or internal error.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from collections.abc import Sequence
from pathlib import Path

from . import oracle
from .algebra import get_algebra
from .compactor import condense, deserialize, extract, serialize
from .config import Config
from .errors import (
    CompactorFormatError,
    InvariantBreach,
    ParseError,
    PipelineError,
    SparseCountError,
    UnsupportedScale,
)
from .generators import corpus
from .graph import Graph, parse_edge_list
from .modulator import NoSmallModulator, approx_modulator
from .protrusion import NullReport, format_decomposition, full_pipeline_decomposition

EX_OK = 0
EX_USAGE = 64
EX_DATAERR = 65
EX_NOINPUT = 66
EX_SOFTWARE = 70

PROBLEMS = ("vc", "is", "ds")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    return Path(path).read_bytes()


def _load_graph(path: str) -> Graph:
    return parse_edge_list(_read(path))


def _load_modulator(path: Path | None, g: Graph) -> frozenset[int] | None:
    if path is None:
        return None
    by_name = {g.name(v): v for v in g.vertices}
    names = Path(path).read_text().split()
    unknown = [n for n in names if n not in by_name]
    if unknown:
        raise ParseError(f"modulator names unknown vertices: {', '.join(unknown)}")
    return frozenset(by_name[n] for n in names)


def _config(args: argparse.Namespace) -> Config:
    try:
        return Config(
            t=args.t,
            r=args.r,
            b=args.b,
            d=args.d,
            c=args.c,
            problem=getattr(args, "problem", "vc"),
            seed=args.seed,
            verbosity=args.verbose,
            modulator_file=args.modulator_file,
        )
    except ValueError as e:
        raise UsageError(str(e)) from None


def _report(args: argparse.Namespace, stats: dict) -> None:
    if args.verbose:
        print(" ".join(f"{k}={v}" for k, v in stats.items()), file=sys.stderr)


def _cmd_count(args) -> int:
    cfg = _config(args)
    g = _load_graph(args.graph)
    start = time.perf_counter()
    f = condense(g, args.k, get_algebra(args.problem), cfg, _load_modulator(cfg.modulator_file, g))
    n = extract(f)
    print(n)
    _report(args, {**f.stats, "seconds": round(time.perf_counter() - start, 6)})
    return EX_OK


def _cmd_condense(args) -> int:
    cfg = _config(args)
    g = _load_graph(args.graph)
    f = condense(g, args.k, get_algebra(args.problem), cfg, _load_modulator(cfg.modulator_file, g))
    sys.stdout.buffer.write(serialize(f))
    sys.stdout.flush()
    _report(args, f.stats)
    return EX_OK


def _cmd_extract(args) -> int:
    f = deserialize(_read(args.file))
    print(extract(f))
    _report(args, {"problem": f.problem, "k": f.k, "null": f.null, "s": f.s, "stored_values": f.stored_values()})
    return EX_OK


def _cmd_oracle(args) -> int:
    g = _load_graph(args.graph)
    print(oracle.brute_count(g, args.k, args.problem))
    return EX_OK


def _cmd_decompose(args) -> int:
    cfg = _config(args)
    g = _load_graph(args.graph)
    pd = full_pipeline_decomposition(g, args.k, get_algebra(args.problem), cfg, _load_modulator(cfg.modulator_file, g))
    if isinstance(pd, NullReport):
        print(f"NULL {pd.reason}")
    else:
        sys.stdout.write(format_decomposition(g, pd))
    return EX_OK


def _cmd_modulator(args) -> int:
    cfg = _config(args)
    g = _load_graph(args.graph)
    res = approx_modulator(g, args.k, cfg.t, cfg)
    if isinstance(res, NoSmallModulator):
        print(f"NONE {res.reason}")
        return EX_OK
    print(" ".join(g.name(v) for v in g.sort(res.modulator)))
    _report(args, {"size": len(res.modulator), "bound": res.bound, "steps": len(res.trace), "final": res.final_size})
    return EX_OK


def _cmd_selftest(args) -> int:
    cfg = _config(args)
    checked = failed = 0
    for i, (fam, g) in enumerate(corpus(args.count, args.max_n, args.seed)):
        for prob in ("vc", "is"):
            alg = get_algebra(prob)
            for k in range(args.max_k + 1):
                got = extract(condense(g, k, alg, cfg))
                want = oracle.brute_count(g, k, prob)
                checked += 1
                if got != want:
                    failed += 1
                    print(f"MISMATCH graph {i} ({fam}, n={len(g)}) {prob} k={k}: {got} != {want}")
    print(f"selftest: {checked - failed}/{checked} agree with the oracle")
    return EX_OK if failed == 0 else EX_SOFTWARE


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sparsecount", description="Count size-k vertex sets via a compactor.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    knobs = _Parser(add_help=False)
    knobs.add_argument("--t", type=int, default=0, help="treewidth of the modulator (default 0)")
    knobs.add_argument("--r", type=int, default=4, help="cluster threshold h (default 4)")
    knobs.add_argument("--b", type=int, default=8, help="region size parameter (default 8)")
    knobs.add_argument("--d", type=int, default=5, help="region boundary bound (default 5)")
    knobs.add_argument("--c", type=int, default=4, help="modulator slack factor (default 4)")
    knobs.add_argument("--seed", type=int, default=0)
    knobs.add_argument("--modulator-file", type=Path, default=None, help="whitespace-separated vertex names")
    knobs.add_argument("-v", "--verbose", action="count", default=0)

    problem = _Parser(add_help=False)
    problem.add_argument("--problem", choices=PROBLEMS, default="vc")
    problem.add_argument("-k", type=int, required=True)

    for name, fn, helptext in (
        ("count", _cmd_count, "condense then extract"),
        ("condense", _cmd_condense, "write a compactor file to stdout"),
        ("decompose", _cmd_decompose, "print the protrusion decomposition"),
    ):
        sp = sub.add_parser(name, parents=[knobs, problem], help=helptext)
        sp.add_argument("graph", help="edge list file, or - for stdin")
        sp.set_defaults(func=fn)

    sp = sub.add_parser("extract", parents=[knobs], help="count from a compactor file")
    sp.add_argument("file")
    sp.set_defaults(func=_cmd_extract)

    sp = sub.add_parser("oracle", parents=[knobs, problem], help="brute-force count")
    sp.add_argument("graph")
    sp.set_defaults(func=_cmd_oracle)

    sp = sub.add_parser("modulator", parents=[knobs], help="approximate a t-treewidth modulator")
    sp.add_argument("-k", type=int, required=True)
    sp.add_argument("graph")
    sp.set_defaults(func=_cmd_modulator)

    sp = sub.add_parser("selftest", parents=[knobs], help="compare the pipeline with the oracle")
    sp.add_argument("--max-n", type=int, default=10)
    sp.add_argument("--max-k", type=int, default=3)
    sp.add_argument("--count", type=int, default=20)
    sp.set_defaults(func=_cmd_selftest)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "k", 0) < 0:
            raise UsageError("k must be non-negative")
        logging.basicConfig(level=logging.DEBUG if args.verbose > 1 else logging.WARNING)
        return args.func(args)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EX_USAGE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EX_NOINPUT
    except (UnsupportedScale, ParseError, CompactorFormatError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EX_DATAERR
    except (PipelineError, InvariantBreach) as e:
        print(f"pipeline failure: {e}", file=sys.stderr)
        return EX_SOFTWARE
    except SparseCountError as e:
        print(f"error: {e}", file=sys.stderr)
        return EX_SOFTWARE
    except ValueError as e:
        # e.g. a problem that needs --modulator-file, or a bad modulator
        print(f"error: {e}", file=sys.stderr)
        return EX_USAGE


def main() -> None:
    sys.exit(run())
