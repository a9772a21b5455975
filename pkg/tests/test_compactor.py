import random

import pytest

from conftest import named
from sparsecount.algebra import ds_algebra, get_algebra, is_algebra, vc_algebra
from sparsecount.compactor import (
    CompactorFile,
    condense,
    contributions,
    count_end_to_end,
    deserialize,
    extract,
    extract_explicit,
    serialize,
)
from sparsecount.config import Config
from sparsecount.errors import ChecksumError, CompactorFormatError
from sparsecount.generators import complete, corpus, edgeless, star
from sparsecount.graph import BStructure
from sparsecount.modulator import vc_modulator_2approx
from sparsecount.oracle import brute_count, definitional_state


def test_condense_examples(c3):
    g, _ = c3
    f = condense(g, 2, vc_algebra())
    assert not f.null and extract(f) == 3
    null = condense(complete(8), 1, vc_algebra(), Config(c=2))
    assert null.null and extract(null) == 0
    assert extract(condense(edgeless(5), 2, vc_algebra())) == 10


def test_extract_examples(c3, p3, c4):
    assert extract(CompactorFile("vc", 3, null=True)) == 0
    assert extract(condense(c3[0], 2, vc_algebra())) == 3
    assert extract(condense(p3[0], 1, vc_algebra())) == 1
    assert extract(condense(c4[0], 2, is_algebra())) == 2


def test_end_to_end_examples(c4):
    assert count_end_to_end(c4[0], 2, vc_algebra()) == 2
    assert count_end_to_end(star(3), 1, vc_algebra()) == 1
    assert count_end_to_end(edgeless(4), 0, vc_algebra()) == 1
    assert count_end_to_end(c4[0], 0, vc_algebra()) == 0
    with pytest.raises(ValueError):
        condense(c4[0], -1, vc_algebra())


@pytest.mark.parametrize("name", ["vc", "is", "ds"])
def test_matches_oracle_on_corpus(name):
    alg = get_algebra(name)
    for fam, g in corpus(40, 12, seed=7):
        mod = vc_modulator_2approx(g) if name == "ds" else None
        for k in range(5):
            assert count_end_to_end(g, k, alg, Config(), mod) == brute_count(g, k, name), (fam, k)


def test_explicit_extractors_agree():
    for _, g in corpus(40, 12, seed=8):
        for name in ("vc", "is"):
            for k in range(5):
                f = condense(g, k, get_algebra(name))
                if f.s > 3:
                    continue
                want = extract(f)
                assert extract_explicit(f) == want
                assert extract_explicit(f, prune=False) == want


def test_contribution_bijection():
    """Contributions regroup the oracle's solutions by center part, states and interior sizes."""
    rng = random.Random(3)
    checked = 0
    for _, g in corpus(30, 10, seed=9):
        for name in ("vc", "is"):
            alg = get_algebra(name)
            for k in range(4):
                f = condense(g, k, alg)
                if f.null:
                    continue
                from sparsecount.protrusion import full_pipeline_decomposition

                pd = full_pipeline_decomposition(g, k, alg, Config())
                order = g.sort(pd.center)
                idx = {v: i for i, v in enumerate(order)}
                import itertools

                buckets = {}
                for a in itertools.combinations(g.order(), k):
                    a = frozenset(a)
                    if not alg.predicate(g, a):
                        continue
                    a0 = frozenset(idx[v] for v in a & pd.center)
                    states, sizes = [], []
                    for p in pd.protrusions:
                        ann, payload = definitional_state(name, p.graph, p.boundary, a & p.graph.vertices)
                        states.append((ann, payload))
                        sizes.append(len(a & p.interior))
                    key = (a0, tuple(states), tuple(sizes))
                    buckets[key] = buckets.get(key, 0) + 1
                got = {
                    (a0, tuple((s.annotated_boundary, s.payload) for s in states), zeta): c
                    for a0, states, zeta, c in contributions(f)
                }
                assert got == buckets
                checked += 1
    assert checked > 10


def test_serialization_round_trip_and_null_shape(c3):
    f = condense(c3[0], 2, vc_algebra())
    assert deserialize(serialize(f)) == f
    null = condense(complete(8), 1, vc_algebra(), Config(c=2))
    lines = serialize(null).decode().splitlines()
    assert lines[0] == "COMPACTOR v1 vc k=1" and lines[1].startswith("CHECKSUM ") and lines[2:] == ["NULL"]
    assert deserialize(serialize(null)) == null


def test_serialization_is_deterministic(c4):
    a = serialize(condense(c4[0], 3, vc_algebra()))
    b = serialize(condense(named("a b\nb c\nc d\nd a")[0], 3, vc_algebra()))
    assert a == b


def test_tampering_is_detected(c3):
    data = serialize(condense(c3[0], 2, vc_algebra()))
    text = data.decode()
    pos = text.rindex(" ") + 1  # last count digit
    bad = text[:pos] + str((int(text[pos]) + 1) % 10) + text[pos + 1 :]
    with pytest.raises(ChecksumError):
        deserialize(bad.encode())


@pytest.mark.parametrize(
    "mutate",
    [
        lambda t: t.replace("COMPACTOR v1", "COMPACTOR v2", 1),
        lambda t: t.replace("CHECKSUM", "CHECKSUN", 1),
        lambda t: t.rstrip("\n"),
        lambda t: "",
    ],
)
def test_malformed_files(mutate, c3):
    text = serialize(condense(c3[0], 2, vc_algebra())).decode()
    with pytest.raises(CompactorFormatError):
        deserialize(mutate(text))
    with pytest.raises(CompactorFormatError):
        deserialize(b"\xff\xfe")


def test_wrong_version_with_valid_checksum(c3):
    from sparsecount.compactor import _checksum

    text = serialize(condense(c3[0], 2, vc_algebra())).decode()
    lines = text.splitlines()
    lines[0] = lines[0].replace("v1", "v2")
    lines[1] = "CHECKSUM " + _checksum(lines[0], lines[2:])
    with pytest.raises(CompactorFormatError, match="version"):
        deserialize(("\n".join(lines) + "\n").encode())


def test_stats_are_reported(c4):
    f = condense(c4[0], 2, vc_algebra())
    for key in ("alpha", "beta", "gamma", "states", "stored_values", "seconds"):
        assert key in f.stats
    assert f.stats["stored_values"] == f.stored_values()
