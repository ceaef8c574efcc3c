import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from motif_forge.constraints import assemble
from motif_forge.core import MotifSet, Segment
from motif_forge.errors import ConfigError, DataError
from motif_forge.evaluation import (GroundTruth, derive_benchmark_constraints, evaluate, jaccard,
                                    match_count, match_motif)


def gt2():
    return GroundTruth([[Segment(0, 9), Segment(30, 39)], [Segment(60, 69), Segment(80, 89)]], ["a", "b"])


def test_jaccard_example():
    a, b = Segment(0, 9), Segment(5, 14)
    assert jaccard(a, b) == pytest.approx(1 / 3)
    assert not match_motif(a, b, 0.5)
    assert match_motif(a, b, 0.3)


def test_identical_and_disjoint():
    assert match_motif(Segment(3, 8), Segment(3, 8), 1.0)
    assert not match_motif(Segment(0, 4), Segment(5, 9), 0.01)


def test_threshold_validation():
    with pytest.raises(ValueError):
        match_motif(Segment(0, 1), Segment(0, 1), 0.0)


def test_perfect_discovery():
    gt = gt2()
    r = evaluate([MotifSet(g) for g in gt.motif_sets], gt)
    assert (r.precision, r.recall, r.f1) == (1.0, 1.0, 1.0)
    assert r.per_set_assignment == {0: "a", 1: "b"}


def test_spurious_set_and_ignore():
    gt = gt2()
    disc = [MotifSet(g) for g in gt.motif_sets] + [MotifSet([Segment(100, 109), Segment(120, 129)])]
    r = evaluate(disc, gt)
    assert r.f1 < 1.0
    assert r.precision == pytest.approx(4 / 6)
    r2 = evaluate(disc, gt, ignore_unmatched_sets=True)
    assert r2.f1 == 1.0
    assert r2.ignored_sets == [2]


def test_missed_group():
    gt = gt2()
    r = evaluate([MotifSet(gt.motif_sets[0]), None], gt)
    assert r.recall == 0.5 and r.precision == 1.0
    assert r.per_set_assignment == {0: "a"}


def test_empty_ground_truth():
    with pytest.raises(ValueError, match="no ground truth"):
        evaluate([], GroundTruth([]))


def test_one_to_one_assignment():
    gt = gt2()
    # two copies of the same good set: only one may claim group "a"
    r = evaluate([MotifSet(gt.motif_sets[0]), MotifSet(gt.motif_sets[0])], gt)
    assert r.recall == 0.5 and r.precision == 0.5


def _random_sets(rng, k, n=200):
    out = []
    for _ in range(k):
        segs = []
        for _ in range(int(rng.integers(1, 4))):
            b = int(rng.integers(0, n - 20))
            segs.append(Segment(b, b + int(rng.integers(5, 20))))
        out.append(segs)
    return out


@pytest.mark.parametrize("seed", range(10))
def test_permutation_invariance(seed):
    rng = np.random.default_rng(seed)
    gt = GroundTruth(_random_sets(rng, 3))
    disc = _random_sets(rng, 4)
    base = evaluate(disc, gt)
    for perm in itertools.permutations(range(4)):
        r = evaluate([disc[p] for p in perm], gt)
        assert (r.precision, r.recall, r.f1) == pytest.approx((base.precision, base.recall, base.f1))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.floats(0.05, 0.95), st.floats(0.05, 0.95))
def test_lower_threshold_never_matches_fewer(seed, t1, t2):
    lo, hi = sorted((t1, t2))
    rng = np.random.default_rng(seed)
    gt = GroundTruth(_random_sets(rng, 2))
    disc = _random_sets(rng, 3)
    for a in disc:
        for b in gt.motif_sets:
            assert match_count(a, b, lo) >= match_count(a, b, hi)
    assert evaluate(disc, gt, threshold=lo).recall >= evaluate(disc, gt, threshold=hi).recall


def test_derive_exact_cardinality():
    gt = GroundTruth([[Segment(100 * i, 100 * i + 50) for i in range(10)]])
    (spec,) = derive_benchmark_constraints(gt, "ExactCardinality")
    assert spec.kind == "exact_cardinality" and spec.params["k"] == 10


def test_derive_positive_region():
    gt = GroundTruth([[Segment(100, 199)]])
    (spec,) = derive_benchmark_constraints(gt, "positive_region")
    assert spec.params["theta"] == [50, 249]


def test_derive_start_end_and_length():
    gt = GroundTruth([[Segment(10, 49), Segment(100, 159)]])
    (se,) = derive_benchmark_constraints(gt, "Start- and End-points")
    assert se.params["starts"] == [10, 100] and se.params["ends"] == [49, 159]
    assert se.params["delta_l"] == 12
    (ln,) = derive_benchmark_constraints(gt, "length")
    assert (ln.params["l_min"], ln.params["l_max"]) == (40, 60)


def test_derive_non_consecutive_shared():
    gt = GroundTruth([[Segment(0, 9), Segment(30, 39)], [Segment(60, 69)]])
    (spec,) = derive_benchmark_constraints(gt, "NonConsecutive")
    assert spec.applies_to == "all"
    assert spec.params["l_buffer"] == 10


def test_derive_unknown():
    with pytest.raises(ConfigError):
        derive_benchmark_constraints(gt2(), "bogus")


@pytest.mark.parametrize("start", [40, 50, 100, 150, 160])
def test_soft_region_one_iff_hard(start):
    gt = GroundTruth([[Segment(100, 199)]])
    n = 400
    hard = derive_benchmark_constraints(gt, "positive_region")
    soft = derive_benchmark_constraints(gt, "positive_region_soft")
    bh, _, _ = assemble(hard, 1, n)
    _, ds, _ = assemble(soft, 1, n)
    ms = MotifSet([Segment(start, start + 89), Segment(300, 389)])
    assert (ds[0](ms) == 1.0) == bh[0].set_ok(ms)


def test_ground_truth_round_trip(tmp_path):
    gt = gt2()
    p = tmp_path / "gt.json"
    gt.save(p)
    back = GroundTruth.load(p)
    assert back.motif_sets == gt.motif_sets and back.labels == gt.labels


def test_ground_truth_malformed(tmp_path):
    p = tmp_path / "gt.json"
    p.write_text('{"motif_sets": [{"motifs": [{"start": 1}]}]}')
    with pytest.raises(DataError):
        GroundTruth.load(p)
