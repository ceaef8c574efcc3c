import numpy as np
import pytest

import brute_cases
import fuzzing
import oracles
from conftest import planted
from motif_forge.candidates import CandidateMotifSet
from motif_forge.constraints import ConstraintSpec, HardConstraintBundle, Mask, PairwiseConstraint, assemble
from motif_forge.constraints import catalogue as cat
from motif_forge.core import Segment, is_coincident
from motif_forge.discovery import (DiscoveryConfig, discover, filter_candidate_motif_set,
                                   find_best_admissible_motif_set)
from motif_forge.loco import LocoParams, compute_local_warping_paths
from motif_forge.selfcheck import hard_violations
from motif_forge.synth import SynthSpec, synthesize


def cand(segs, scores=None):
    segs = tuple(Segment(b, e) for b, e in segs)
    scores = scores or tuple(float(len(segs) - k) for k in range(len(segs)))
    return CandidateMotifSet(segs, tuple(scores), tuple(s.length for s in segs))


# -- filter --------------------------------------------------------------------------

def test_filter_examples():
    c = cand([(0, 9), (5, 14), (20, 29)])
    out = filter_candidate_motif_set(c, None, cat.NotCoincident(0.0, symmetric=True))
    assert list(out.motifs) == [Segment(0, 9), Segment(20, 29)]
    five = cand([(10 * k, 10 * k + 4) for k in range(5)])
    assert list(filter_candidate_motif_set(five, k_max_discard=2).motifs) == list(five.motifs[:2])
    assert filter_candidate_motif_set(five) == five


def test_filter_matches_transcription():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        k = int(rng.integers(1, 9))
        segs = []
        for _ in range(k):
            b = int(rng.integers(0, 80))
            segs.append((b, b + int(rng.integers(0, 20))))
        c = cand(segs, sorted(rng.uniform(0, 10, size=k), reverse=True))
        l_lo = int(rng.integers(1, 10))
        h_mot = cat.LengthRange(l_lo, l_lo + int(rng.integers(0, 15)))
        h_same = cat.NotCoincident(float(rng.choice([0.0, 0.3, 0.7])), symmetric=bool(rng.integers(2)))
        cap = None if rng.uniform() < 0.3 else int(rng.integers(1, 6))
        want = oracles.filter_transcription(list(c.motifs), h_mot, h_same, cap)
        assert list(filter_candidate_motif_set(c, h_mot, h_same, cap).motifs) == want


# -- find_best_admissible_motif_set -----------------------------------------------------

@pytest.fixture(scope="module")
def two_copy_series():
    x, truth = planted(300, 50, [30, 200], seed=1)
    return x, truth


def test_fully_masked_gives_nothing(two_copy_series):
    x, _ = two_copy_series
    paths = compute_local_warping_paths(x, LocoParams(rho=0.8))
    b = HardConstraintBundle(h_mot=(cat.StartMask(Mask(np.zeros(len(x)))),))
    assert find_best_admissible_motif_set(b, lambda m: 1.0, paths, len(x)) is None


def test_unconstrained_recovers_copies(two_copy_series):
    x, truth = two_copy_series
    # a strict rho; loose ones let a long near-diagonal pair cover the whole series
    paths = compute_local_warping_paths(x, LocoParams(rho=0.9))
    best = find_best_admissible_motif_set(HardConstraintBundle(), lambda m: 1.0, paths, len(x))
    got = sorted(best.motif_set.motifs, key=lambda s: s.start)
    assert len(got) == 2
    for g, t in zip(got, truth):
        assert abs(g.start - t.start) <= 2 and abs(g.end - t.end) <= 2


@pytest.mark.parametrize("seed", range(20))
def test_matches_brute_force(seed):
    paths, n, min_length, bundle, d, kw = brute_cases.brute_case(seed)
    got = find_best_admissible_motif_set(bundle, d, paths, n, min_length=min_length)
    want = oracles.brute_best(paths, n, min_length, **kw)
    if want is None:
        assert got is None
        return
    assert got is not None
    assert got.weighted_quality == pytest.approx(want[0], abs=1e-9)
    assert got.motif_set.representative == want[1]


def test_threads_do_not_change_result(two_copy_series):
    x, _ = two_copy_series
    paths = compute_local_warping_paths(x, LocoParams(rho=0.7))
    b = HardConstraintBundle(h_mots_same=(cat.NotCoincident(0.2, symmetric=True),))
    one = find_best_admissible_motif_set(b, lambda m: 1.0, paths, len(x))
    four = find_best_admissible_motif_set(b, lambda m: 1.0, paths, len(x), threads=4)
    assert one == four


def test_pruning_is_exact():
    # opaque pair predicate disables exact bounds; results must not change
    x, _ = planted(150, 25, [10, 70, 115], seed=4, noise=0.05)
    paths = compute_local_warping_paths(x, LocoParams(rho=0.7))
    exact = HardConstraintBundle(h_mots_same=(cat.NotCoincident(0.1, symmetric=True),))
    nu = 0.1
    opaque = HardConstraintBundle(h_mots_same=(
        lambda a, b: not is_coincident(a, b, nu) and not is_coincident(b, a, nu),))
    r1 = find_best_admissible_motif_set(exact, lambda m: 1.0, paths, len(x))
    r2 = find_best_admissible_motif_set(opaque, lambda m: 1.0, paths, len(x))
    assert r1.motif_set == r2.motif_set
    assert r1.weighted_quality == r2.weighted_quality


# -- discover -----------------------------------------------------------------------------

def test_discover_kappa1(two_copy_series):
    x, truth = two_copy_series
    r = discover(x, DiscoveryConfig(kappa=1, loco=LocoParams(rho=0.9)))
    got = sorted(r.motif_sets[0].motifs, key=lambda s: s.start)
    assert [abs(g.start - t.start) <= 2 and abs(g.end - t.end) <= 2 for g, t in zip(got, truth)] == [True, True]
    assert r.trace[0]["selected"] == 0


def test_overlap_between_single_pattern():
    x, _ = planted(240, 40, [20, 150], seed=2)
    specs = [ConstraintSpec("overlap_between", {"nu": 0.0})]
    bundles, ds, pairwise = assemble(specs, 2, len(x))
    r = discover(x, DiscoveryConfig(2, LocoParams(rho=0.8), bundles, ds, pairwise))
    a, b = r.motif_sets
    assert a is not None
    if b is not None:
        assert not any(is_coincident(s, t, 0.0) for s in a.motifs for t in b.motifs)
        assert not any(is_coincident(t, s, 0.0) for s in a.motifs for t in b.motifs)


@pytest.fixture(scope="module")
def three_patterns():
    spec = SynthSpec(n=1400, patterns=(
        {"template_length": 40, "occurrences": 3},
        {"template_length": 80, "occurrences": 3},
        {"template_length": 120, "occurrences": 3}), seed=5, min_gap=10)
    return synthesize(spec)


def test_per_index_length_windows(three_patterns):
    x, _ = three_patterns
    windows = [(30, 50), (65, 95), (100, 140)]
    specs = [ConstraintSpec("length_range", {"l_min": lo, "l_max": hi}, applies_to=i)
             for i, (lo, hi) in enumerate(windows)]
    specs.append(ConstraintSpec("overlap_within", {"nu": 0.25}))
    specs.append(ConstraintSpec("overlap_between", {"nu": 0.25}))
    bundles, ds, pairwise = assemble(specs, 3, x.n, x)
    r = discover(x, DiscoveryConfig(3, LocoParams(rho=0.9, l_min_path=30), bundles, ds, pairwise))
    for i, (lo, hi) in enumerate(windows):
        if r.motif_sets[i] is not None:
            assert all(lo <= s.length <= hi for s in r.motif_sets[i].motifs)
    assert sum(m is not None for m in r.motif_sets) >= 2


def test_greedy_qualities_nonincreasing_when_shared():
    x, _ = planted(300, 30, [10, 100, 200], seed=3, noise=0.1)
    specs = [ConstraintSpec("overlap_within", {"nu": 0.0}), ConstraintSpec("overlap_between", {"nu": 0.0})]
    bundles, ds, pairwise = assemble(specs, 3, len(x))
    r = discover(x, DiscoveryConfig(3, LocoParams(rho=0.8), bundles, ds, pairwise, same_for_all=True))
    q = [r.weighted_qualities[i] for i, _ in r.discovered]
    assert len(q) == 3
    assert all(a >= b for a, b in zip(q, q[1:]))


def test_same_for_all_matches_per_index():
    x, _ = planted(200, 25, [10, 90, 160], seed=6, noise=0.1)
    specs = [ConstraintSpec("overlap_within", {"nu": 0.1}), ConstraintSpec("overlap_between", {"nu": 0.1})]
    bundles, ds, pairwise = assemble(specs, 2, len(x))
    shared = discover(x, DiscoveryConfig(2, LocoParams(rho=0.7), bundles, ds, pairwise, same_for_all=True))
    plain = discover(x, DiscoveryConfig(2, LocoParams(rho=0.7), bundles, ds, pairwise))
    assert shared.motif_sets == plain.motif_sets


def test_empty_slots_never_selected():
    x = np.random.default_rng(8).normal(size=120)
    r = discover(x, DiscoveryConfig(3, LocoParams(rho=0.95)))
    selected = {t["selected"] for t in r.trace if t["selected"] is not None}
    assert {i for i, m in enumerate(r.motif_sets) if m is not None} == selected
    assert len(r.trace) <= 3


def test_mpv_and_repr_masks():
    x, _ = planted(260, 30, [10, 60, 150, 210], seed=9)
    n = len(x)
    m = np.ones(n)
    m[:100] = 0
    specs = [ConstraintSpec("mpv_mask", {"mask": m.tolist()})]
    bundles, ds, pairwise = assemble(specs, 2, n, x)
    r = discover(x, DiscoveryConfig(2, LocoParams(rho=0.8), bundles, ds, pairwise))
    reps = [s.representative for s in r.motif_sets if s is not None]
    assert reps and all(m[rep.start] == 1 for rep in reps)

    begin = np.zeros(n)
    end = np.zeros(n)
    begin[[10, 60, 150, 210]] = 1
    end[[39, 89, 179, 239]] = 1
    specs = [ConstraintSpec("repr_begin_end_masks", {"begin_mask": begin.tolist(), "end_mask": end.tolist()})]
    bundles, ds, pairwise = assemble(specs, 1, n, x)
    r = discover(x, DiscoveryConfig(1, LocoParams(rho=0.8), bundles, ds, pairwise))
    rep = r.motif_sets[0].representative
    assert begin[rep.start] == 1 and end[rep.end] == 1


def test_soft_mpv_weights_quality():
    x, _ = planted(200, 30, [10, 120], seed=10)
    n = len(x)
    specs = [ConstraintSpec("mpv_mask", {"mask": [0.5] * n}, "soft")]
    bundles, ds, pairwise = assemble(specs, 1, n, x)
    r = discover(x, DiscoveryConfig(1, LocoParams(rho=0.8), bundles, ds, pairwise))
    assert r.desirabilities[0] == 0.5
    assert r.weighted_qualities[0] == pytest.approx(0.5 * r.fitnesses[0])


@pytest.mark.parametrize("seed", range(30))
def test_soundness_fuzz(seed):
    x, specs, cfg = fuzzing.random_case(seed, n_max=200)
    r = discover(x, cfg)
    sets = [list(m.motifs) if m is not None else None for m in r.motif_sets]
    assert oracles.spec_violations(sets, specs, cfg.kappa, x) == []
    assert hard_violations(r, cfg) == []


def test_determinism(two_copy_series):
    x, _ = two_copy_series
    cfg = DiscoveryConfig(2, LocoParams(rho=0.7), pairwise=[
        PairwiseConstraint(0, 1, motif_level=cat.NotCoincident(0.0)),
        PairwiseConstraint(1, 0, motif_level=cat.NotCoincident(0.0))])
    a = discover(x, cfg)
    cfg.threads = 3
    b = discover(x, cfg)
    assert a.motif_sets == b.motif_sets and a.weighted_qualities == b.weighted_qualities
    assert a.trace == b.trace


def test_config_validation():
    with pytest.raises(ValueError):
        DiscoveryConfig(kappa=0)
    with pytest.raises(ValueError):
        DiscoveryConfig(kappa=2, bundles=[HardConstraintBundle()])
    with pytest.raises(ValueError):
        DiscoveryConfig(kappa=2, pairwise=[PairwiseConstraint(0, 2, motif_level=cat.NotCoincident(0.0))])
