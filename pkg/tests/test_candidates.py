import numpy as np
import pytest

import oracles
from motif_forge.candidates import (CandidateMotifSet, PathIndex, filtered_bounds, fitness, fitness_from_arrays,
                                    generate_candidate_motif_set)
from motif_forge.core import Segment
from motif_forge.loco import LocoParams, compute_local_warping_paths


def _seg(b, e):
    return Segment(b, e)


def test_no_similar_region_gives_alpha_only():
    x = np.random.default_rng(0).normal(size=80)
    paths = compute_local_warping_paths(x, LocoParams(rho=1.0))
    c = generate_candidate_motif_set(_seg(10, 29), paths)
    assert list(c.motifs) == [_seg(10, 29)]
    assert c.scores == (20.0,)


def test_three_copies(three_copies):
    paths = compute_local_warping_paths(three_copies, LocoParams(rho=0.5))
    c = generate_candidate_motif_set(_seg(0, 49), paths)
    assert c.motifs[0] == _seg(0, 49)
    for true_start in (50, 100):
        assert any(abs(m.start - true_start) <= 2 and abs(m.end - true_start - 49) <= 2 for m in c.motifs)


def test_ranking_invariants(three_copies):
    paths = compute_local_warping_paths(three_copies, LocoParams(rho=0.6))
    for b, e in [(0, 49), (10, 30), (60, 120)]:
        c = generate_candidate_motif_set(_seg(b, e), paths)
        assert c.motifs[0] == _seg(b, e) and c.scores[0] == e - b + 1
        rest = list(zip(c.scores[1:], c.motifs[1:]))
        keys = [(-s, m.start, m.end) for s, m in rest]
        assert keys == sorted(keys)
        assert len(set(c.motifs)) == len(c.motifs)


def test_matches_oracle():
    rng = np.random.default_rng(7)
    for trial in range(5):
        x = np.cumsum(rng.normal(size=70))
        paths = compute_local_warping_paths(x, LocoParams(rho=0.7))
        for _ in range(20):
            b = int(rng.integers(0, 60))
            e = int(rng.integers(b + 4, 70))
            c = generate_candidate_motif_set(_seg(b, e), paths)
            segs, scores, steps = oracles.candidate(_seg(b, e), paths)
            assert list(c.motifs) == segs
            assert np.allclose(c.scores, scores, rtol=1e-12)
            assert list(c.steps) == steps


def test_table_matches_scalar():
    rng = np.random.default_rng(3)
    x = np.cumsum(rng.normal(size=90))
    paths = compute_local_warping_paths(x, LocoParams(rho=0.6))
    idx = PathIndex(paths)
    bs, es = np.array([b for b in range(0, 85, 3) for e in range(b + 5, 90, 7)]), \
        np.array([e for b in range(0, 85, 3) for e in range(b + 5, 90, 7)])
    table = idx.table(bs, es)
    assert len(table) == len(bs)
    for a in range(len(bs)):
        c = generate_candidate_motif_set(_seg(int(bs[a]), int(es[a])), paths)
        t = table.candidate(a)
        # prefix sums can reorder tail entries whose scores agree to ~1e-15
        assert dict(zip(t.motifs, t.steps)) == dict(zip(c.motifs, c.steps))
        want = dict(zip(c.motifs, c.scores))
        assert all(abs(want[m] - s) <= 1e-12 for m, s in zip(t.motifs, t.scores))
        resolvable = [m for m, s in zip(c.motifs, c.scores) if s > 1e-9]
        assert list(t.motifs[:len(resolvable)]) == resolvable
        assert table.raw_coverage[a] == oracles.union_size(c.motifs)


def test_fitness_examples():
    # two exact copies covering everything
    c = CandidateMotifSet((_seg(0, 49), _seg(50, 99)), (50.0, 50.0), (50, 50))
    assert fitness(c, 100) == pytest.approx(1.0)
    c = CandidateMotifSet((_seg(0, 9), _seg(10, 19)), (10.0, 10.0), (10, 10))
    assert fitness(c, 60) == pytest.approx(0.5, abs=1e-12)
    with pytest.raises(ValueError, match="not a motif set"):
        fitness(CandidateMotifSet((_seg(0, 9),), (10.0,), (10,)), 60)


def test_fitness_warped_steps_normalise():
    # a warped alignment of 15 cells at similarity 1 still averages to 1
    c = CandidateMotifSet((_seg(0, 9), _seg(20, 24)), (10.0, 15.0), (10, 15))
    assert fitness(c, 15) == pytest.approx(1.0)


def test_fitness_grows_with_disjoint_good_motif():
    rng = np.random.default_rng(2)
    for _ in range(200):
        k = int(rng.integers(2, 5))
        segs = [_seg(12 * i, 12 * i + 9) for i in range(k)]
        steps = [10] * k
        per_cell = rng.uniform(0.3, 1.0, size=k)
        per_cell[0] = 1.0
        scores = list(per_cell * 10)
        base = fitness(CandidateMotifSet(tuple(segs), tuple(scores), tuple(steps)), 200)
        s_bar = float(np.mean(per_cell))
        extra = rng.uniform(s_bar, 1.0)
        more = CandidateMotifSet(tuple(segs + [_seg(150, 159)]), tuple(scores + [extra * 10]), tuple(steps + [10]))
        assert fitness(more, 200) > base


def test_fitness_bounds_and_oracle():
    rng = np.random.default_rng(4)
    for _ in range(300):
        k = int(rng.integers(2, 6))
        n = 100
        segs = []
        for _ in range(k):
            b = int(rng.integers(0, 90))
            segs.append(_seg(b, int(rng.integers(b, min(n, b + 20)))))
        steps = [s.length + int(rng.integers(0, 3)) for s in segs]
        scores = [t * float(rng.uniform(0, 1)) for t in steps]
        v = fitness_from_arrays(scores, steps, oracles.union_size(segs), n)
        assert 0.0 <= v <= 1.0
        assert v == pytest.approx(oracles.fitness(scores, steps, segs, n), rel=1e-12)


def test_filtered_bounds_exact_and_upper():
    from motif_forge.candidates import PAIR_NOT_COINCIDENT
    from motif_forge.constraints.catalogue import NotCoincident
    from motif_forge.discovery import filter_candidate_motif_set

    rng = np.random.default_rng(9)
    x = np.cumsum(rng.normal(size=80))
    paths = compute_local_warping_paths(x, LocoParams(rho=0.6))
    bs = np.array([b for b in range(0, 70, 4) for e in range(b + 6, 80, 9)])
    es = np.array([e for b in range(0, 70, 4) for e in range(b + 6, 80, 9)])
    table = PathIndex(paths).table(bs, es)
    ok = np.ones(len(table.starts), dtype=bool)
    nu = 0.25
    exact = filtered_bounds(table, ok, 80, None, [(PAIR_NOT_COINCIDENT, nu)])
    loose = filtered_bounds(table, ok, 80)
    pred = NotCoincident(nu)
    for a in range(len(table)):
        f = filter_candidate_motif_set(table.candidate(a), None, pred)
        want = fitness(f, 80) if len(f) >= 2 else 0.0
        assert exact[a] == pytest.approx(want, rel=1e-12, abs=1e-15)
        assert loose[a] >= want - 1e-12
