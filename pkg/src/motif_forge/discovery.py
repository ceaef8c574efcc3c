"""Greedy discovery of motif sets under hard constraints and desirabilities.

Each round searches, for every motif set still to be discovered, the best
admissible candidate (fitness scaled by desirability), keeps the overall
winner and rewrites the pairwise constraints that involve it as ordinary
constraints on the remaining motif sets.
"""
from __future__ import annotations

import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .candidates import (PAIR_NON_CONSECUTIVE, PAIR_NOT_COINCIDENT, PAIR_NOT_COINCIDENT_SYMMETRIC,
                         CandidateMotifSet, CandidateTable, PathIndex, filtered_bounds, fitness_from_arrays)
from .constraints.base import (Desirability, HardConstraintBundle, PairwiseConstraint,
                               as_desirability, as_motif_predicate, as_pair_predicate,
                               compose_desirabilities, fold_pairwise)
from .constraints.catalogue import NonConsecutive, NotCoincident
from .core import Segment, as_array, coverage
from .loco import LocoParams, WarpingPath, compute_local_warping_paths

logger = logging.getLogger(__name__)

__all__ = [
    "DiscoveryConfig",
    "DiscoveryResult",
    "BestMotifSet",
    "filter_candidate_motif_set",
    "find_best_admissible_motif_set",
    "discover",
]


@dataclass
class DiscoveryConfig:
    """Inputs of a discovery run.

    ``bundles`` and ``desirabilities`` hold one entry per motif set (empty
    bundles and constant-1 desirabilities when omitted). ``same_for_all``
    asserts that every index has the same constraints, so one search per round
    suffices. ``normalize`` z-normalises each dimension before the similarity
    computation; constraints always see the raw series.
    """

    kappa: int = 1
    loco: LocoParams = field(default_factory=LocoParams)
    bundles: list[HardConstraintBundle] | None = None
    desirabilities: list | None = None
    pairwise: list[PairwiseConstraint] = field(default_factory=list)
    same_for_all: bool = False
    stride: int = 1
    threads: int = 1
    normalize: bool = True

    def __post_init__(self):
        if self.kappa < 1:
            raise ValueError("kappa must be at least 1")
        if self.stride < 1:
            raise ValueError("stride must be at least 1")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")
        if self.bundles is None:
            self.bundles = [HardConstraintBundle() for _ in range(self.kappa)]
        if self.desirabilities is None:
            self.desirabilities = [compose_desirabilities([]) for _ in range(self.kappa)]
        self.desirabilities = [as_desirability(d) for d in self.desirabilities]
        if len(self.bundles) != self.kappa or len(self.desirabilities) != self.kappa:
            raise ValueError("need one bundle and one desirability per motif set")
        for c in self.pairwise:
            if not (0 <= c.i < self.kappa and 0 <= c.j < self.kappa):
                raise ValueError(f"pairwise constraint ({c.i}, {c.j}) out of range")


class BestMotifSet(NamedTuple):
    motif_set: CandidateMotifSet
    weighted_quality: float
    fitness: float
    desirability: float


@dataclass
class DiscoveryResult:
    motif_sets: list[CandidateMotifSet | None]
    weighted_qualities: list[float]
    fitnesses: list[float]
    desirabilities: list[float]
    trace: list[dict] = field(default_factory=list)

    @property
    def discovered(self) -> list[tuple[int, CandidateMotifSet]]:
        """``(index, motif set)`` in the order of discovery."""
        return [(t["selected"], self.motif_sets[t["selected"]]) for t in self.trace
                if t["selected"] is not None]


def filter_candidate_motif_set(c: CandidateMotifSet, h_mot=None, h_mots_same=None,
                               k_max_discard: int | None = None) -> CandidateMotifSet:
    """Greedily keep motifs in rank order while the constraints allow it.

    A motif is appended when fewer than ``k_max_discard`` motifs are kept so
    far, it satisfies ``h_mot``, and ``h_mots_same(motif, kept)`` holds for
    every motif already kept.
    """
    h_mot = as_motif_predicate(h_mot) if h_mot is not None else None
    h_mots_same = as_pair_predicate(h_mots_same) if h_mots_same is not None else None
    cap = k_max_discard if k_max_discard is not None else len(c) + 1
    kept: list[int] = []
    for idx, beta in enumerate(c.motifs):
        if len(kept) >= cap:
            break
        if h_mot is not None and not h_mot(beta):
            continue
        if h_mots_same is not None and not all(h_mots_same(beta, c.motifs[k]) for k in kept):
            continue
        kept.append(idx)
    return c.subset(kept)


def _representative_grid(n: int, min_length: int, stride: int, bundle: HardConstraintBundle):
    bs, es = [], []
    # rows of the (b, e) grid are generated in blocks to bound memory
    block = max(1, 2_000_000 // max(n, 1))
    starts = np.arange(0, n, stride)
    for lo in range(0, len(starts), block):
        b = starts[lo:lo + block]
        b_rep = []
        e_rep = []
        for bb in b:
            e = np.arange(bb + min_length - 1, n, stride)
            if len(e):
                b_rep.append(np.full(len(e), bb))
                e_rep.append(e)
        if not b_rep:
            continue
        b_all = np.concatenate(b_rep)
        e_all = np.concatenate(e_rep)
        ok = bundle.motif_mask(b_all, e_all)
        idx = np.flatnonzero(ok)
        ok2 = bundle.repr_mask(b_all[idx], e_all[idx])
        idx = idx[ok2]
        bs.append(b_all[idx])
        es.append(e_all[idx])
    if not bs:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    return np.concatenate(bs).astype(np.int64), np.concatenate(es).astype(np.int64)


def _evaluate(table: CandidateTable, ok: np.ndarray, a: int, bundle: HardConstraintBundle,
              d: Desirability, n: int):
    """Filter, check and score the candidate of representative ``a``."""
    lo, hi = int(table.offsets[a]), int(table.offsets[a + 1])
    cap = bundle.k_max_discard if bundle.k_max_discard is not None else hi - lo + 1
    kept: list[int] = []
    segs: list[Segment] = []
    for idx in range(lo, hi):
        if len(kept) >= cap:
            break
        if not ok[idx]:
            continue
        beta = Segment(int(table.starts[idx]), int(table.ends[idx]))
        if bundle.h_mots_same and not all(bundle.pair_ok(beta, s) for s in segs):
            continue
        kept.append(idx)
        segs.append(beta)
    if len(kept) < 2:
        return "too_few_motifs", None
    cand = CandidateMotifSet(tuple(segs), tuple(float(table.scores[i]) for i in kept),
                             tuple(int(table.steps[i]) for i in kept))
    if not bundle.set_ok(cand):
        return "h_mset_others", None
    phi = fitness_from_arrays(cand.scores, cand.steps, coverage(cand), n)
    des = d(cand)
    q = phi * des
    if q <= 0.0:
        return "zero_quality", None
    return "admissible", BestMotifSet(cand, q, phi, des)


def _better(q: float, rep: Segment, best: BestMotifSet | None) -> bool:
    if best is None:
        return True
    if q != best.weighted_quality:
        return q > best.weighted_quality
    r = best.motif_set.representative
    return (rep.start, rep.end) < (r.start, r.end)


def _pair_codes(bundle: HardConstraintBundle):
    # within-set predicates the bounding kernel can replay; None if any is opaque
    codes = []
    for p in bundle.h_mots_same:
        if type(p) is NotCoincident:
            codes.append((PAIR_NOT_COINCIDENT_SYMMETRIC if p.symmetric else PAIR_NOT_COINCIDENT, p.nu))
        elif type(p) is NonConsecutive:
            codes.append((PAIR_NON_CONSECUTIVE, p.l_buffer))
        else:
            return None
    return codes


# both fixed so that results and traces do not depend on the thread count
_BATCH = 64
_CHUNK = 50_000
# slack on the pruning bound against rounding differences
_BOUND_RTOL = 1e-12


def find_best_admissible_motif_set(bundle: HardConstraintBundle, d, paths, n: int, *,
                                   min_length: int | None = None, stride: int = 1,
                                   threads: int = 1, stats: Counter | None = None
                                   ) -> BestMotifSet | None:
    """Best admissible candidate over all representatives ``[b:e]``.

    Representatives of at least ``min_length`` samples (default 5) are tried
    on the ``stride`` grid. Ties go to the smaller ``(b, e)``.

    Every representative first gets an upper bound on its fitness (the exact
    fitness of its filtered candidate when the within-set predicates are
    overlap or spacing constraints, else one derived from coverage). Since
    desirabilities are at most 1, representatives are then scored fully in
    decreasing order of that bound until it drops below the best quality
    found, which leaves the result unchanged.
    """
    index = paths if isinstance(paths, PathIndex) else PathIndex(list(paths))
    d = as_desirability(d)
    min_length = 5 if min_length is None else int(min_length)
    counts = Counter()
    ab, ae = _representative_grid(n, min_length, stride, bundle)
    counts["representatives"] += len(ab)
    codes = _pair_codes(bundle)
    keep_b, keep_e, keep_u = [], [], []
    for lo in range(0, len(ab), _CHUNK):
        cb, ce = ab[lo:lo + _CHUNK], ae[lo:lo + _CHUNK]
        table = index.table(cb, ce)
        ok = bundle.motif_mask(table.starts, table.ends)
        bound = filtered_bounds(table, ok, n, bundle.k_max_discard, codes)
        live = bound > 0.0
        counts["too_few_motifs"] += int(np.count_nonzero(~live))
        keep_b.append(cb[live])
        keep_e.append(ce[live])
        keep_u.append(bound[live])
    best: BestMotifSet | None = None
    if keep_b:
        cb, ce, bound = np.concatenate(keep_b), np.concatenate(keep_e), np.concatenate(keep_u)
        order = np.lexsort((ce, cb, -bound))
        pool = ThreadPoolExecutor(threads) if threads > 1 else None
        try:
            pos = 0
            while pos < len(order):
                if best is not None and bound[order[pos]] < best.weighted_quality * (1 - _BOUND_RTOL):
                    counts["pruned"] += len(order) - pos
                    break
                chunk = order[pos:pos + _BATCH]
                if best is not None:
                    chunk = chunk[bound[chunk] >= best.weighted_quality * (1 - _BOUND_RTOL)]
                pos += _BATCH
                table = index.table(cb[chunk], ce[chunk])
                ok = bundle.motif_mask(table.starts, table.ends)

                def run(a, table=table, ok=ok):
                    return _evaluate(table, ok, a, bundle, d, n)

                slots = range(len(chunk))
                results = pool.map(run, slots) if pool else map(run, slots)
                for reason, res in results:
                    counts[reason] += 1
                    if res is not None and _better(res.weighted_quality, res.motif_set.representative, best):
                        best = res
        finally:
            if pool is not None:
                pool.shutdown()
    if stats is not None:
        stats.update(counts)
    return best


def _pairwise_uniform(pairwise: Sequence[PairwiseConstraint], kappa: int) -> bool:
    """True if the pairwise constraints treat every ordered pair of indices alike."""
    if not pairwise:
        return True
    groups: dict[int, set] = {}
    for c in pairwise:
        key = id(c.motif_level if c.motif_level is not None else c.h_msets)
        groups.setdefault(key, set()).add((c.i, c.j))
    full = {(i, j) for i in range(kappa) for j in range(kappa) if i != j}
    return all(g == full for g in groups.values())


def _znormalize(x: np.ndarray) -> np.ndarray:
    sd = x.std(axis=0)
    sd[sd == 0] = 1.0
    return (x - x.mean(axis=0)) / sd


def discover(x, config: DiscoveryConfig, paths: list[WarpingPath] | None = None) -> DiscoveryResult:
    """Discover up to ``config.kappa`` motif sets in ``x``."""
    xv = as_array(x)
    n = xv.shape[0]
    if paths is None:
        paths = compute_local_warping_paths(_znormalize(xv) if config.normalize else xv, config.loco)
    index = PathIndex(paths)
    kappa = config.kappa
    bundles = list(config.bundles)
    pending = list(range(kappa))
    result = DiscoveryResult([None] * kappa, [0.0] * kappa, [0.0] * kappa, [0.0] * kappa)
    share = config.same_for_all and _pairwise_uniform(config.pairwise, kappa)
    kwargs = dict(min_length=config.loco.l_min_path, stride=config.stride, threads=config.threads)

    while pending:
        stats = Counter()
        found: dict[int, BestMotifSet | None] = {}
        if share:
            res = find_best_admissible_motif_set(bundles[pending[0]], config.desirabilities[pending[0]],
                                                 index, n, stats=stats, **kwargs)
            found = {i: res for i in pending}
        else:
            for i in pending:
                found[i] = find_best_admissible_motif_set(bundles[i], config.desirabilities[i],
                                                          index, n, stats=stats, **kwargs)
        i_star = None
        for i in pending:
            r = found[i]
            if r is not None and (i_star is None or r.weighted_quality > found[i_star].weighted_quality):
                i_star = i
        result.trace.append({
            "selected": i_star,
            "qualities": {i: (found[i].weighted_quality if found[i] else None) for i in pending},
            "representatives": stats["representatives"],
            "evaluated": sum(stats[k] for k in ("admissible", "too_few_motifs", "h_mset_others", "zero_quality")),
            "rejections": {k: stats[k] for k in ("too_few_motifs", "h_mset_others", "zero_quality") if stats[k]},
            "pruned": stats["pruned"],
        })
        if i_star is None:
            break
        best = found[i_star]
        logger.debug("selected motif set %d with quality %.6g", i_star, best.weighted_quality)
        result.motif_sets[i_star] = best.motif_set
        result.weighted_qualities[i_star] = best.weighted_quality
        result.fitnesses[i_star] = best.fitness
        result.desirabilities[i_star] = best.desirability
        pending.remove(i_star)
        for j in pending:
            bundles[j] = fold_pairwise(bundles[j], config.pairwise, j, i_star, best.motif_set)
    return result
