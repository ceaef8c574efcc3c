"""Candidate motif sets induced by projecting a representative over the paths."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .core import MotifSet, Segment, coverage
from .loco import WarpingPath, project_path

__all__ = [
    "CandidateMotifSet",
    "generate_candidate_motif_set",
    "fitness",
    "fitness_from_arrays",
    "PathIndex",
    "CandidateTable",
    "filtered_bounds",
]


@dataclass(frozen=True)
class CandidateMotifSet(MotifSet):
    """Motif set generated from a representative.

    ``scores`` are the summed similarities along the aligning subpaths and
    ``steps`` the number of cells on those subpaths.
    """

    steps: tuple[int, ...] = ()

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "steps", tuple(int(s) for s in self.steps))
        if len(self.steps) != len(self.motifs):
            raise ValueError("steps and motifs differ in length")

    @property
    def subscores(self) -> tuple[float, ...]:
        return self.scores

    def subset(self, keep) -> "CandidateMotifSet":
        keep = list(keep)
        return CandidateMotifSet(tuple(self.motifs[k] for k in keep),
                                 tuple(self.scores[k] for k in keep),
                                 tuple(self.steps[k] for k in keep))


def _sort_key(item):
    seg, score, _ = item
    return (-score, seg.start, seg.end)


def generate_candidate_motif_set(alpha: Segment, paths: list[WarpingPath]) -> CandidateMotifSet:
    """Project ``alpha`` over every path and rank the induced segments.

    ``alpha`` is always first with score ``len(alpha)``. Identical induced
    segments are merged keeping the best score; the rest are sorted by
    descending score, then by ``(start, end)``.
    """
    best: dict[Segment, tuple[float, int]] = {}
    for p in paths:
        hit = project_path(p, alpha)
        if hit is None:
            continue
        beta, score = hit
        if beta == alpha:
            continue
        steps = int(np.sum((p.rows >= alpha.start) & (p.rows <= alpha.end)))
        prev = best.get(beta)
        if prev is None or score > prev[0]:
            best[beta] = (score, steps)
    rest = sorted(((seg, sc, st) for seg, (sc, st) in best.items()), key=_sort_key)
    items = [(alpha, float(alpha.length), alpha.length)] + rest
    return CandidateMotifSet(tuple(i[0] for i in items), tuple(i[1] for i in items),
                             tuple(i[2] for i in items))


def fitness_from_arrays(scores, steps, cov: int, n: int) -> float:
    """Harmonic mean of mean per-cell similarity and relative coverage."""
    k = len(scores)
    s_bar = sum(float(s) / int(t) for s, t in zip(scores, steps)) / k
    c_bar = cov / n
    if s_bar <= 0.0 or c_bar <= 0.0:
        return 0.0
    return 2.0 * s_bar * c_bar / (s_bar + c_bar)


def fitness(c: CandidateMotifSet, n: int) -> float:
    if len(c) < 2:
        raise ValueError("not a motif set")
    return fitness_from_arrays(c.scores, c.steps, coverage(c), n)


class PathIndex:
    """Flat arrays describing a path set, for batched candidate generation."""

    def __init__(self, paths: list[WarpingPath]):
        self.paths = paths
        rows = [p.rows for p in paths]
        self.r0 = np.array([r[0] for r in rows], dtype=np.int64)
        self.r1 = np.array([r[-1] for r in rows], dtype=np.int64)
        self.pair_off = np.zeros(len(paths) + 1, dtype=np.int64)
        self.pair_off[1:] = np.cumsum([len(r) for r in rows])
        self.cols = np.concatenate([p.cols for p in paths]).astype(np.int64)
        cs = []
        for p in paths:
            cs.append(np.concatenate([[0.0], np.cumsum(p.similarities)]))
        self.cs_off = self.pair_off + np.arange(len(paths) + 1)
        self.cs = np.concatenate(cs)
        # per row of each path, first and last cell index (local to the path)
        self.row_off = np.zeros(len(paths) + 1, dtype=np.int64)
        self.row_off[1:] = np.cumsum(self.r1 - self.r0 + 1)
        first, last = [], []
        for r in rows:
            span = np.arange(r[0], r[-1] + 1)
            first.append(np.searchsorted(r, span, side="left"))
            last.append(np.searchsorted(r, span, side="right") - 1)
        self.row_first = np.concatenate(first).astype(np.int64)
        self.row_last = np.concatenate(last).astype(np.int64)
        self.self_id = -1
        for k, p in enumerate(paths):
            if np.array_equal(p.rows, p.cols):
                self.self_id = k
                break

    def table(self, alpha_b: np.ndarray, alpha_e: np.ndarray) -> "CandidateTable":
        ab = np.ascontiguousarray(alpha_b, dtype=np.int64)
        ae = np.ascontiguousarray(alpha_e, dtype=np.int64)
        order = np.lexsort((ae, ab))
        off, st, en, sc, stp, cov = _candidate_table(
            ab, ae, order, self.r0, self.r1, self.row_off, self.row_first, self.row_last,
            self.pair_off, self.cols, self.cs_off, self.cs, self.self_id)
        return CandidateTable(np.asarray(alpha_b), np.asarray(alpha_e), off, st, en, sc, stp, cov)


@dataclass
class CandidateTable:
    """Candidates of many representatives in compressed row layout.

    Entries ``offsets[a]:offsets[a+1]`` belong to representative ``a`` and are
    already ranked; ``raw_coverage[a]`` is the coverage of the unfiltered set.
    """

    alpha_b: np.ndarray
    alpha_e: np.ndarray
    offsets: np.ndarray
    starts: np.ndarray
    ends: np.ndarray
    scores: np.ndarray
    steps: np.ndarray
    raw_coverage: np.ndarray

    def __len__(self):
        return len(self.alpha_b)

    def candidate(self, a: int) -> CandidateMotifSet:
        lo, hi = self.offsets[a], self.offsets[a + 1]
        return CandidateMotifSet(
            tuple(Segment(int(b), int(e)) for b, e in zip(self.starts[lo:hi], self.ends[lo:hi])),
            tuple(self.scores[lo:hi].tolist()), tuple(self.steps[lo:hi].tolist()))


@njit(cache=True)
def _union_length(starts, ends):
    k = starts.shape[0]
    order = np.argsort(starts, kind="mergesort")
    total = 0
    cb = starts[order[0]]
    ce = ends[order[0]]
    for t in range(1, k):
        b = starts[order[t]]
        e = ends[order[t]]
        if b > ce + 1:
            total += ce - cb + 1
            cb = b
            ce = e
        elif e > ce:
            ce = e
    return total + ce - cb + 1


@njit(cache=True)
def _active_paths(b, r0, r1, self_id):
    """Paths whose row span contains ``b``, by decreasing last row."""
    buf = np.empty(r0.shape[0], dtype=np.int64)
    k = 0
    for p in range(r0.shape[0]):
        if p != self_id and r0[p] <= b and r1[p] >= b:
            buf[k] = p
            k += 1
    sub = buf[:k]
    keys = np.empty(k, dtype=np.int64)
    for t in range(k):
        keys[t] = -r1[sub[t]]
    return sub[np.argsort(keys, kind="mergesort")]


@njit(cache=True)
def _gather(b, e, act, r1, r0, row_off, row_first, row_last, pair_off, cols, cs_off, cs,
            st, en, sc, sp, base):
    """Write the ranked candidate of ``[b:e]`` at ``base``; return its size."""
    st[base] = b
    en[base] = e
    sc[base] = e - b + 1.0
    sp[base] = e - b + 1
    m = 1
    for k in range(act.shape[0]):
        p = act[k]
        if r1[p] < e:
            break
        f = row_first[row_off[p] + b - r0[p]]
        l = row_last[row_off[p] + e - r0[p]]
        bs = cols[pair_off[p] + f]
        be = cols[pair_off[p] + l]
        if bs == b and be == e:
            continue
        s = cs[cs_off[p] + l + 1] - cs[cs_off[p] + f]
        dup = -1
        for t in range(base + 1, base + m):
            if st[t] == bs and en[t] == be:
                dup = t
                break
        if dup >= 0:
            if s > sc[dup]:
                sc[dup] = s
                sp[dup] = l - f + 1
            continue
        st[base + m] = bs
        en[base + m] = be
        sc[base + m] = s
        sp[base + m] = l - f + 1
        m += 1
    # insertion sort of the induced segments: score desc, start asc, end asc
    for t in range(base + 2, base + m):
        ks, ke, kc, kp = st[t], en[t], sc[t], sp[t]
        u = t - 1
        while u > base:
            if sc[u] < kc or (sc[u] == kc and (st[u] > ks or (st[u] == ks and en[u] > ke))):
                st[u + 1] = st[u]
                en[u + 1] = en[u]
                sc[u + 1] = sc[u]
                sp[u + 1] = sp[u]
                u -= 1
            else:
                break
        st[u + 1] = ks
        en[u + 1] = ke
        sc[u + 1] = kc
        sp[u + 1] = kp
    return m


@njit(cache=True)
def _candidate_table(ab, ae, order, r0, r1, row_off, row_first, row_last, pair_off, cols, cs_off, cs,
                     self_id):
    # ``order`` visits representatives by start so active lists are built once per start
    na = ab.shape[0]
    cap = np.zeros(na + 1, dtype=np.int64)
    cur_b = -1
    act = np.empty(0, dtype=np.int64)
    counts = np.ones(na, dtype=np.int64)
    for t in range(na):
        a = order[t]
        if ab[a] != cur_b:
            cur_b = ab[a]
            act = _active_paths(cur_b, r0, r1, self_id)
        c = 0
        while c < act.shape[0] and r1[act[c]] >= ae[a]:
            c += 1
        counts[a] += c
    for a in range(na):
        cap[a + 1] = cap[a] + counts[a]
    st = np.empty(cap[na], dtype=np.int64)
    en = np.empty(cap[na], dtype=np.int64)
    sc = np.empty(cap[na], dtype=np.float64)
    sp = np.empty(cap[na], dtype=np.int64)
    final = np.zeros(na, dtype=np.int64)
    cov = np.zeros(na, dtype=np.int64)
    cur_b = -1
    for t in range(na):
        a = order[t]
        if ab[a] != cur_b:
            cur_b = ab[a]
            act = _active_paths(cur_b, r0, r1, self_id)
        m = _gather(ab[a], ae[a], act, r1, r0, row_off, row_first, row_last, pair_off, cols, cs_off, cs,
                    st, en, sc, sp, cap[a])
        final[a] = m
        cov[a] = _union_length(st[cap[a]:cap[a] + m], en[cap[a]:cap[a] + m])
    off = np.zeros(na + 1, dtype=np.int64)
    for a in range(na):
        off[a + 1] = off[a] + final[a]
    ost = np.empty(off[na], dtype=np.int64)
    oen = np.empty(off[na], dtype=np.int64)
    osc = np.empty(off[na], dtype=np.float64)
    osp = np.empty(off[na], dtype=np.int64)
    for a in range(na):
        m = final[a]
        ost[off[a]:off[a] + m] = st[cap[a]:cap[a] + m]
        oen[off[a]:off[a] + m] = en[cap[a]:cap[a] + m]
        osc[off[a]:off[a] + m] = sc[cap[a]:cap[a] + m]
        osp[off[a]:off[a] + m] = sp[cap[a]:cap[a] + m]
    return off, ost, oen, osc, osp, cov


# pair predicate codes understood by ``filtered_bounds``
PAIR_NOT_COINCIDENT = 0
PAIR_NOT_COINCIDENT_SYMMETRIC = 1
PAIR_NON_CONSECUTIVE = 2


@njit(cache=True)
def _pair_holds(kind, param, b1, e1, b2, e2):
    if kind == 2:
        lb = int(param)
        return not (b1 <= b2 and b2 <= e1 + lb) and not (b2 <= b1 and b1 <= e2 + lb)
    inter = min(e1, e2) - max(b1, b2) + 1
    if inter < 0:
        inter = 0
    if inter > param * (e2 - b2 + 1):
        return False
    return not (kind == 1 and inter > param * (e1 - b1 + 1))


@njit(cache=True)
def _filtered_bounds(off, st, en, sc, sp, ok, cap, kinds, params, n, exact):
    na = off.shape[0] - 1
    out = np.zeros(na)
    kept = np.empty(st.shape[0] + 1, dtype=np.int64)
    for a in range(na):
        m = 0
        for idx in range(off[a], off[a + 1]):
            if exact and m >= cap:
                break
            if not ok[idx]:
                continue
            good = True
            if exact:
                for t in range(m):
                    j = kept[t]
                    for q in range(kinds.shape[0]):
                        if not _pair_holds(kinds[q], params[q], st[idx], en[idx], st[j], en[j]):
                            good = False
                            break
                    if not good:
                        break
            if good:
                kept[m] = idx
                m += 1
        if m < 2:
            continue
        cov = _union_length(st[kept[:m]], en[kept[:m]])
        c = cov / n
        if exact:
            s = 0.0
            for t in range(m):
                s += sc[kept[t]] / sp[kept[t]]
            s /= m
            if s > 0.0 and c > 0.0:
                out[a] = 2.0 * s * c / (s + c)
        else:
            out[a] = 2.0 * c / (1.0 + c)
    return out


def filtered_bounds(table: "CandidateTable", ok: np.ndarray, n: int, k_max_discard=None,
                    pair_codes=None) -> np.ndarray:
    """Upper bound on the fitness of each filtered candidate in ``table``.

    ``ok`` flags the entries that pass the per-motif constraints. When
    ``pair_codes`` (a list of ``(code, parameter)``) describes every
    within-set pair predicate, the greedy filter is replayed and the result
    is the exact fitness of the filtered set; otherwise the bound comes from
    the coverage of all entries flagged in ``ok``. Entries with fewer than
    two surviving motifs get 0.
    """
    exact = pair_codes is not None
    codes = pair_codes or []
    kinds = np.array([c for c, _ in codes], dtype=np.int64)
    params = np.array([float(v) for _, v in codes], dtype=np.float64)
    cap = np.iinfo(np.int64).max if k_max_discard is None else int(k_max_discard)
    return _filtered_bounds(table.offsets, table.starts, table.ends, table.scores, table.steps,
                            np.ascontiguousarray(ok, dtype=np.bool_), cap, kinds, params, n, exact)
