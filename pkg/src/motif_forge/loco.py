"""Local warping paths over the self-similarity matrix of a series.

The cumulative score matrix follows a Smith-Waterman style recurrence on
threshold-shifted similarities, restricted to the upper triangle away from the
main diagonal. Paths are then peeled off greedily from the highest cumulative
score downwards, masking a small corridor around each extracted path.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit
from scipy.spatial.distance import cdist

from .core import Segment, as_array

__all__ = [
    "LocoParams",
    "WarpingPath",
    "self_similarity",
    "strictness_threshold",
    "cumulative_similarity",
    "compute_local_warping_paths",
    "project_path",
]


@dataclass(frozen=True)
class LocoParams:
    """Parameters of the local warping path search.

    rho : strictness in [0, 1]; higher values require closer matches.
    warping : allow horizontal and vertical steps.
    l_min_path : minimum number of cells of a kept path; also the width of the
        excluded band around the main diagonal.
    gamma : similarity bandwidth, ``s = exp(-gamma * ||xi - xj||**2)``.
    delta_penalty : cost of a non-diagonal step; ``None`` uses ``1 - tau``,
        so a warping step never gains score on its own and only bridges
        diagonal runs.
    """

    rho: float = 0.5
    warping: bool = True
    l_min_path: int = 5
    gamma: float = 1.0
    delta_penalty: float | None = None

    def __post_init__(self):
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError("rho must lie in [0, 1]")
        if self.l_min_path < 2:
            raise ValueError("l_min_path must be at least 2")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if self.delta_penalty is not None and self.delta_penalty < 0:
            raise ValueError("delta_penalty must be nonnegative")


@dataclass(frozen=True, eq=False)
class WarpingPath:
    """Monotone sequence of ``(row, col)`` cells with their similarities."""

    pairs: np.ndarray
    similarities: np.ndarray = field(repr=False)

    def __post_init__(self):
        pairs = np.asarray(self.pairs, dtype=np.int64).reshape(-1, 2)
        sims = np.asarray(self.similarities, dtype=np.float64)
        if len(pairs) == 0 or len(sims) != len(pairs):
            raise ValueError("a path needs one similarity per cell")
        pairs.setflags(write=False)
        sims.setflags(write=False)
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "similarities", sims)

    @property
    def rows(self) -> np.ndarray:
        return self.pairs[:, 0]

    @property
    def cols(self) -> np.ndarray:
        return self.pairs[:, 1]

    @property
    def score(self) -> float:
        return float(self.similarities.sum())

    @property
    def row_segment(self) -> Segment:
        return Segment(int(self.pairs[0, 0]), int(self.pairs[-1, 0]))

    @property
    def col_segment(self) -> Segment:
        return Segment(int(self.pairs[0, 1]), int(self.pairs[-1, 1]))

    def mirrored(self) -> "WarpingPath":
        return WarpingPath(self.pairs[:, ::-1], self.similarities)

    def is_diagonal(self) -> bool:
        steps = np.diff(self.pairs, axis=0)
        return bool(np.all(steps == 1))

    def __len__(self) -> int:
        return len(self.pairs)


def self_similarity(x, gamma: float = 1.0) -> np.ndarray:
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    x = as_array(x)
    return np.exp(-gamma * cdist(x, x, "sqeuclidean"))


def strictness_threshold(S: np.ndarray, rho: float) -> float:
    """The ``rho``-quantile of the off-diagonal similarities."""
    if not 0.0 <= rho <= 1.0:
        raise ValueError("rho must lie in [0, 1]")
    n = S.shape[0]
    off = S[~np.eye(n, dtype=bool)]
    return float(np.quantile(off, rho))


@njit(cache=True)
def _cumulative(S, tau, delta, warping, band):
    n = S.shape[0]
    L = np.zeros((n, n))
    for i in range(n):
        for j in range(i + band, n):
            best = 0.0
            if i > 0:
                best = L[i - 1, j - 1]
                if warping:
                    v = L[i - 1, j] - delta
                    if v > best:
                        best = v
            if warping and j - 1 >= i + band:
                v = L[i, j - 1] - delta
                if v > best:
                    best = v
            v = best + S[i, j] - tau
            L[i, j] = v if v > 0.0 else 0.0
    return L


@njit(cache=True)
def _extract(L, order_i, order_j, delta, warping, l_min):
    n = L.shape[0]
    out_i = np.empty(0, dtype=np.int64)
    out_j = np.empty(0, dtype=np.int64)
    lengths = []
    buf_i = np.empty(2 * n, dtype=np.int64)
    buf_j = np.empty(2 * n, dtype=np.int64)
    chunks_i = []
    chunks_j = []
    for k in range(order_i.shape[0]):
        i = order_i[k]
        j = order_j[k]
        if L[i, j] <= 0.0:
            continue
        m = 0
        while True:
            buf_i[m] = i
            buf_j[m] = j
            m += 1
            best = 0.0
            step = -1
            if i > 0 and j > 0:
                best = L[i - 1, j - 1]
                step = 0
            if warping:
                if i > 0:
                    v = L[i - 1, j] - delta
                    if v > best:
                        best = v
                        step = 1
                if j > 0:
                    v = L[i, j - 1] - delta
                    if v > best:
                        best = v
                        step = 2
            if best <= 0.0:
                break
            if step == 0:
                i -= 1
                j -= 1
            elif step == 1:
                i -= 1
            else:
                j -= 1
        for t in range(m):
            for di in range(-1, 2):
                for dj in range(-1, 2):
                    a = buf_i[t] + di
                    b = buf_j[t] + dj
                    if 0 <= a < n and 0 <= b < n:
                        L[a, b] = 0.0
        if m >= l_min:
            chunks_i.append(buf_i[:m][::-1].copy())
            chunks_j.append(buf_j[:m][::-1].copy())
            lengths.append(m)
    total = 0
    for m in lengths:
        total += m
    out_i = np.empty(total, dtype=np.int64)
    out_j = np.empty(total, dtype=np.int64)
    offsets = np.zeros(len(lengths) + 1, dtype=np.int64)
    pos = 0
    for c in range(len(lengths)):
        m = lengths[c]
        out_i[pos:pos + m] = chunks_i[c]
        out_j[pos:pos + m] = chunks_j[c]
        pos += m
        offsets[c + 1] = pos
    return out_i, out_j, offsets


def _delta(params: LocoParams, tau: float) -> float:
    if params.delta_penalty is not None:
        return float(params.delta_penalty)
    return max(0.0, 1.0 - tau)


def cumulative_similarity(S: np.ndarray, tau: float, params: LocoParams) -> np.ndarray:
    """Cumulative score matrix on the upper triangle (zero elsewhere)."""
    return _cumulative(np.ascontiguousarray(S, dtype=np.float64), float(tau),
                       _delta(params, tau), bool(params.warping), int(params.l_min_path))


def compute_local_warping_paths(x, params: LocoParams = LocoParams(), S: np.ndarray | None = None
                                ) -> list[WarpingPath]:
    """Local warping paths of ``x`` against itself.

    The identity path comes first; every other path is followed by its mirror
    image below the diagonal. Extraction order is by decreasing cumulative
    score with ties broken in row-major order, so the result is deterministic.
    """
    if S is None:
        S = self_similarity(x, params.gamma)
    n = S.shape[0]
    tau = strictness_threshold(S, params.rho)
    L = cumulative_similarity(S, tau, params)
    pi, pj = np.nonzero(L > 0.0)
    order = np.lexsort((pj, pi, -L[pi, pj]))
    rows, cols, offsets = _extract(L, pi[order], pj[order], _delta(params, tau),
                                   bool(params.warping), int(params.l_min_path))

    paths = [WarpingPath(np.column_stack([np.arange(n), np.arange(n)]), np.ones(n))]
    for a, b in zip(offsets[:-1], offsets[1:]):
        r, c = rows[a:b], cols[a:b]
        p = WarpingPath(np.column_stack([r, c]), S[r, c])
        paths.append(p)
        paths.append(p.mirrored())
    return paths


def project_path(p: WarpingPath, alpha: Segment, S: np.ndarray | None = None
                 ) -> tuple[Segment, float] | None:
    """Segment related to ``alpha`` by ``p`` and the similarity summed over it.

    Returns ``None`` unless the row projection of ``p`` covers ``alpha``.
    When ``S`` is given the similarities are read from it instead of the path.
    """
    rows = p.rows
    if rows[0] > alpha.start or rows[-1] < alpha.end:
        return None
    lo = int(np.searchsorted(rows, alpha.start, side="left"))
    hi = int(np.searchsorted(rows, alpha.end, side="right"))
    cols = p.cols[lo:hi]
    if S is None:
        sub = float(p.similarities[lo:hi].sum())
    else:
        sub = float(S[rows[lo:hi], cols].sum())
    return Segment(int(cols[0]), int(cols[-1])), sub
