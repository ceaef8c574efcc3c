"""Basic data types and segment arithmetic.

Segments are 0-based and inclusive on both ends: ``Segment(3, 7)`` covers the
five time indices 3, 4, 5, 6 and 7.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

__all__ = [
    "TimeSeries",
    "Segment",
    "MotifSet",
    "as_array",
    "coverage",
    "intersection_length",
    "is_coincident",
    "subsequence_std",
    "subsequence_skewness",
    "SearchSpaceSize",
    "motif_set_count",
    "search_space_digit_count",
]


class TimeSeries:
    """A finite, real-valued series of ``n`` samples in ``d`` dimensions.

    The values are stored as a read-only ``(n, d)`` float64 array.
    """

    __slots__ = ("values",)

    def __init__(self, values):
        arr = np.array(values, dtype=np.float64)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.ndim != 2:
            raise ValueError(f"time series must be 1-D or 2-D, got {arr.ndim} dimensions")
        if arr.shape[0] < 2:
            raise ValueError("time series needs at least 2 samples")
        if arr.shape[1] < 1:
            raise ValueError("time series needs at least 1 dimension")
        if not np.all(np.isfinite(arr)):
            bad = int(np.argwhere(~np.isfinite(arr))[0, 0])
            raise ValueError(f"time series contains a non-finite value at sample {bad}")
        arr.setflags(write=False)
        self.values = arr

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"TimeSeries(n={self.n}, d={self.d})"


def as_array(x) -> np.ndarray:
    """Return the ``(n, d)`` value array of a ``TimeSeries`` or array-like."""
    if isinstance(x, TimeSeries):
        return x.values
    return TimeSeries(x).values


@dataclass(frozen=True, order=True)
class Segment:
    start: int
    end: int

    def __post_init__(self):
        if self.start < 0 or self.end < self.start:
            raise ValueError(f"invalid segment [{self.start}:{self.end}]")

    @property
    def length(self) -> int:
        return self.end - self.start + 1

    def contains(self, other: "Segment") -> bool:
        return self.start <= other.start and other.end <= self.end

    def __repr__(self) -> str:
        return f"[{self.start}:{self.end}]"


@dataclass(frozen=True)
class MotifSet:
    """Ordered motifs; ``motifs[0]`` is the representative.

    ``scores`` holds the alignment score of every motif against the
    representative (empty when unknown).
    """

    motifs: tuple[Segment, ...]
    scores: tuple[float, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "motifs", tuple(self.motifs))
        object.__setattr__(self, "scores", tuple(float(s) for s in self.scores))
        if self.scores and len(self.scores) != len(self.motifs):
            raise ValueError("scores and motifs differ in length")

    @property
    def representative(self) -> Segment:
        return self.motifs[0]

    def __len__(self) -> int:
        return len(self.motifs)

    def __iter__(self):
        return iter(self.motifs)


def _segments(m) -> Sequence[Segment]:
    return m.motifs if isinstance(m, MotifSet) else list(m)


def coverage(m: MotifSet | Iterable[Segment]) -> int:
    """Number of distinct time indices covered by the union of the motifs."""
    segs = sorted(_segments(m), key=lambda s: (s.start, s.end))
    if not segs:
        raise ValueError("empty motif set")
    total = 0
    cur_b, cur_e = segs[0].start, segs[0].end
    for s in segs[1:]:
        if s.start > cur_e + 1:
            total += cur_e - cur_b + 1
            cur_b, cur_e = s.start, s.end
        elif s.end > cur_e:
            cur_e = s.end
    return total + cur_e - cur_b + 1


def intersection_length(a: Segment, b: Segment) -> int:
    return max(0, min(a.end, b.end) - max(a.start, b.start) + 1)


def is_coincident(beta: Segment, beta_prime: Segment, nu: float) -> bool:
    """True iff ``beta`` overlaps ``beta_prime`` by more than ``nu * len(beta_prime)``.

    Asymmetric: the overlap is normalised by the second argument.
    """
    if not 0.0 <= nu <= 1.0:
        raise ValueError("invalid overlap parameter")
    return intersection_length(beta, beta_prime) > nu * beta_prime.length


def _check_bounds(x: np.ndarray, beta: Segment) -> None:
    if beta.end >= x.shape[0]:
        raise IndexError(f"segment {beta!r} exceeds series length {x.shape[0]}")


def subsequence_std(x, beta: Segment) -> float:
    """Population standard deviation of ``x`` over ``beta``.

    For multivariate series this is the standard deviation of the Euclidean
    norms of the mean-centred samples, which reduces to the usual value when
    ``d == 1``.
    """
    x = as_array(x)
    _check_bounds(x, beta)
    sub = x[beta.start:beta.end + 1]
    if sub.shape[1] == 1:
        return float(np.std(sub[:, 0]))
    norms = np.linalg.norm(sub - sub.mean(axis=0), axis=1)
    return float(np.std(norms))


def subsequence_skewness(x, beta: Segment) -> float:
    """Biased sample skewness ``m3 / m2**1.5`` of a univariate subsequence."""
    x = as_array(x)
    _check_bounds(x, beta)
    if x.shape[1] != 1:
        raise ValueError("skewness is only defined for univariate series")
    sub = x[beta.start:beta.end + 1, 0]
    dev = sub - sub.mean()
    m2 = float(np.mean(dev * dev))
    # relative guard: rounding noise of a constant subsequence is not variance
    if m2 <= (1e-14 * max(1.0, float(np.max(np.abs(sub))))) ** 2:
        raise ValueError("skewness undefined for constant subsequence")
    m3 = float(np.mean(dev * dev * dev))
    return m3 / m2 ** 1.5


class SearchSpaceSize(NamedTuple):
    exact_digits: int
    big_o_digits: int
    empty: bool


def _decimal_digits(v: int) -> int:
    # str() on huge ints is capped by the interpreter, so estimate and correct
    if v == 0:
        return 1
    d = max(1, int(v.bit_length() * math.log10(2)))
    while 10 ** d <= v:
        d += 1
    while d > 1 and 10 ** (d - 1) > v:
        d -= 1
    return d


def motif_set_count(n: int, kappa: int = 1) -> int:
    """Number of ways to pick ``kappa`` motif sets of at least two segments each."""
    if n < 1 or kappa < 1:
        raise ValueError("n and kappa must be positive")
    s = (n * n + n) // 2
    return (2 ** s - s - 1) ** kappa


def search_space_digit_count(n: int, kappa: int) -> SearchSpaceSize:
    """Size of the unconstrained search space for ``kappa`` motif sets.

    ``exact_digits`` counts the digits of ``(2**s - s - 1)**kappa`` with
    ``s = (n*n + n) / 2`` distinct segments; ``big_o_digits`` those of
    ``2**(kappa * n * n)``.
    """
    exact = motif_set_count(n, kappa)
    return SearchSpaceSize(_decimal_digits(exact), _decimal_digits(2 ** (kappa * n * n)), exact == 0)
