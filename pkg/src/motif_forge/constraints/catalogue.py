"""Ready-made constraints and desirability functions.

Covers the ten standard kinds of domain knowledge (cardinality, coverage,
length, variability, start/end masks, overlap), the benchmark-style
constraints derived from reference motifs, and representative-only
constraints emulating mask-guided motif search.
"""
from __future__ import annotations

import numpy as np

from ..core import (Segment, as_array, coverage, intersection_length,
                    subsequence_skewness, subsequence_std)
from .base import (Desirability, MotifPredicate, PairPredicate, SetPredicate, _motifs,
                   lift_motif_to_desirability)
from .masks import Mask

# Vectorised statistics are re-checked with the exact scalar routine when they
# land this close to a threshold, so batch and scalar decisions agree.
_REFINE_RTOL = 1e-6


def _check_decay(rho):
    if not 0.0 < rho < 1.0:
        raise ValueError("decay constant must lie in (0, 1)")
    return float(rho)


# -- cardinality and coverage ------------------------------------------------

class MinCardinality(SetPredicate):
    def __init__(self, k_min: int):
        self.k_min = int(k_min)

    def test(self, m):
        return len(_motifs(m)) >= self.k_min

    def __repr__(self):
        return f"MinCardinality({self.k_min})"


class MaxCardinality(SetPredicate):
    def __init__(self, k_max: int):
        self.k_max = int(k_max)

    def test(self, m):
        return len(_motifs(m)) <= self.k_max

    def __repr__(self):
        return f"MaxCardinality({self.k_max})"


class MinCoverage(SetPredicate):
    def __init__(self, c_min: int):
        self.c_min = c_min

    def test(self, m):
        return coverage(m) >= self.c_min


class MaxCoverage(SetPredicate):
    def __init__(self, c_max: int):
        self.c_max = c_max

    def test(self, m):
        return coverage(m) <= self.c_max


class SoftMinCardinality(Desirability):
    """``|M| / k_min`` below the bound, 1 otherwise."""

    def __init__(self, k_min: int):
        self.k_min = int(k_min)

    def value(self, m):
        k = len(_motifs(m))
        return k / self.k_min if k < self.k_min else 1.0


class SoftMaxCardinality(Desirability):
    """``rho ** (|M| - k_max)`` above the bound, 1 otherwise."""

    def __init__(self, k_max: int, rho_decay: float):
        self.k_max = int(k_max)
        self.rho_decay = _check_decay(rho_decay)

    def value(self, m):
        k = len(_motifs(m))
        return self.rho_decay ** (k - self.k_max) if k > self.k_max else 1.0


class SoftMinCoverage(Desirability):
    def __init__(self, c_min):
        self.c_min = c_min

    def value(self, m):
        c = coverage(m)
        return c / self.c_min if c < self.c_min else 1.0


class SoftMaxCoverage(Desirability):
    def __init__(self, c_max, rho_decay: float):
        self.c_max = c_max
        self.rho_decay = _check_decay(rho_decay)

    def value(self, m):
        c = coverage(m)
        return self.rho_decay ** (c - self.c_max) if c > self.c_max else 1.0


# -- per-motif properties ------------------------------------------------------

class LengthRange(MotifPredicate):
    def __init__(self, l_min: int, l_max: int):
        if l_min < 1 or l_max < l_min:
            raise ValueError("need 1 <= l_min <= l_max")
        self.l_min, self.l_max = int(l_min), int(l_max)

    def test(self, seg):
        return self.l_min <= seg.length <= self.l_max

    def evaluate_many(self, starts, ends):
        lengths = ends - starts + 1
        return (lengths >= self.l_min) & (lengths <= self.l_max)

    def __repr__(self):
        return f"LengthRange({self.l_min}, {self.l_max})"


def length_factor(length: int, l_min: int, l_max: int, rho_decay: float) -> float:
    if length < l_min:
        return length / l_min
    if length > l_max:
        return rho_decay ** (length / l_max - 1.0)
    return 1.0


class SoftLengthRange(Desirability):
    """Product over motifs of the per-motif length factor."""

    def __init__(self, l_min: int, l_max: int, rho_decay: float):
        if l_min < 1 or l_max < l_min:
            raise ValueError("need 1 <= l_min <= l_max")
        self.l_min, self.l_max = int(l_min), int(l_max)
        self.rho_decay = _check_decay(rho_decay)

    def value(self, m):
        v = 1.0
        for s in _motifs(m):
            v *= length_factor(s.length, self.l_min, self.l_max, self.rho_decay)
        return v


class _PrefixMoments:
    """Prefix sums of powers of a rescaled univariate signal."""

    def __init__(self, x: np.ndarray):
        v = x[:, 0]
        self.shift = float(v.mean())
        self.scale = float(np.max(np.abs(v - self.shift))) or 1.0
        y = (v - self.shift) / self.scale
        self.c1 = np.concatenate([[0.0], np.cumsum(y)])
        self.c2 = np.concatenate([[0.0], np.cumsum(y * y)])
        self.c3 = np.concatenate([[0.0], np.cumsum(y * y * y)])

    def central(self, starts, ends):
        k = (ends - starts + 1).astype(float)
        s1 = (self.c1[ends + 1] - self.c1[starts]) / k
        s2 = (self.c2[ends + 1] - self.c2[starts]) / k
        s3 = (self.c3[ends + 1] - self.c3[starts]) / k
        m2 = s2 - s1 * s1
        m3 = s3 - 3.0 * s1 * s2 + 2.0 * s1 ** 3
        return m2, m3


class MinStd(MotifPredicate):
    def __init__(self, x, sigma_min: float):
        self.x = as_array(x)
        self.sigma_min = float(sigma_min)
        self._moments = _PrefixMoments(self.x) if self.x.shape[1] == 1 else None

    def test(self, seg):
        return subsequence_std(self.x, seg) >= self.sigma_min

    def evaluate_many(self, starts, ends):
        if self._moments is None:
            return super().evaluate_many(starts, ends)
        m2, _ = self._moments.central(starts, ends)
        std = np.sqrt(np.maximum(m2, 0.0)) * self._moments.scale
        ok = std >= self.sigma_min
        near = np.abs(std - self.sigma_min) <= _REFINE_RTOL * (1.0 + self.sigma_min)
        for t in np.flatnonzero(near):
            ok[t] = self(Segment(int(starts[t]), int(ends[t])))
        return ok


class SoftMinStd(Desirability):
    def __init__(self, x, sigma_min: float):
        if sigma_min <= 0:
            raise ValueError("sigma_min must be positive")
        self.x = as_array(x)
        self.sigma_min = float(sigma_min)

    def value(self, m):
        v = 1.0
        for s in _motifs(m):
            sd = subsequence_std(self.x, s)
            if sd < self.sigma_min:
                v *= sd / self.sigma_min
        return v


class StartMask(MotifPredicate):
    """Motif may start only where the binary mask is 1."""

    def __init__(self, mask: Mask):
        if not mask.binary:
            raise ValueError("a hard mask must be binary")
        self.mask = mask

    def test(self, seg):
        return self.mask[seg.start] == 1.0

    def evaluate_many(self, starts, ends):
        return self.mask.values[starts] == 1.0


class EndMask(MotifPredicate):
    def __init__(self, mask: Mask):
        if not mask.binary:
            raise ValueError("a hard mask must be binary")
        self.mask = mask

    def test(self, seg):
        return self.mask[seg.end] == 1.0

    def evaluate_many(self, starts, ends):
        return self.mask.values[ends] == 1.0


class StartEndMask(MotifPredicate):
    def __init__(self, start_mask: Mask, end_mask: Mask):
        self.start = StartMask(start_mask)
        self.end = EndMask(end_mask)

    def test(self, seg):
        return self.start.test(seg) and self.end.test(seg)

    def evaluate_many(self, starts, ends):
        return self.start.evaluate_many(starts, ends) & self.end.evaluate_many(starts, ends)


class SoftStartMask(Desirability):
    def __init__(self, mask: Mask):
        self.mask = mask

    def value(self, m):
        return float(np.prod([self.mask[s.start] for s in _motifs(m)]))


class SoftEndMask(Desirability):
    def __init__(self, mask: Mask):
        self.mask = mask

    def value(self, m):
        return float(np.prod([self.mask[s.end] for s in _motifs(m)]))


# -- overlap ---------------------------------------------------------------------

class NotCoincident(PairPredicate):
    """``beta`` is not ``nu``-coincident to ``beta2``.

    With ``symmetric`` the reverse direction is required as well, which is
    what a within-set constraint over all ordered pairs amounts to.
    """

    def __init__(self, nu: float, symmetric: bool = False):
        if not 0.0 <= nu <= 1.0:
            raise ValueError("invalid overlap parameter")
        self.nu = float(nu)
        self.symmetric = symmetric

    def test(self, a, b):
        inter = intersection_length(a, b)
        if inter > self.nu * b.length:
            return False
        return not (self.symmetric and inter > self.nu * a.length)

    def against_many(self, starts, ends, other, other_first=False):
        inter = np.maximum(0, np.minimum(ends, other.end) - np.maximum(starts, other.start) + 1)
        lengths = ends - starts + 1
        # normaliser is the length of the second argument
        if other_first:
            bad = inter > self.nu * lengths
            if self.symmetric:
                bad |= inter > self.nu * other.length
        else:
            bad = inter > self.nu * other.length
            if self.symmetric:
                bad |= inter > self.nu * lengths
        return ~bad

    def __repr__(self):
        return f"NotCoincident({self.nu}, symmetric={self.symmetric})"


class NonConsecutive(PairPredicate):
    """Neither motif starts within ``l_buffer`` samples after the other one ends."""

    def __init__(self, l_buffer: int):
        if l_buffer < 0:
            raise ValueError("l_buffer must be nonnegative")
        self.l_buffer = int(l_buffer)

    def test(self, a, b):
        return (not (a.start <= b.start <= a.end + self.l_buffer)
                and not (b.start <= a.start <= b.end + self.l_buffer))

    def against_many(self, starts, ends, other, other_first=False):
        # symmetric in its arguments
        lb = self.l_buffer
        bad = (starts <= other.start) & (other.start <= ends + lb)
        bad |= (other.start <= starts) & (starts <= other.end + lb)
        return ~bad

    def __repr__(self):
        return f"NonConsecutive({self.l_buffer})"


# -- benchmark-style constraints -------------------------------------------------

class ExactCardinality(SetPredicate):
    def __init__(self, k: int):
        self.k = int(k)

    def test(self, m):
        return len(_motifs(m)) == self.k


class PositiveRegion(SetPredicate):
    """At least one motif lies fully inside ``theta``."""

    def __init__(self, theta: Segment):
        self.theta = theta

    def test(self, m):
        return any(self.theta.contains(s) for s in _motifs(m))


class SoftPositiveRegion(Desirability):
    """Largest fraction of any motif that falls inside ``theta``."""

    def __init__(self, theta: Segment):
        self.theta = theta

    def value(self, m):
        return max(intersection_length(s, self.theta) / s.length for s in _motifs(m))


class SoftMaskAverage(Desirability):
    """Mean mask value over the time indices covered by the motifs."""

    def __init__(self, mask: Mask):
        self.mask = mask

    def value(self, m):
        covered = np.zeros(len(self.mask), dtype=bool)
        for s in _motifs(m):
            covered[s.start:s.end + 1] = True
        return float(self.mask.values[covered].mean())


def soft_length(l_min: int, l_max: int) -> Desirability:
    """Fraction of motifs whose length lies in ``[l_min, l_max]``."""
    return lift_motif_to_desirability(LengthRange(l_min, l_max))


# -- representative-only constraints --------------------------------------------

class MinSkewness(MotifPredicate):
    """Skewness of the subsequence is at least ``gamma_min``.

    Constant subsequences have no skewness and are rejected.
    """

    def __init__(self, x, gamma_min: float):
        self.x = as_array(x)
        if self.x.shape[1] != 1:
            raise ValueError("skewness constraints need a univariate series")
        self.gamma_min = float(gamma_min)
        self._moments = _PrefixMoments(self.x)

    def test(self, seg):
        return subsequence_skewness(self.x, seg) >= self.gamma_min

    def evaluate_many(self, starts, ends):
        m2, m3 = self._moments.central(starts, ends)
        with np.errstate(divide="ignore", invalid="ignore"):
            skew = m3 / np.maximum(m2, 1e-300) ** 1.5
        ok = skew >= self.gamma_min
        near = (np.abs(skew - self.gamma_min) <= _REFINE_RTOL * (1.0 + abs(self.gamma_min))) | (m2 < 1e-8)
        for t in np.flatnonzero(near | ~np.isfinite(skew)):
            ok[t] = self(Segment(int(starts[t]), int(ends[t])))
        return ok


class PeakCentered(Desirability):
    """1 when the representative's maximum sits in its middle, falling linearly to 0 at its ends."""

    def __init__(self, x):
        self.x = as_array(x)
        if self.x.shape[1] != 1:
            raise ValueError("peak centring needs a univariate series")

    def value(self, m):
        rep = _motifs(m)[0]
        span = rep.end - rep.start
        if span == 0:
            return 1.0
        i_peak = int(np.argmax(self.x[rep.start:rep.end + 1, 0]))
        if i_peak <= span / 2:
            return 2.0 * i_peak / span
        return 2.0 - 2.0 * i_peak / span


class RepresentativeStart(Desirability):
    """Mask value at the representative's start index."""

    def __init__(self, mask: Mask):
        self.mask = mask

    def value(self, m):
        return float(self.mask[_motifs(m)[0].start])


class RepresentativeEnd(Desirability):
    """Mask value at the representative's end index."""

    def __init__(self, mask: Mask):
        self.mask = mask

    def value(self, m):
        return float(self.mask[_motifs(m)[0].end])


__all__ = [name for name, obj in list(globals().items())
           if isinstance(obj, type) and obj.__module__ == __name__] + ["length_factor", "soft_length"]
