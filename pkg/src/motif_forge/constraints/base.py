"""Predicate and desirability building blocks.

Hard constraints come in five shapes, matching the stages of the search that
can check them:

* motif predicates ``h(beta)``, applied to every motif (``h_mot``) or only to
  representatives (``h_mot_repr``);
* motif-pair predicates ``h(beta, beta2)`` within one motif set
  (``h_mots_same``) or, through :class:`PairwiseConstraint`, across two sets;
* a cap ``k_max_discard`` on the number of motifs kept per set;
* whole-set predicates ``h(M)`` (``h_mset_others``).

Soft constraints are desirability functions ``D(M)`` with values in [0, 1].
Every predicate must be pure and total: evaluation errors count as "not
satisfied" and never abort a search.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from ..core import MotifSet, Segment

logger = logging.getLogger(__name__)

__all__ = [
    "MotifPredicate",
    "PairPredicate",
    "SetPredicate",
    "Desirability",
    "as_motif_predicate",
    "as_pair_predicate",
    "as_set_predicate",
    "as_desirability",
    "HardConstraintBundle",
    "PairwiseConstraint",
    "lift_motif_to_desirability",
    "lift_pairwise_to_desirability",
    "compose_desirabilities",
    "fold_pairwise",
]


def _motifs(m) -> Sequence[Segment]:
    return m.motifs if isinstance(m, MotifSet) else tuple(m)


class MotifPredicate:
    """Predicate on a single segment.

    Subclasses implement ``test``; ``evaluate_many`` may be overridden with a
    vectorised version for arrays of start and end indices.
    """

    def test(self, seg: Segment) -> bool:
        raise NotImplementedError

    def __call__(self, seg: Segment) -> bool:
        try:
            return bool(self.test(seg))
        except Exception:  # noqa: BLE001 - constraints are total by contract
            logger.debug("motif predicate %r raised on %r", self, seg, exc_info=True)
            return False

    def evaluate_many(self, starts: np.ndarray, ends: np.ndarray) -> np.ndarray:
        return np.fromiter((self(Segment(int(b), int(e))) for b, e in zip(starts, ends)),
                           dtype=bool, count=len(starts))


class PairPredicate:
    """Predicate on an ordered pair of segments."""

    def test(self, a: Segment, b: Segment) -> bool:
        raise NotImplementedError

    def __call__(self, a: Segment, b: Segment) -> bool:
        try:
            return bool(self.test(a, b))
        except Exception:  # noqa: BLE001
            logger.debug("pair predicate %r raised on %r, %r", self, a, b, exc_info=True)
            return False

    def against_many(self, starts: np.ndarray, ends: np.ndarray, other: Segment,
                     other_first: bool = False) -> np.ndarray:
        """Evaluate ``h(beta_k, other)`` (or ``h(other, beta_k)``) for many ``beta_k``."""
        if other_first:
            it = (self(other, Segment(int(b), int(e))) for b, e in zip(starts, ends))
        else:
            it = (self(Segment(int(b), int(e)), other) for b, e in zip(starts, ends))
        return np.fromiter(it, dtype=bool, count=len(starts))


class SetPredicate:
    def test(self, m: MotifSet) -> bool:
        raise NotImplementedError

    def __call__(self, m: MotifSet) -> bool:
        try:
            return bool(self.test(m))
        except Exception:  # noqa: BLE001
            logger.debug("set predicate %r raised", self, exc_info=True)
            return False


class Desirability:
    """Desirability of a motif set; the empty set has desirability 0."""

    def value(self, m: MotifSet) -> float:
        raise NotImplementedError

    def __call__(self, m: MotifSet) -> float:
        if len(_motifs(m)) == 0:
            return 0.0
        try:
            v = float(self.value(m))
        except Exception:  # noqa: BLE001
            logger.debug("desirability %r raised", self, exc_info=True)
            return 0.0
        if not np.isfinite(v):
            return 0.0
        return min(1.0, max(0.0, v))


class _WrappedMotif(MotifPredicate):
    def __init__(self, fn):
        self.fn = fn

    def test(self, seg):
        return self.fn(seg)

    def __repr__(self):
        return f"motif_predicate({self.fn!r})"


class _WrappedPair(PairPredicate):
    def __init__(self, fn):
        self.fn = fn

    def test(self, a, b):
        return self.fn(a, b)

    def __repr__(self):
        return f"pair_predicate({self.fn!r})"


class _WrappedSet(SetPredicate):
    def __init__(self, fn):
        self.fn = fn

    def test(self, m):
        return self.fn(m)

    def __repr__(self):
        return f"set_predicate({self.fn!r})"


class _WrappedDesirability(Desirability):
    def __init__(self, fn):
        self.fn = fn

    def value(self, m):
        return self.fn(m)

    def __repr__(self):
        return f"desirability({self.fn!r})"


def as_motif_predicate(fn) -> MotifPredicate:
    return fn if isinstance(fn, MotifPredicate) else _WrappedMotif(fn)


def as_pair_predicate(fn) -> PairPredicate:
    return fn if isinstance(fn, PairPredicate) else _WrappedPair(fn)


def as_set_predicate(fn) -> SetPredicate:
    return fn if isinstance(fn, SetPredicate) else _WrappedSet(fn)


def as_desirability(fn) -> Desirability:
    return fn if isinstance(fn, Desirability) else _WrappedDesirability(fn)


@dataclass(frozen=True)
class HardConstraintBundle:
    """Hard constraints of one motif set, split by the stage that checks them.

    Each predicate field is a conjunction: an empty tuple accepts everything.
    """

    h_mot: tuple[MotifPredicate, ...] = ()
    h_mot_repr: tuple[MotifPredicate, ...] = ()
    h_mots_same: tuple[PairPredicate, ...] = ()
    k_max_discard: int | None = None
    h_mset_others: tuple[SetPredicate, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "h_mot", tuple(as_motif_predicate(p) for p in self.h_mot))
        object.__setattr__(self, "h_mot_repr", tuple(as_motif_predicate(p) for p in self.h_mot_repr))
        object.__setattr__(self, "h_mots_same", tuple(as_pair_predicate(p) for p in self.h_mots_same))
        object.__setattr__(self, "h_mset_others", tuple(as_set_predicate(p) for p in self.h_mset_others))
        if self.k_max_discard is not None and self.k_max_discard < 1:
            raise ValueError("k_max_discard must be positive")

    def motif_ok(self, seg: Segment) -> bool:
        return all(p(seg) for p in self.h_mot)

    def repr_ok(self, seg: Segment) -> bool:
        return all(p(seg) for p in self.h_mot_repr)

    def pair_ok(self, a: Segment, b: Segment) -> bool:
        return all(p(a, b) for p in self.h_mots_same)

    def set_ok(self, m: MotifSet) -> bool:
        return all(p(m) for p in self.h_mset_others)

    def motif_mask(self, starts, ends) -> np.ndarray:
        ok = np.ones(len(starts), dtype=bool)
        for p in self.h_mot:
            idx = np.flatnonzero(ok)
            if len(idx) == 0:
                break
            ok[idx] = p.evaluate_many(starts[idx], ends[idx])
        return ok

    def repr_mask(self, starts, ends) -> np.ndarray:
        ok = np.ones(len(starts), dtype=bool)
        for p in self.h_mot_repr:
            idx = np.flatnonzero(ok)
            if len(idx) == 0:
                break
            ok[idx] = p.evaluate_many(starts[idx], ends[idx])
        return ok

    def merged(self, other: "HardConstraintBundle") -> "HardConstraintBundle":
        caps = [k for k in (self.k_max_discard, other.k_max_discard) if k is not None]
        return HardConstraintBundle(
            self.h_mot + other.h_mot,
            self.h_mot_repr + other.h_mot_repr,
            self.h_mots_same + other.h_mots_same,
            min(caps) if caps else None,
            self.h_mset_others + other.h_mset_others,
        )


@dataclass(frozen=True)
class PairwiseConstraint:
    """Hard constraint ``h_msets(M_i, M_j)`` between motif sets ``i`` and ``j``.

    With ``motif_level`` given, ``h_msets`` is the universal statement that
    ``motif_level(beta, beta2)`` holds for every ``beta`` in ``M_i`` and
    ``beta2`` in ``M_j``, and may be omitted.
    """

    i: int
    j: int
    h_msets: Callable | None = None
    motif_level: PairPredicate | None = None

    def __post_init__(self):
        if self.i == self.j:
            raise ValueError("a pairwise constraint needs two distinct motif sets")
        if self.motif_level is not None:
            object.__setattr__(self, "motif_level", as_pair_predicate(self.motif_level))
        elif self.h_msets is None:
            raise ValueError("either h_msets or motif_level is required")

    def holds(self, m_i, m_j) -> bool:
        if self.motif_level is not None:
            return all(self.motif_level(a, b) for a in _motifs(m_i) for b in _motifs(m_j))
        try:
            return bool(self.h_msets(m_i, m_j))
        except Exception:  # noqa: BLE001
            return False


class _Proportion(Desirability):
    def __init__(self, h_mot):
        self.h_mot = as_motif_predicate(h_mot)

    def value(self, m):
        segs = _motifs(m)
        return sum(self.h_mot(b) for b in segs) / len(segs)

    def __repr__(self):
        return f"proportion_of_motifs({self.h_mot!r})"


class _PairProportion(Desirability):
    def __init__(self, h):
        self.h = as_pair_predicate(h)

    def value(self, m):
        segs = _motifs(m)
        k = len(segs)
        if k < 2:
            return 1.0
        hits = sum(self.h(segs[a], segs[b]) for a in range(k) for b in range(k) if a != b)
        return hits / (k * k - k)

    def __repr__(self):
        return f"proportion_of_pairs({self.h!r})"


def lift_motif_to_desirability(h_mot) -> Desirability:
    """Fraction of motifs satisfying ``h_mot``."""
    return _Proportion(h_mot)


def lift_pairwise_to_desirability(h_mots_same) -> Desirability:
    """Fraction of ordered pairs of distinct motifs satisfying the predicate.

    Sets with fewer than two motifs have nothing to violate and score 1.
    """
    return _PairProportion(h_mots_same)


class Product(Desirability):
    def __init__(self, fns):
        self.fns = tuple(as_desirability(f) for f in fns)

    def value(self, m):
        v = 1.0
        for f in self.fns:
            v *= f(m)
            if v == 0.0:
                break
        return v

    def __repr__(self):
        return f"Product({list(self.fns)!r})"


def compose_desirabilities(fns) -> Desirability:
    """Product of several desirabilities; the empty product is constant 1."""
    return Product(fns)


class _FoldedMotif(MotifPredicate):
    """``beta -> all(h(beta, other) for other in discovered)``, optionally flipped."""

    def __init__(self, h: PairPredicate, discovered: Sequence[Segment], other_first: bool):
        self.h = h
        self.discovered = tuple(discovered)
        self.other_first = other_first

    def test(self, seg):
        if self.other_first:
            return all(self.h(o, seg) for o in self.discovered)
        return all(self.h(seg, o) for o in self.discovered)

    def evaluate_many(self, starts, ends):
        ok = np.ones(len(starts), dtype=bool)
        for o in self.discovered:
            ok &= self.h.against_many(starts, ends, o, self.other_first)
        return ok

    def __repr__(self):
        return f"folded({self.h!r}, {list(self.discovered)!r}, other_first={self.other_first})"


class _FoldedSet(SetPredicate):
    def __init__(self, c: PairwiseConstraint, discovered: MotifSet, discovered_first: bool):
        self.c = c
        self.discovered = discovered
        self.discovered_first = discovered_first

    def test(self, m):
        if self.discovered_first:
            return self.c.holds(self.discovered, m)
        return self.c.holds(m, self.discovered)


def fold_pairwise(bundle: HardConstraintBundle, pairwise: Sequence[PairwiseConstraint],
                  j: int, i_star: int, discovered: MotifSet) -> HardConstraintBundle:
    """Substitute the discovered set ``i_star`` into the pairwise constraints of ``j``.

    Motif-level constraints become per-motif predicates so that offending
    motifs can be filtered out one by one; the others become whole-set
    predicates.
    """
    h_mot = list(bundle.h_mot)
    h_mset = list(bundle.h_mset_others)
    for c in pairwise:
        if (c.i, c.j) == (j, i_star):
            discovered_first = False
        elif (c.i, c.j) == (i_star, j):
            discovered_first = True
        else:
            continue
        if c.motif_level is not None:
            h_mot.append(_FoldedMotif(c.motif_level, _motifs(discovered), discovered_first))
        else:
            h_mset.append(_FoldedSet(c, discovered, discovered_first))
    return replace(bundle, h_mot=tuple(h_mot), h_mset_others=tuple(h_mset))
