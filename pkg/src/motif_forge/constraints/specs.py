"""Declarative constraint specifications and their compilation.

A specification is a small JSON-compatible record::

    {"kind": "length_range", "mode": "hard", "applies_to": "all",
     "params": {"l_min": 50, "l_max": 100}}

``applies_to`` selects motif-set indices: an integer, a list of integers,
``"all"``, or ``{"pair": [i, j]}`` for constraints between two motif sets.
Arbitrary user code is not expressible here; custom predicates are passed to
the library directly.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from ..core import Segment, as_array
from ..errors import ConfigError
from . import catalogue as cat
from .base import (Desirability, HardConstraintBundle, PairwiseConstraint, compose_desirabilities,
                   lift_pairwise_to_desirability)
from .masks import Mask, points_mask, read_mask_csv, region_mask, soften_mask

__all__ = ["ConstraintSpec", "Fragment", "KINDS", "build", "assemble"]

HARD, SOFT = "hard", "soft"

# kind -> allowed modes; the first listed mode is the default
KINDS: dict[str, tuple[str, ...]] = {
    "min_cardinality": (HARD, SOFT),
    "max_cardinality": (HARD, SOFT),
    "min_coverage": (HARD, SOFT),
    "max_coverage": (HARD, SOFT),
    "length_range": (HARD, SOFT),
    "min_std": (HARD, SOFT),
    "begin_mask": (HARD, SOFT),
    "end_mask": (HARD, SOFT),
    "overlap_within": (HARD, SOFT),
    "overlap_between": (HARD,),
    "exact_cardinality": (HARD,),
    "max_cardinality_discard": (HARD,),
    "start_end_points": (HARD,),
    "non_consecutive": (HARD,),
    "positive_region_hard": (HARD,),
    "positive_region_soft": (SOFT,),
    "soft_mask": (SOFT,),
    "length_soft": (SOFT,),
    "cardinality_soft": (SOFT,),
    "min_skewness_repr": (HARD,),
    "peak_centered": (SOFT,),
    "mpv_mask": (HARD, SOFT),
    "sampling_mask": (SOFT,),
    "repr_begin_end_masks": (HARD,),
}

PAIRWISE_KINDS = {"overlap_between"}


@dataclass(frozen=True)
class ConstraintSpec:
    kind: str
    params: Mapping[str, Any] = field(default_factory=dict)
    mode: str | None = None
    applies_to: Any = "all"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown constraint kind {self.kind!r}", "$.kind")
        mode = self.mode or KINDS[self.kind][0]
        if mode not in KINDS[self.kind]:
            raise ConfigError(f"kind {self.kind!r} has no {mode!r} form", "$.mode")
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "params", dict(self.params))

    @classmethod
    def from_dict(cls, d: Mapping, path: str = "$") -> "ConstraintSpec":
        if not isinstance(d, Mapping):
            raise ConfigError("constraint must be an object", path)
        unknown = set(d) - {"kind", "mode", "params", "applies_to"}
        if unknown:
            raise ConfigError(f"unknown fields {sorted(unknown)}", path)
        kind = d.get("kind")
        if not isinstance(kind, str) or kind not in KINDS:
            raise ConfigError(f"unknown constraint kind {kind!r}", f"{path}.kind")
        mode = d.get("mode")
        if mode is not None and mode not in KINDS[kind]:
            raise ConfigError(f"kind {kind!r} has no {mode!r} form", f"{path}.mode")
        params = d.get("params", {})
        if not isinstance(params, Mapping):
            raise ConfigError("params must be an object", f"{path}.params")
        applies_to = d.get("applies_to", "all")
        _check_applies_to(applies_to, f"{path}.applies_to")
        if isinstance(applies_to, Mapping):
            applies_to = {"pair": [int(v) for v in applies_to["pair"]]}
        return cls(kind, params, mode, applies_to)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "mode": self.mode, "applies_to": self.applies_to,
                "params": dict(self.params)}

    def targets(self, kappa: int) -> list[int]:
        """Motif-set indices this spec applies to (both ends of a pair)."""
        a = self.applies_to
        if a == "all":
            return list(range(kappa))
        if isinstance(a, Mapping):
            return [int(v) for v in a["pair"]]
        if isinstance(a, (list, tuple)):
            return [int(v) for v in a]
        return [int(a)]

    def pairs(self, kappa: int) -> list[tuple[int, int]]:
        """Ordered index pairs for constraints between motif sets."""
        if isinstance(self.applies_to, Mapping):
            i, j = self.applies_to["pair"]
            return [(int(i), int(j))]
        t = self.targets(kappa)
        return [(i, j) for i in t for j in t if i != j]


def _is_int(v) -> bool:
    return isinstance(v, (int, np.integer)) and not isinstance(v, bool)


def _check_applies_to(a, path):
    if a == "all" or _is_int(a):
        if _is_int(a) and a < 0:
            raise ConfigError("index must be nonnegative", path)
        return
    if isinstance(a, list) and a and all(_is_int(v) and v >= 0 for v in a):
        return
    if (isinstance(a, Mapping) and set(a) == {"pair"} and isinstance(a["pair"], list)
            and len(a["pair"]) == 2 and all(_is_int(v) and v >= 0 for v in a["pair"])
            and a["pair"][0] != a["pair"][1]):
        return
    raise ConfigError('applies_to must be an index, a list of indices, "all" or {"pair": [i, j]}', path)


@dataclass(frozen=True)
class Fragment:
    """A compiled spec: ``slot`` names the bundle field (or ``"desirability"``
    / ``"pairwise"``) that ``value`` belongs in."""

    slot: str
    value: Any


class _Params:
    def __init__(self, spec: ConstraintSpec, path: str, base_dir):
        self.p = spec.params
        self.path = path
        self.base_dir = base_dir

    def _get(self, key):
        if key not in self.p:
            raise ConfigError(f"missing parameter {key!r}", f"{self.path}.params")
        return self.p[key]

    def number(self, key, lo=-math.inf, hi=math.inf, lo_open=False, hi_open=False, default=None):
        if default is not None and key not in self.p:
            return default
        v = self._get(key)
        if isinstance(v, bool) or not isinstance(v, (int, float, np.number)) or not math.isfinite(v):
            raise ConfigError(f"{key} must be a finite number", f"{self.path}.params.{key}")
        bad = v < lo or v > hi or (lo_open and v == lo) or (hi_open and v == hi)
        if bad:
            raise ConfigError(f"{key}={v} is out of range", f"{self.path}.params.{key}")
        return float(v)

    def integer(self, key, lo=0, default=None):
        if default is not None and key not in self.p:
            return default
        v = self._get(key)
        if not _is_int(v) or v < lo:
            raise ConfigError(f"{key} must be an integer >= {lo}", f"{self.path}.params.{key}")
        return int(v)

    def segment(self, key, n):
        v = self._get(key)
        if not (isinstance(v, (list, tuple)) and len(v) == 2 and all(_is_int(t) for t in v)):
            raise ConfigError(f"{key} must be [start, end]", f"{self.path}.params.{key}")
        b, e = max(0, int(v[0])), min(n - 1, int(v[1]))
        if b > e:
            raise ConfigError(f"{key} does not intersect the series", f"{self.path}.params.{key}")
        return Segment(b, e)

    def int_list(self, key):
        v = self._get(key)
        if not isinstance(v, (list, tuple)) or not v or not all(_is_int(t) for t in v):
            raise ConfigError(f"{key} must be a non-empty list of integers", f"{self.path}.params.{key}")
        return [int(t) for t in v]

    def mask(self, n, key="mask", binary=False):
        file_key = f"{key}_file"
        try:
            if key in self.p:
                m = Mask(np.asarray(self.p[key], dtype=float))
            elif file_key in self.p:
                fname = self.p[file_key]
                if self.base_dir is not None and not os.path.isabs(fname):
                    fname = os.path.join(self.base_dir, fname)
                m = read_mask_csv(fname)
            else:
                raise ConfigError(f"missing parameter {key!r} or {file_key!r}", f"{self.path}.params")
            m.check_length(n)
        except ConfigError:
            raise
        except (OSError, ValueError, TypeError) as exc:
            raise ConfigError(str(exc), f"{self.path}.params.{key}") from exc
        if binary and not m.binary:
            raise ConfigError("a hard mask must be binary (0/1)", f"{self.path}.params.{key}")
        return m


def _length_bounds(p: _Params):
    l_min = p.integer("l_min", 1)
    l_max = p.integer("l_max", 1)
    if l_max < l_min:
        raise ConfigError("l_max must be >= l_min", f"{p.path}.params.l_max")
    return l_min, l_max


def build(spec: ConstraintSpec, n: int, x=None, base_dir=None, path: str = "$") -> Fragment:
    """Compile one spec for a series of length ``n``.

    ``x`` is needed by kinds that look at the signal (``min_std``,
    ``min_skewness_repr``, ``peak_centered``); ``base_dir`` resolves relative
    mask file names.
    """
    p = _Params(spec, path, base_dir)
    kind, soft = spec.kind, spec.mode == SOFT

    def need_x():
        if x is None:
            raise ConfigError(f"kind {kind!r} needs the time series", path)
        return as_array(x)

    if kind == "min_cardinality":
        k = p.integer("k_min", 1)
        return Fragment("desirability", cat.SoftMinCardinality(k)) if soft else \
            Fragment("h_mset_others", cat.MinCardinality(k))
    if kind == "max_cardinality":
        k = p.integer("k_max", 1)
        if soft:
            return Fragment("desirability", cat.SoftMaxCardinality(k, p.number("rho_decay", 0, 1, True, True)))
        return Fragment("h_mset_others", cat.MaxCardinality(k))
    if kind == "min_coverage":
        c = p.number("c_min", 0, lo_open=soft)
        return Fragment("desirability", cat.SoftMinCoverage(c)) if soft else \
            Fragment("h_mset_others", cat.MinCoverage(c))
    if kind == "max_coverage":
        c = p.number("c_max", 0)
        if soft:
            return Fragment("desirability", cat.SoftMaxCoverage(c, p.number("rho_decay", 0, 1, True, True)))
        return Fragment("h_mset_others", cat.MaxCoverage(c))
    if kind == "length_range":
        l_min, l_max = _length_bounds(p)
        if soft:
            return Fragment("desirability",
                            cat.SoftLengthRange(l_min, l_max, p.number("rho_decay", 0, 1, True, True)))
        return Fragment("h_mot", cat.LengthRange(l_min, l_max))
    if kind == "min_std":
        sigma = p.number("sigma_min", 0, lo_open=soft)
        return Fragment("desirability", cat.SoftMinStd(need_x(), sigma)) if soft else \
            Fragment("h_mot", cat.MinStd(need_x(), sigma))
    if kind in ("begin_mask", "end_mask"):
        m = p.mask(n, binary=not soft)
        if kind == "begin_mask":
            return Fragment("desirability", cat.SoftStartMask(m)) if soft else Fragment("h_mot", cat.StartMask(m))
        return Fragment("desirability", cat.SoftEndMask(m)) if soft else Fragment("h_mot", cat.EndMask(m))
    if kind == "overlap_within":
        pred = cat.NotCoincident(p.number("nu", 0, 1), symmetric=True)
        return Fragment("desirability", lift_pairwise_to_desirability(pred)) if soft else \
            Fragment("h_mots_same", pred)
    if kind == "overlap_between":
        return Fragment("pairwise", cat.NotCoincident(p.number("nu", 0, 1)))
    if kind == "exact_cardinality":
        return Fragment("h_mset_others", cat.ExactCardinality(p.integer("k", 1)))
    if kind == "max_cardinality_discard":
        return Fragment("k_max_discard", p.integer("k", 1))
    if kind == "start_end_points":
        delta = p.integer("delta_l", 0)
        return Fragment("h_mot", cat.StartEndMask(points_mask(n, p.int_list("starts"), delta),
                                                  points_mask(n, p.int_list("ends"), delta)))
    if kind == "non_consecutive":
        return Fragment("h_mots_same", cat.NonConsecutive(p.integer("l_buffer", 0)))
    if kind == "positive_region_hard":
        return Fragment("h_mset_others", cat.PositiveRegion(p.segment("theta", n)))
    if kind == "positive_region_soft":
        return Fragment("desirability", cat.SoftPositiveRegion(p.segment("theta", n)))
    if kind == "soft_mask":
        if "regions" in spec.params:
            regions = spec.params["regions"]
            if not isinstance(regions, list) or not all(
                    isinstance(r, (list, tuple)) and len(r) == 2 and all(_is_int(t) for t in r) for r in regions):
                raise ConfigError("regions must be a list of [start, end]", f"{path}.params.regions")
            m = soften_mask(region_mask(n, [Segment(max(0, b), min(n - 1, e)) for b, e in regions]),
                            p.integer("transition", 0, default=0))
        else:
            m = p.mask(n)
        return Fragment("desirability", cat.SoftMaskAverage(m))
    if kind == "length_soft":
        l_min, l_max = _length_bounds(p)
        return Fragment("desirability", cat.soft_length(l_min, l_max))
    if kind == "cardinality_soft":
        k = p.integer("k", 1)
        rho = p.number("rho_decay", 0, 1, True, True)
        return Fragment("desirability", compose_desirabilities(
            [cat.SoftMinCardinality(k), cat.SoftMaxCardinality(k, rho)]))
    if kind == "min_skewness_repr":
        xs = need_x()
        if xs.shape[1] != 1:
            raise ConfigError("min_skewness_repr needs a univariate series", path)
        return Fragment("h_mot_repr", cat.MinSkewness(xs, p.number("gamma_min")))
    if kind == "peak_centered":
        xs = need_x()
        if xs.shape[1] != 1:
            raise ConfigError("peak_centered needs a univariate series", path)
        return Fragment("desirability", cat.PeakCentered(xs))
    if kind == "mpv_mask":
        m = p.mask(n, binary=not soft)
        if soft:
            return Fragment("desirability", cat.RepresentativeStart(m))
        return Fragment("h_mot_repr", cat.StartMask(m))
    if kind == "sampling_mask":
        return Fragment("desirability", cat.RepresentativeEnd(p.mask(n)))
    if kind == "repr_begin_end_masks":
        return Fragment("h_mot_repr", cat.StartEndMask(p.mask(n, "begin_mask", binary=True),
                                                       p.mask(n, "end_mask", binary=True)))
    raise ConfigError(f"unknown constraint kind {kind!r}", f"{path}.kind")  # pragma: no cover


def assemble(specs, kappa: int, n: int, x=None, base_dir=None
             ) -> tuple[list[HardConstraintBundle], list[Desirability], list[PairwiseConstraint]]:
    """Compile specs into per-index bundles, desirabilities and pairwise constraints.

    Several soft specs on the same index multiply. ``non_consecutive`` acts
    both within each targeted set and between every ordered pair of them.
    """
    slots = [{"h_mot": [], "h_mot_repr": [], "h_mots_same": [], "h_mset_others": [],
              "k_max_discard": None, "desirability": []} for _ in range(kappa)]
    pairwise: list[PairwiseConstraint] = []
    for idx, spec in enumerate(specs):
        path = f"$.constraints[{idx}]"
        targets = spec.targets(kappa)
        bad = [t for t in targets if t >= kappa]
        if bad:
            raise ConfigError(f"index {bad[0]} is not below kappa={kappa}", f"{path}.applies_to")
        frag = build(spec, n, x, base_dir, path)
        if frag.slot == "pairwise" or spec.kind == "non_consecutive":
            for i, j in spec.pairs(kappa):
                pairwise.append(PairwiseConstraint(i, j, motif_level=frag.value))
            if frag.slot == "pairwise":
                continue
        if isinstance(spec.applies_to, Mapping) and frag.slot != "h_mots_same":
            raise ConfigError(f"kind {spec.kind!r} does not take a pair", f"{path}.applies_to")
        for t in targets:
            if frag.slot == "k_max_discard":
                cur = slots[t]["k_max_discard"]
                slots[t]["k_max_discard"] = frag.value if cur is None else min(cur, frag.value)
            else:
                slots[t][frag.slot].append(frag.value)
    bundles = [HardConstraintBundle(tuple(s["h_mot"]), tuple(s["h_mot_repr"]), tuple(s["h_mots_same"]),
                                    s["k_max_discard"], tuple(s["h_mset_others"])) for s in slots]
    desirabilities = [compose_desirabilities(s["desirability"]) for s in slots]
    return bundles, desirabilities, pairwise
