"""Scoring discovered motif sets against labelled ground truth.

Motifs are matched by Jaccard overlap of their index sets. Within a pair of
(discovered set, ground-truth group) motifs are matched greedily by
decreasing overlap; discovered sets are then assigned one-to-one to groups.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .constraints.specs import ConstraintSpec
from .core import MotifSet, Segment, intersection_length
from .errors import ConfigError, DataError

__all__ = [
    "GroundTruth",
    "EvalReport",
    "jaccard",
    "match_motif",
    "match_count",
    "evaluate",
    "BENCHMARK_CONSTRAINTS",
    "derive_benchmark_constraints",
]


def _segments(m) -> tuple[Segment, ...]:
    motifs = m.motifs if isinstance(m, MotifSet) else m
    return tuple(s if isinstance(s, Segment) else Segment(*s) for s in motifs)


@dataclass
class GroundTruth:
    motif_sets: list[tuple[Segment, ...]]
    labels: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.motif_sets = [_segments(g) for g in self.motif_sets]
        if not self.labels:
            self.labels = [f"set{i}" for i in range(len(self.motif_sets))]
        self.labels = [str(lb) for lb in self.labels]
        if len(self.labels) != len(self.motif_sets):
            raise ValueError("one label per ground-truth group is required")
        if any(len(g) == 0 for g in self.motif_sets):
            raise ValueError("ground-truth groups must be non-empty")

    def __len__(self):
        return len(self.motif_sets)

    def to_dict(self) -> dict:
        return {"motif_sets": [{"label": lb, "motifs": [{"start": s.start, "end": s.end} for s in g]}
                               for lb, g in zip(self.labels, self.motif_sets)]}

    @classmethod
    def from_dict(cls, d) -> "GroundTruth":
        try:
            groups = d["motif_sets"]
            sets = [[Segment(int(m["start"]), int(m["end"])) for m in g["motifs"]] for g in groups]
            labels = [g.get("label", f"set{i}") for i, g in enumerate(groups)]
            return cls(sets, labels)
        except (KeyError, TypeError, ValueError) as exc:
            raise DataError(f"malformed ground truth: {exc}") from exc

    def save(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "GroundTruth":
        try:
            with open(path) as fh:
                d = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise DataError(f"cannot read ground truth {path}: {exc}") from exc
        return cls.from_dict(d)


@dataclass
class EvalReport:
    precision: float
    recall: float
    f1: float
    per_set_assignment: dict[int, str | None]
    ignored_sets: list[int]
    matched_discovered: int = 0
    matched_gt: int = 0

    def to_dict(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "per_set_assignment": {str(k): v for k, v in sorted(self.per_set_assignment.items())},
            "ignored_sets": list(self.ignored_sets),
        }


def jaccard(a: Segment, b: Segment) -> float:
    inter = intersection_length(a, b)
    return inter / (a.length + b.length - inter)


def match_motif(beta: Segment, beta_gt: Segment, threshold: float = 0.5) -> bool:
    """Whether two segments overlap by at least ``threshold`` in Jaccard terms."""
    if not 0.0 < threshold <= 1.0:
        raise ValueError("threshold must lie in (0, 1]")
    return jaccard(beta, beta_gt) >= threshold


def match_count(discovered: Sequence[Segment], gt: Sequence[Segment], threshold: float = 0.5) -> int:
    """Size of the greedy one-to-one matching by decreasing Jaccard overlap."""
    pairs = []
    for i, a in enumerate(discovered):
        for j, b in enumerate(gt):
            jac = jaccard(a, b)
            if jac >= threshold:
                pairs.append((-jac, i, j))
    pairs.sort()
    used_d, used_g = set(), set()
    for _, i, j in pairs:
        if i not in used_d and j not in used_g:
            used_d.add(i)
            used_g.add(j)
    return len(used_d)


def _canonical_order(groups: list[tuple[Segment, ...]]) -> list[int]:
    return sorted(range(len(groups)), key=lambda k: (tuple(sorted(groups[k])), k))


def evaluate(discovered, gt: GroundTruth, ignore_unmatched_sets: bool = False,
             threshold: float = 0.5) -> EvalReport:
    """Precision, recall and F1 of discovered motif sets.

    ``discovered`` may contain ``None`` for empty slots. Each discovered set
    is assigned to at most one ground-truth group so that the total number
    of matched motifs is maximal (ties: larger summed per-pair F1). With
    ``ignore_unmatched_sets`` discovered sets that match no motif are left
    out of the precision denominator and listed in ``ignored_sets``.
    """
    if gt is None or len(gt) == 0:
        raise ValueError("no ground truth")
    if not 0.0 < threshold <= 1.0:
        raise ValueError("threshold must lie in (0, 1]")
    slots = [(i, _segments(m)) for i, m in enumerate(discovered) if m is not None and len(_segments(m))]
    disc = [s for _, s in slots]
    # canonical ordering makes the result independent of input permutations
    d_order = _canonical_order(disc)
    g_order = _canonical_order(gt.motif_sets)
    counts = np.zeros((len(disc), len(gt)), dtype=np.int64)
    f1s = np.zeros((len(disc), len(gt)))
    for a, di in enumerate(d_order):
        for b, gi in enumerate(g_order):
            m = match_count(disc[di], gt.motif_sets[gi], threshold)
            counts[a, b] = m
            f1s[a, b] = 2.0 * m / (len(disc[di]) + len(gt.motif_sets[gi]))
    assignment: dict[int, str | None] = {i: None for i, _ in slots}
    matched = 0
    matched_sets = set()
    if len(disc):
        # matched count dominates, summed F1 (< number of pairs + 1) breaks ties
        weight = counts + f1s / (min(counts.shape) + 1.0)
        rows, cols = linear_sum_assignment(weight, maximize=True)
        for a, b in zip(rows, cols):
            di, gi = d_order[a], g_order[b]
            if counts[a, b] > 0:
                assignment[slots[di][0]] = gt.labels[gi]
                matched += int(counts[a, b])
                matched_sets.add(di)
    ignored = sorted(slots[k][0] for k in range(len(disc)) if k not in matched_sets) \
        if ignore_unmatched_sets else []
    denom = sum(len(disc[k]) for k in range(len(disc))
                if not ignore_unmatched_sets or k in matched_sets)
    total_gt = sum(len(g) for g in gt.motif_sets)
    precision = matched / denom if denom else 0.0
    recall = matched / total_gt
    f1 = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)
    return EvalReport(precision, recall, f1, assignment, ignored, matched, matched)


# -- constraints derived from ground truth -----------------------------------------

BENCHMARK_CONSTRAINTS = (
    "exact_cardinality", "max_cardinality", "start_end_points", "non_consecutive",
    "positive_region", "length",
    "cardinality_soft", "soft_mask", "positive_region_soft", "length_soft",
)

_ALIASES = {
    "exactcardinality": "exact_cardinality",
    "maxcardinality": "max_cardinality",
    "startandendpoints": "start_end_points",
    "startendpoints": "start_end_points",
    "nonconsecutivemotifs": "non_consecutive",
    "nonconsecutive": "non_consecutive",
    "positiveregion": "positive_region",
    "length": "length",
    "cardinality": "cardinality_soft",
    "cardinalitysoft": "cardinality_soft",
    "softmask": "soft_mask",
    "positiveregionsoft": "positive_region_soft",
    "softpositiveregion": "positive_region_soft",
    "lengthsoft": "length_soft",
    "softlength": "length_soft",
}


def _avg_gap(gt: GroundTruth) -> float:
    segs = sorted(s for g in gt.motif_sets for s in g)
    gaps = [max(0, b.start - a.end - 1) for a, b in zip(segs, segs[1:])]
    return float(np.mean(gaps)) if gaps else 0.0


def derive_benchmark_constraints(gt: GroundTruth, which: str, seed: int = 0,
                                 rho_decay: float = 0.5) -> list[ConstraintSpec]:
    """Constraint specs for each ground-truth group, index ``i`` for group ``i``.

    ``which`` is one of :data:`BENCHMARK_CONSTRAINTS` (case, spaces and
    punctuation are ignored, so ``"Start- and End-points"`` works too; plain
    ``"positive_region"`` and ``"length"`` are the hard forms). ``seed``
    picks the ground-truth motif behind each positive region; ``rho_decay``
    is the decay of the soft cardinality.
    """
    key = _ALIASES.get(re.sub(r"[^a-z]", "", which.lower()))
    if key is None:
        raise ConfigError(f"unknown benchmark constraint {which!r}")
    rng = np.random.default_rng(seed)
    specs: list[ConstraintSpec] = []
    if key == "non_consecutive":
        return [ConstraintSpec("non_consecutive", {"l_buffer": int(round(_avg_gap(gt) / 2))},
                               applies_to="all")]
    for i, group in enumerate(gt.motif_sets):
        lengths = [s.length for s in group]
        avg = float(np.mean(lengths))
        k = len(group)
        if key == "exact_cardinality":
            specs.append(ConstraintSpec("exact_cardinality", {"k": k}, applies_to=i))
        elif key == "max_cardinality":
            specs.append(ConstraintSpec("max_cardinality_discard", {"k": k}, applies_to=i))
        elif key == "start_end_points":
            specs.append(ConstraintSpec("start_end_points", {
                "starts": [s.start for s in group], "ends": [s.end for s in group],
                "delta_l": int(round(avg / 4))}, applies_to=i))
        elif key in ("positive_region", "positive_region_soft"):
            s = group[int(rng.integers(k))]
            half = s.length // 2
            theta = [max(0, s.start - half), s.end + half]
            kind = "positive_region_hard" if key == "positive_region" else "positive_region_soft"
            specs.append(ConstraintSpec(kind, {"theta": theta}, applies_to=i))
        elif key == "length":
            specs.append(ConstraintSpec("length_range", {"l_min": min(lengths), "l_max": max(lengths)},
                                        applies_to=i))
        elif key == "length_soft":
            specs.append(ConstraintSpec("length_soft", {"l_min": min(lengths), "l_max": max(lengths)},
                                        applies_to=i))
        elif key == "cardinality_soft":
            specs.append(ConstraintSpec("cardinality_soft", {"k": k, "rho_decay": rho_decay}, applies_to=i))
        elif key == "soft_mask":
            specs.append(ConstraintSpec("soft_mask", {
                "regions": [[s.start, s.end] for s in group],
                "transition": int(round(avg / 2))}, applies_to=i))
    return specs
