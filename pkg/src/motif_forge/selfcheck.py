"""Built-in invariant checks, run by ``motif-forge selfcheck``.

Each check is small enough to finish in well under a second or two; the
full test suite covers the same ground more thoroughly.
"""
from __future__ import annotations

import math
from typing import Callable, Iterator

import numpy as np

from .candidates import CandidateMotifSet
from .constraints.base import _motifs
from .constraints.catalogue import NotCoincident, SoftMaxCardinality, SoftMinCardinality
from .constraints.specs import ConstraintSpec
from .core import MotifSet, Segment, is_coincident, search_space_digit_count
from .discovery import DiscoveryConfig, DiscoveryResult, discover, filter_candidate_motif_set
from .evaluation import evaluate
from .io import RunConfig, parse_result, serialize_result
from .synth import SynthSpec, synthesize

__all__ = ["hard_violations", "run_all"]


def hard_violations(result: DiscoveryResult, config: DiscoveryConfig) -> list[str]:
    """Every declared hard constraint that an emitted motif set breaks.

    Checks each motif, the representative, every ordered pair of motifs in a
    set, the discard cap, the whole-set predicates and every pairwise
    constraint between emitted sets, calling the predicates one by one.
    """
    out = []
    sets = result.motif_sets
    for i, m in enumerate(sets):
        if m is None:
            continue
        b = config.bundles[i]
        segs = _motifs(m)
        if len(segs) < 2:
            out.append(f"set {i}: fewer than two motifs")
        for s in segs:
            for p in b.h_mot:
                if not p(s):
                    out.append(f"set {i}: motif {s!r} fails {p!r}")
        for p in b.h_mot_repr:
            if not p(segs[0]):
                out.append(f"set {i}: representative fails {p!r}")
        for u, s in enumerate(segs):
            for v, t in enumerate(segs):
                if u != v:
                    for p in b.h_mots_same:
                        if not p(s, t):
                            out.append(f"set {i}: pair {s!r}, {t!r} fails {p!r}")
        if b.k_max_discard is not None and len(segs) > b.k_max_discard:
            out.append(f"set {i}: {len(segs)} motifs above the cap {b.k_max_discard}")
        for p in b.h_mset_others:
            if not p(m):
                out.append(f"set {i}: fails {p!r}")
    for c in config.pairwise:
        if sets[c.i] is not None and sets[c.j] is not None and not c.holds(sets[c.i], sets[c.j]):
            out.append(f"sets {c.i}, {c.j}: pairwise constraint fails")
    return out


def _check_catalogue():
    a = SoftMinCardinality(5)(MotifSet((Segment(0, 4), Segment(10, 14))))
    b = SoftMaxCardinality(7, 0.5)(MotifSet(tuple(Segment(10 * k, 10 * k + 4) for k in range(9))))
    ok = abs(a - 0.4) <= 1e-12 and abs(b - 0.25) <= 1e-12
    return ok, f"{a:.12g}, {b:.12g}"


def _check_search_space():
    r = search_space_digit_count(100, 2)
    small = search_space_digit_count(2, 1)
    return r.big_o_digits == 6021 and small.exact_digits == 1, f"O-digits {r.big_o_digits}"


def _check_filter():
    c = CandidateMotifSet((Segment(0, 9), Segment(5, 14), Segment(20, 29)), (10.0, 8.0, 7.0), (10, 10, 10))
    out = filter_candidate_motif_set(c, None, NotCoincident(0.0, symmetric=True))
    return list(out.motifs) == [Segment(0, 9), Segment(20, 29)], repr(list(out.motifs))


def _planted():
    spec = SynthSpec(n=500, patterns=({"template_length": 50, "occurrences": 2},), seed=3, min_gap=20)
    return synthesize(spec)


def _check_recovery():
    x, gt = _planted()
    cfg = RunConfig(kappa=1, rho=0.9, warping=False, nu=0.25, l_min=20, l_max=100).to_discovery_config(x)
    r = discover(x, cfg)
    rep = evaluate(r.motif_sets, gt)
    return rep.f1 == 1.0, f"F1 {rep.f1:.3g}"


def _check_soundness():
    x, _ = _planted()
    rc = RunConfig(kappa=2, rho=0.8, nu=0.0, constraints=[
        ConstraintSpec("max_cardinality_discard", {"k": 2}, applies_to=0),
        ConstraintSpec("length_range", {"l_min": 10, "l_max": 60}, applies_to=1),
    ])
    cfg = rc.to_discovery_config(x)
    bad = hard_violations(discover(x, cfg), cfg)
    return not bad, "; ".join(bad[:3])


def _check_determinism():
    x, _ = _planted()
    rc = RunConfig(kappa=2, rho=0.8, nu=0.25)
    a = serialize_result(discover(x, rc.to_discovery_config(x)))
    b = serialize_result(discover(x, rc.to_discovery_config(x, threads=3)))
    again = serialize_result(parse_result(a))
    return a == b == again, ""


def _check_coincidence():
    return (is_coincident(Segment(0, 9), Segment(5, 14), 0.4)
            and not is_coincident(Segment(0, 9), Segment(5, 14), 0.5)), ""


CHECKS: list[tuple[str, Callable]] = [
    ("catalogue cardinality desirabilities", _check_catalogue),
    ("search-space digit count", _check_search_space),
    ("overlap predicate", _check_coincidence),
    ("greedy filter", _check_filter),
    ("planted two-copy recovery", _check_recovery),
    ("hard-constraint soundness", _check_soundness),
    ("determinism and round trip", _check_determinism),
]


def run_all() -> Iterator[tuple[str, bool, str]]:
    for name, fn in CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:  # noqa: BLE001
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        yield name, bool(ok), detail
