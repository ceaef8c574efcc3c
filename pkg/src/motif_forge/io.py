"""File formats: series CSV, run configuration JSON and result JSON.

All segment indices in files are 0-based and inclusive on both ends.
"""
from __future__ import annotations

import csv
import json
import math
import os
import re
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from .constraints.specs import ConstraintSpec, assemble
from .core import MotifSet, Segment, TimeSeries
from .discovery import DiscoveryConfig, DiscoveryResult
from .errors import ConfigError, DataError
from .loco import LocoParams

__all__ = [
    "DEFAULT_MAX_N",
    "max_n",
    "load_time_series",
    "save_time_series",
    "RunConfig",
    "parse_config",
    "load_config",
    "serialize_result",
    "parse_result",
    "write_spans",
]

DEFAULT_MAX_N = 20000


def max_n() -> int:
    """Largest accepted series length (``MOTIF_FORGE_MAX_N`` overrides it)."""
    raw = os.environ.get("MOTIF_FORGE_MAX_N")
    if raw is None:
        return DEFAULT_MAX_N
    try:
        v = int(raw)
    except ValueError:
        raise ConfigError(f"MOTIF_FORGE_MAX_N must be an integer, got {raw!r}", "env")
    if v < 2:
        raise ConfigError("MOTIF_FORGE_MAX_N must be at least 2", "env")
    return v


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def load_time_series(path, format: str = "csv") -> TimeSeries:
    """Read a CSV with one row per sample and one column per dimension.

    A first row that is not entirely numeric is taken as a header. Blank
    lines are skipped. Errors name the 1-based file line and column.
    """
    if format != "csv":
        raise DataError(f"unsupported format {format!r}")
    try:
        with open(path, newline="") as fh:
            rows = [(k + 1, r) for k, r in enumerate(csv.reader(fh)) if r and any(c.strip() for c in r)]
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except (csv.Error, UnicodeDecodeError) as exc:
        raise DataError(f"cannot parse {path}: {exc}") from exc
    if rows and not all(_is_number(c.strip()) for c in rows[0][1]):
        rows = rows[1:]
    if not rows:
        raise DataError(f"{path}: no data rows")
    width = len(rows[0][1])
    data = np.empty((len(rows), width))
    for r, (line, cells) in enumerate(rows):
        if len(cells) != width:
            raise DataError(f"{path}: line {line} has {len(cells)} columns, expected {width}")
        for c, cell in enumerate(cells):
            try:
                v = float(cell.strip())
            except ValueError:
                raise DataError(f"{path}: line {line}, column {c + 1}: not a number: {cell.strip()!r}") from None
            if not math.isfinite(v):
                raise DataError(f"{path}: line {line}, column {c + 1}: non-finite value {cell.strip()!r}")
            data[r, c] = v
    if data.shape[0] < 2:
        raise DataError(f"{path}: need at least 2 samples")
    return TimeSeries(data)


def save_time_series(path, x, header: list[str] | None = None):
    arr = np.asarray(x.values if isinstance(x, TimeSeries) else x, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        if header:
            w.writerow(header)
        for row in arr:
            w.writerow([repr(float(v)) for v in row])


# -- configuration ---------------------------------------------------------------

_ENVELOPE = {"kappa", "rho", "warping", "nu", "l_min", "l_max", "constraints", "stride", "seed",
             "gamma", "l_min_path", "normalize"}


@dataclass
class RunConfig:
    """A validated configuration file, not yet bound to a series.

    ``nu`` adds symmetric within-set and between-set overlap constraints for
    every motif set; ``l_min``/``l_max`` add a hard length range for every
    motif set. ``l_min_path`` defaults to ``max(5, l_min)``.
    """

    kappa: int = 1
    rho: float = 0.5
    warping: bool = True
    nu: float | None = None
    l_min: int | None = None
    l_max: int | None = None
    constraints: list[ConstraintSpec] = field(default_factory=list)
    stride: int = 1
    seed: int | None = None
    gamma: float = 1.0
    l_min_path: int | None = None
    normalize: bool = True

    def all_specs(self) -> list[ConstraintSpec]:
        specs = []
        if self.l_min is not None or self.l_max is not None:
            specs.append(ConstraintSpec("length_range", {
                "l_min": self.l_min if self.l_min is not None else 1,
                "l_max": self.l_max if self.l_max is not None else 2 ** 62}, "hard", "all"))
        if self.nu is not None:
            specs.append(ConstraintSpec("overlap_within", {"nu": self.nu}, "hard", "all"))
            if self.kappa > 1:
                specs.append(ConstraintSpec("overlap_between", {"nu": self.nu}, "hard", "all"))
        return specs + list(self.constraints)

    def path_length(self) -> int:
        if self.l_min_path is not None:
            return self.l_min_path
        return max(5, self.l_min or 5)

    def to_discovery_config(self, x, base_dir=None, threads: int = 1) -> DiscoveryConfig:
        """Compile the constraints against series ``x``."""
        ts = x if isinstance(x, TimeSeries) else TimeSeries(x)
        specs = self.all_specs()
        # user specs sit after the implicit ones in all_specs but keep their own JSON paths
        offset = len(specs) - len(self.constraints)
        try:
            bundles, ds, pairwise = assemble(specs, self.kappa, ts.n, ts.values, base_dir)
        except ConfigError as exc:
            raise _shift_path(exc, offset) from None
        loco = LocoParams(rho=self.rho, warping=self.warping, l_min_path=self.path_length(), gamma=self.gamma)
        return DiscoveryConfig(kappa=self.kappa, loco=loco, bundles=bundles, desirabilities=ds,
                               pairwise=pairwise, stride=self.stride, threads=threads,
                               normalize=self.normalize,
                               same_for_all=all(s.applies_to == "all" for s in specs))

    def to_dict(self) -> dict:
        d: dict[str, Any] = {"kappa": self.kappa, "rho": self.rho, "warping": self.warping}
        for key in ("nu", "l_min", "l_max", "seed"):
            if getattr(self, key) is not None:
                d[key] = getattr(self, key)
        if self.l_min_path is not None:
            d["l_min_path"] = self.l_min_path
        d.update(stride=self.stride, gamma=self.gamma, normalize=self.normalize,
                 constraints=[c.to_dict() for c in self.constraints])
        return d


def _shift_path(exc: ConfigError, offset: int) -> ConfigError:
    m = re.match(r"\$\.constraints\[(\d+)\](.*)", exc.path)
    if not m:
        return exc
    k = int(m.group(1)) - offset
    msg = str(exc)[len(exc.path) + 2:]
    if k < 0:
        return ConfigError(msg, "$")
    return ConfigError(msg, f"$.constraints[{k}]{m.group(2)}")


def _req_type(d, key, kinds, check=None, what=""):
    v = d[key]
    if isinstance(v, bool) and bool not in kinds:
        raise ConfigError(f"expected {what}, got {json.dumps(v)}", f"$.{key}")
    if not isinstance(v, kinds) or (check is not None and not check(v)):
        raise ConfigError(f"expected {what}, got {json.dumps(v)}", f"$.{key}")
    return v


def parse_config(doc) -> RunConfig:
    """Validate a configuration (a JSON string or a decoded mapping)."""
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, Mapping):
        raise ConfigError("configuration must be a JSON object")
    unknown = sorted(set(doc) - _ENVELOPE)
    if unknown:
        raise ConfigError(f"unknown field {unknown[0]!r}", f"$.{unknown[0]}")
    kw: dict[str, Any] = {}
    if "kappa" in doc:
        kw["kappa"] = _req_type(doc, "kappa", (int,), lambda v: v >= 1, "an integer >= 1")
    if "rho" in doc:
        kw["rho"] = float(_req_type(doc, "rho", (int, float), lambda v: 0 <= v <= 1, "a number in [0, 1]"))
    if "warping" in doc:
        kw["warping"] = _req_type(doc, "warping", (bool,), None, "a boolean")
    if "normalize" in doc:
        kw["normalize"] = _req_type(doc, "normalize", (bool,), None, "a boolean")
    if doc.get("nu") is not None:
        kw["nu"] = float(_req_type(doc, "nu", (int, float), lambda v: 0 <= v <= 1, "a number in [0, 1]"))
    for key in ("l_min", "l_max"):
        if doc.get(key) is not None:
            kw[key] = _req_type(doc, key, (int,), lambda v: v >= 1, "an integer >= 1")
    if "l_min" in kw and "l_max" in kw and kw["l_max"] < kw["l_min"]:
        raise ConfigError("l_max must be >= l_min", "$.l_max")
    if "stride" in doc:
        kw["stride"] = _req_type(doc, "stride", (int,), lambda v: v >= 1, "an integer >= 1")
    if doc.get("seed") is not None:
        kw["seed"] = _req_type(doc, "seed", (int,), None, "an integer")
    if "gamma" in doc:
        kw["gamma"] = float(_req_type(doc, "gamma", (int, float), lambda v: v > 0, "a positive number"))
    if "l_min_path" in doc:
        kw["l_min_path"] = _req_type(doc, "l_min_path", (int,), lambda v: v >= 2, "an integer >= 2")
    raw = doc.get("constraints", [])
    if not isinstance(raw, list):
        raise ConfigError("expected a list", "$.constraints")
    kw["constraints"] = [ConstraintSpec.from_dict(c, f"$.constraints[{k}]") for k, c in enumerate(raw)]
    cfg = RunConfig(**kw)
    for k, spec in enumerate(cfg.constraints):
        bad = [t for t in spec.targets(cfg.kappa) if t >= cfg.kappa]
        if bad:
            raise ConfigError(f"index {bad[0]} is not below kappa={cfg.kappa}", f"$.constraints[{k}].applies_to")
    return cfg


def load_config(path) -> RunConfig:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return parse_config(text)


# -- results -----------------------------------------------------------------------

def _num(v: float) -> float:
    v = float(f"{float(v):.12g}")
    return 0.0 if v == 0 else v


def serialize_result(r: DiscoveryResult, meta: Mapping[str, Any] | None = None) -> str:
    """Result as a JSON document with a stable layout and 12 significant digits."""
    from . import __version__

    sets = []
    for i, m in enumerate(r.motif_sets):
        if m is None:
            sets.append(None)
            continue
        rep = m.representative
        scores = m.scores or (0.0,) * len(m)
        sets.append({
            "index": i,
            "representative": {"start": rep.start, "end": rep.end},
            "motifs": [{"start": s.start, "end": s.end, "score": _num(sc)} for s, sc in zip(m.motifs, scores)],
            "fitness": _num(r.fitnesses[i]),
            "desirability": _num(r.desirabilities[i]),
            "weighted_quality": _num(r.weighted_qualities[i]),
        })
    meta = dict(meta or {})
    doc = {
        "motif_sets": sets,
        "meta": {
            "kappa": len(r.motif_sets),
            "rho": _num(meta["rho"]) if meta.get("rho") is not None else None,
            "nu": _num(meta["nu"]) if meta.get("nu") is not None else None,
            "version": __version__,
        },
        "trace": [{
            "selected": t.get("selected"),
            "evaluated": t.get("evaluated", 0),
            "rejections": {k: v for k, v in sorted(t.get("rejections", {}).items())},
        } for t in r.trace],
    }
    return json.dumps(doc, indent=2) + "\n"


def parse_result(text: str) -> DiscoveryResult:
    """Inverse of :func:`serialize_result` (scores come back rounded)."""
    try:
        doc = json.loads(text)
        sets = doc["motif_sets"]
        kappa = len(sets)
        out = DiscoveryResult([None] * kappa, [0.0] * kappa, [0.0] * kappa, [0.0] * kappa)
        for i, rec in enumerate(sets):
            if rec is None:
                continue
            motifs = tuple(Segment(int(m["start"]), int(m["end"])) for m in rec["motifs"])
            out.motif_sets[i] = MotifSet(motifs, tuple(float(m["score"]) for m in rec["motifs"]))
            out.fitnesses[i] = float(rec["fitness"])
            out.desirabilities[i] = float(rec["desirability"])
            out.weighted_qualities[i] = float(rec["weighted_quality"])
        out.trace = [dict(t) for t in doc.get("trace", [])]
        return out
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"malformed result document: {exc}") from exc


def write_spans(path, r: DiscoveryResult):
    """Tab-separated ``start, end, set, rank`` rows, one per discovered motif."""
    with open(path, "w") as fh:
        fh.write("start\tend\tset\trank\n")
        for i, m in enumerate(r.motif_sets):
            if m is None:
                continue
            for rank, s in enumerate(m.motifs):
                fh.write(f"{s.start}\t{s.end}\t{i}\t{rank}\n")
