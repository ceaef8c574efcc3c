"""Synthetic series with planted, optionally deformed pattern occurrences."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from .core import Segment, TimeSeries
from .errors import ConfigError
from .evaluation import GroundTruth

__all__ = ["PatternSpec", "SynthSpec", "synthesize", "warp_template"]


@dataclass(frozen=True)
class PatternSpec:
    """One planted pattern.

    jitter : each occurrence loses up to ``jitter`` samples at either end.
    warp : piecewise-linear time warp whose local stretch factors lie in
        ``[1 / warp, warp]``; 1 means no deformation.
    """

    template_length: int
    occurrences: int
    amplitude: float = 1.0
    jitter: int = 0
    warp: float = 1.0
    label: str | None = None

    def __post_init__(self):
        if self.template_length < 2:
            raise ValueError("template_length must be at least 2")
        if self.occurrences < 1:
            raise ValueError("occurrences must be at least 1")
        if self.jitter < 0 or 2 * self.jitter >= self.template_length:
            raise ValueError("jitter must be nonnegative and below half the template length")
        if self.warp < 1.0:
            raise ValueError("warp must be >= 1")


@dataclass(frozen=True)
class SynthSpec:
    """Series length, patterns, white-noise level and seed.

    The background is a stationary AR(1) process with unit variance scaled by
    ``background_scale``; ``min_gap`` is the smallest number of background
    samples between two occurrences.
    """

    n: int
    patterns: tuple[PatternSpec, ...]
    noise_sigma: float = 0.0
    seed: int = 0
    d: int = 1
    min_gap: int = 1
    background_scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "patterns", tuple(
            p if isinstance(p, PatternSpec) else PatternSpec(**p) for p in self.patterns))
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be nonnegative")
        if self.d < 1 or self.min_gap < 0:
            raise ValueError("d must be positive and min_gap nonnegative")

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "SynthSpec":
        allowed = {"n", "patterns", "noise_sigma", "seed", "d", "min_gap", "background_scale"}
        if not isinstance(d, Mapping):
            raise ConfigError("synthesis spec must be a JSON object")
        for key in d:
            if key not in allowed:
                raise ConfigError(f"unknown field {key!r}", f"$.{key}")
        for key in ("n", "patterns"):
            if key not in d:
                raise ConfigError(f"missing field {key!r}", f"$.{key}")
        if not isinstance(d["patterns"], list) or not d["patterns"]:
            raise ConfigError("expected a non-empty list", "$.patterns")
        pats = []
        for k, p in enumerate(d["patterns"]):
            try:
                pats.append(PatternSpec(**p))
            except (TypeError, ValueError) as exc:
                raise ConfigError(str(exc), f"$.patterns[{k}]") from exc
        try:
            return cls(**{**d, "patterns": tuple(pats)})
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc


def warp_template(t: np.ndarray, warp: float, rng: np.random.Generator, pieces: int = 3) -> np.ndarray:
    """Resample ``t`` (``(L, d)``) through a random piecewise-linear time map."""
    if warp == 1.0:
        return t.copy()
    L = t.shape[0]
    knots = np.linspace(0, L - 1, pieces + 1)
    factors = np.exp(rng.uniform(-np.log(warp), np.log(warp), pieces))
    new_knots = np.concatenate([[0.0], np.cumsum(np.diff(knots) * factors)])
    new_len = max(2, int(round(new_knots[-1])) + 1)
    # map every output sample back onto the original time axis
    src = np.interp(np.linspace(0, new_knots[-1], new_len), new_knots, knots)
    return np.stack([np.interp(src, np.arange(L), t[:, k]) for k in range(t.shape[1])], axis=1)


def _template(length: int, d: int, amplitude: float, rng) -> np.ndarray:
    w = np.cumsum(rng.normal(size=(length, d)), axis=0)
    w = (w - w.mean(axis=0)) / np.where(w.std(axis=0) > 0, w.std(axis=0), 1.0)
    return amplitude * w


def synthesize(spec: SynthSpec) -> tuple[TimeSeries, GroundTruth]:
    """Generate a series and the segments of every planted occurrence."""
    rng = np.random.default_rng(spec.seed)
    n, d = spec.n, spec.d
    phi = 0.95
    eps = rng.normal(scale=np.sqrt(1 - phi ** 2), size=(n, d))
    bg = np.empty((n, d))
    bg[0] = rng.normal(size=d)
    for t in range(1, n):
        bg[t] = phi * bg[t - 1] + eps[t]
    x = spec.background_scale * bg

    occ = []  # (pattern index, values)
    for p_idx, p in enumerate(spec.patterns):
        tmpl = _template(p.template_length, d, p.amplitude, rng)
        for _ in range(p.occurrences):
            w = warp_template(tmpl, p.warp, rng)
            a, c = (rng.integers(0, p.jitter + 1, size=2) if p.jitter else (0, 0))
            occ.append((p_idx, w[a:w.shape[0] - c]))
    total = sum(v.shape[0] for _, v in occ)
    free = n - total - spec.min_gap * (len(occ) - 1)
    if free < 0:
        raise ValueError(f"infeasible packing: {total} planted samples do not fit in n={n}")
    order = rng.permutation(len(occ))
    # split the free samples over the len(occ) + 1 gaps uniformly at random
    cuts = np.sort(rng.integers(0, free + 1, size=len(occ)))
    extra = np.diff(np.concatenate([[0], cuts]))
    groups: list[list[Segment]] = [[] for _ in spec.patterns]
    pos = 0
    for k, o in enumerate(order):
        p_idx, v = occ[o]
        pos += int(extra[k]) + (spec.min_gap if k else 0)
        x[pos:pos + v.shape[0]] = v
        groups[p_idx].append(Segment(pos, pos + v.shape[0] - 1))
        pos += v.shape[0]
    if spec.noise_sigma > 0:
        x = x + rng.normal(scale=spec.noise_sigma, size=x.shape)
    labels = [p.label or f"pattern{k}" for k, p in enumerate(spec.patterns)]
    return TimeSeries(x), GroundTruth([tuple(sorted(g)) for g in groups], labels)
