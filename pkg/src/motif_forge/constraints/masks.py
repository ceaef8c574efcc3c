"""Masks: per-time-index preferences or permissions in [0, 1]."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import uniform_filter1d

from ..core import Segment, as_array

__all__ = [
    "Mask",
    "build_mask_from_signal",
    "region_mask",
    "points_mask",
    "soften_mask",
    "read_mask_csv",
]


@dataclass(frozen=True, eq=False)
class Mask:
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64).ravel()
        if v.size == 0:
            raise ValueError("empty mask")
        if not np.all(np.isfinite(v)) or v.min() < 0.0 or v.max() > 1.0:
            raise ValueError("mask values must lie in [0, 1]")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def binary(self) -> bool:
        return bool(np.all((self.values == 0.0) | (self.values == 1.0)))

    def __len__(self):
        return self.values.size

    def __getitem__(self, idx):
        return self.values[idx]

    def check_length(self, n: int) -> "Mask":
        if len(self) != n:
            raise ValueError(f"mask has length {len(self)}, series has length {n}")
        return self


def _trailing_windows(n: int, window: int):
    starts = np.maximum(0, np.arange(n) - window + 1)
    return starts, np.arange(n)


def _window_std(x: np.ndarray, window: int) -> np.ndarray:
    n = x.shape[0]
    starts, ends = _trailing_windows(n, window)
    out = np.empty(n)
    for t in range(n):
        sub = x[starts[t]:ends[t] + 1]
        if sub.shape[1] == 1:
            out[t] = np.std(sub[:, 0])
        else:
            out[t] = np.std(np.linalg.norm(sub - sub.mean(axis=0), axis=1))
    return out


def _window_complexity(x: np.ndarray, window: int) -> np.ndarray:
    n = x.shape[0]
    sq = np.zeros(n)
    sq[1:] = np.sum(np.diff(x, axis=0) ** 2, axis=1)
    csum = np.concatenate([[0.0], np.cumsum(sq)])
    starts, ends = _trailing_windows(n, window)
    # differences inside the window start one sample after its first index
    lo = starts + 1
    total = np.where(lo <= ends, csum[ends + 1] - csum[np.minimum(lo, ends + 1)], 0.0)
    return np.sqrt(np.maximum(total, 0.0))


def build_mask_from_signal(x, method: str, window: int, threshold: float | None = None,
                           invert: bool = False) -> Mask:
    """Mask from a sliding-window statistic of ``x``.

    The window ends at each time index and is clipped at the series start.
    ``method`` is ``"std_window"``, ``"complexity_window"`` (norm of the
    first-order differences) or ``"binary_threshold"`` (the sample norm
    itself). With a ``threshold`` the statistic is binarised as
    ``stat >= threshold``; otherwise it is min-max scaled into [0, 1], a
    constant statistic mapping to zeros. ``invert`` flips the result.
    """
    x = as_array(x)
    n = x.shape[0]
    if window < 2:
        raise ValueError("window must be at least 2")
    if window > n:
        raise ValueError(f"window {window} exceeds series length {n}")
    if method == "std_window":
        stat = _window_std(x, window)
    elif method == "complexity_window":
        stat = _window_complexity(x, window)
    elif method == "binary_threshold":
        if threshold is None:
            raise ValueError("binary_threshold needs a threshold")
        stat = np.linalg.norm(x, axis=1) if x.shape[1] > 1 else x[:, 0]
    else:
        raise ValueError(f"unknown mask method {method!r}")

    if threshold is not None:
        values = (stat >= threshold).astype(float)
    else:
        lo, hi = float(stat.min()), float(stat.max())
        values = np.zeros(n) if hi - lo <= 1e-12 * max(1.0, abs(hi)) else (stat - lo) / (hi - lo)
    if invert:
        values = 1.0 - values
    return Mask(np.clip(values, 0.0, 1.0))


def region_mask(n: int, segments) -> Mask:
    """Binary mask that is 1 on the given segments."""
    m = np.zeros(n)
    for s in segments:
        s = s if isinstance(s, Segment) else Segment(*s)
        m[s.start:min(n, s.end + 1)] = 1.0
    return Mask(m)


def points_mask(n: int, points, delta: int) -> Mask:
    """Binary mask that is 1 within ``delta`` samples of any of ``points``."""
    m = np.zeros(n)
    for p in points:
        m[max(0, int(p) - delta):min(n, int(p) + delta + 1)] = 1.0
    return Mask(m)


def soften_mask(mask: Mask, width: int) -> Mask:
    """Replace every 0/1 transition by a linear ramp lasting ``width`` samples.

    A moving average over ``width`` samples turns a step into a ramp centred
    on the original transition; the series ends are extended with their edge
    value so they do not create ramps of their own.
    """
    if width <= 1:
        return mask
    return Mask(np.clip(uniform_filter1d(mask.values, size=int(width), mode="nearest"), 0.0, 1.0))


def read_mask_csv(path) -> Mask:
    """Load a single-column CSV mask (an optional non-numeric header is skipped)."""
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    try:
        float(lines[0].split(",")[0])
    except (ValueError, IndexError):
        lines = lines[1:]
    return Mask(np.array([float(ln.split(",")[0]) for ln in lines]))
