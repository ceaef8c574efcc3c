"""Seeded random series and constraint configurations for soundness fuzzing."""
import numpy as np

from motif_forge.constraints import ConstraintSpec, assemble
from motif_forge.discovery import DiscoveryConfig
from motif_forge.loco import LocoParams

HARD_KINDS = ["min_cardinality", "max_cardinality", "min_coverage", "max_coverage", "length_range", "min_std",
              "begin_mask", "end_mask", "overlap_within", "overlap_between", "exact_cardinality",
              "max_cardinality_discard", "start_end_points", "non_consecutive", "positive_region_hard",
              "min_skewness_repr", "mpv_mask", "repr_begin_end_masks"]
SOFT_KINDS = ["min_cardinality", "max_coverage", "length_range", "positive_region_soft", "peak_centered",
              "cardinality_soft", "sampling_mask"]


def random_series(rng, n):
    """Noise with a few planted copies of one or two shapes."""
    x = rng.normal(scale=0.3, size=n)
    for _ in range(int(rng.integers(1, 3))):
        length = int(rng.integers(10, 40))
        shape = np.cumsum(rng.normal(size=length))
        shape = 2 * (shape - shape.mean()) / (shape.std() or 1.0)
        for _ in range(int(rng.integers(2, 5))):
            b = int(rng.integers(0, n - length))
            x[b:b + length] = shape + rng.normal(scale=0.05, size=length)
    return x


def _block_mask(rng, n, density=0.6):
    m = np.zeros(n)
    t = 0
    while t < n:
        w = int(rng.integers(3, 30))
        m[t:t + w] = float(rng.uniform() < density)
        t += w
    if not m.any():
        m[int(rng.integers(0, n))] = 1.0
    return m.tolist()


def _params(kind, rng, n):
    if kind in ("min_cardinality",):
        return {"k_min": int(rng.integers(2, 5))}
    if kind == "max_cardinality":
        return {"k_max": int(rng.integers(2, 6))}
    if kind == "min_coverage":
        return {"c_min": int(rng.integers(10, n // 3))}
    if kind == "max_coverage":
        return {"c_max": int(rng.integers(20, n))}
    if kind in ("length_range", "length_soft"):
        lo = int(rng.integers(5, 30))
        return {"l_min": lo, "l_max": lo + int(rng.integers(0, 40))}
    if kind == "min_std":
        return {"sigma_min": float(rng.uniform(0.1, 1.2))}
    if kind in ("begin_mask", "end_mask", "mpv_mask", "sampling_mask"):
        return {"mask": _block_mask(rng, n)}
    if kind in ("overlap_within", "overlap_between"):
        return {"nu": float(rng.choice([0.0, 0.1, 0.25, 0.5]))}
    if kind == "exact_cardinality":
        return {"k": int(rng.integers(2, 4))}
    if kind == "max_cardinality_discard":
        return {"k": int(rng.integers(2, 5))}
    if kind == "start_end_points":
        pts = sorted(int(v) for v in rng.integers(0, n, size=8))
        return {"starts": pts[:4], "ends": pts[4:], "delta_l": int(rng.integers(2, 15))}
    if kind == "non_consecutive":
        return {"l_buffer": int(rng.integers(0, 15))}
    if kind in ("positive_region_hard", "positive_region_soft"):
        b = int(rng.integers(0, n - 20))
        return {"theta": [b, b + int(rng.integers(15, 80))]}
    if kind == "min_skewness_repr":
        return {"gamma_min": float(rng.uniform(-1.0, 0.5))}
    if kind == "repr_begin_end_masks":
        return {"begin_mask": _block_mask(rng, n, 0.7), "end_mask": _block_mask(rng, n, 0.7)}
    if kind == "cardinality_soft":
        return {"k": int(rng.integers(2, 5)), "rho_decay": 0.5}
    if kind == "peak_centered":
        return {}
    raise KeyError(kind)


def _applies_to(rng, kappa):
    r = rng.uniform()
    if kappa == 1 or r < 0.5:
        return "all"
    if r < 0.8:
        return int(rng.integers(0, kappa))
    return sorted(set(int(v) for v in rng.integers(0, kappa, size=2)))


def random_specs(rng, n, kappa):
    """Plain-dict specs: 1 to 4 hard kinds plus at most one soft kind."""
    specs = []
    for kind in rng.choice(HARD_KINDS, size=int(rng.integers(1, 5)), replace=False):
        kind = str(kind)
        a = _applies_to(rng, kappa)
        if kind == "overlap_between":
            if kappa == 1:
                continue
            if rng.uniform() < 0.5:
                i, j = rng.choice(kappa, size=2, replace=False)
                a = {"pair": [int(i), int(j)]}
            else:
                a = "all"
        specs.append({"kind": kind, "mode": "hard", "applies_to": a, "params": _params(kind, rng, n)})
    if rng.uniform() < 0.5:
        kind = str(rng.choice(SOFT_KINDS))
        specs.append({"kind": kind, "mode": "soft", "applies_to": _applies_to(rng, kappa),
                      "params": _params(kind, rng, n) | ({"rho_decay": 0.5} if kind == "max_coverage" else {})
                      | ({"rho_decay": 0.7} if kind == "length_range" else {})})
    return specs


def random_case(seed, n_max=300):
    """(x, specs, DiscoveryConfig) for one fuzz case."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(80, n_max + 1))
    kappa = int(rng.integers(1, 4))
    x = random_series(rng, n)
    specs = random_specs(rng, n, kappa)
    bundles, ds, pairwise = assemble([ConstraintSpec.from_dict(s) for s in specs], kappa, n, x)
    loco = LocoParams(rho=float(rng.uniform(0.6, 0.9)), l_min_path=int(rng.integers(5, 12)))
    return x, specs, DiscoveryConfig(kappa, loco, bundles, ds, pairwise, stride=int(rng.choice([1, 2])))
