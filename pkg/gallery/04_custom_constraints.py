"""
Writing constraints in Python
=============================

Constraints are plain predicates on segments, pairs of segments or whole
motif sets, and desirabilities are functions into [0, 1]. Here we ask for a
single best motif set whose motifs all rise from start to end, and mildly
prefer sets with exactly three motifs.
"""
import numpy as np

from motif_forge.constraints import HardConstraintBundle
from motif_forge.constraints import catalogue as cat
from motif_forge.discovery import find_best_admissible_motif_set
from motif_forge.loco import LocoParams, compute_local_warping_paths

rng = np.random.default_rng(5)
x = rng.normal(scale=0.5, size=500)
up = np.linspace(-2, 2, 40) + 0.3 * np.sin(np.linspace(0, 6, 40))
for s in (20, 150, 300, 420):
    x[s:s + 40] = up
for s in (90, 230):
    x[s:s + 40] = up[::-1]

paths = compute_local_warping_paths((x - x.mean()) / x.std(), LocoParams(rho=0.8, l_min_path=20))
print(len(paths), "warping paths")

bundle = HardConstraintBundle(
    h_mot=(cat.LengthRange(30, 50), lambda s: x[s.end] > x[s.start] + 1.0),
    h_mots_same=(cat.NotCoincident(0.0, symmetric=True),),
)
best = find_best_admissible_motif_set(bundle, lambda m: 1.0 if len(m) == 3 else 0.8, paths, len(x))
print("motifs", sorted((s.start, s.end) for s in best.motif_set.motifs))
print(f"fitness {best.fitness:.3f}  desirability {best.desirability}  quality {best.weighted_quality:.3f}")
