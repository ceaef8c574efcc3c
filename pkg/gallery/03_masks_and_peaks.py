"""
Masks and peak centring
=======================

A binary mask on the representative keeps the search out of a region. A soft
desirability can prefer segments whose maximum sits mid-segment, which is
what one wants for beats in a spike train.
"""
import numpy as np

from motif_forge.constraints import ConstraintSpec
from motif_forge.discovery import discover
from motif_forge.io import RunConfig

rng = np.random.default_rng(0)
n = 400
x = rng.normal(size=n)
shape = 3 * np.cumsum(rng.normal(size=30))
for s in (10, 70, 130, 260, 330):
    x[s:s + 30] = shape

mask = np.r_[np.zeros(n // 2), np.ones(n - n // 2)]
rc = RunConfig(kappa=1, rho=0.8, nu=0.25, l_min=20, l_max=40, constraints=[
    ConstraintSpec("mpv_mask", {"mask": mask.tolist()})])
m = discover(x, rc.to_discovery_config(x)).motif_sets[0]
print("representative", m.representative, "motifs", sorted(m.motifs))

# %%
# Quasiperiodic spikes on a slow oscillation.
t = np.arange(1200)
y = rng.normal(scale=0.05, size=t.size) + 0.3 * np.sin(np.pi * t / 50)
c = 20.0
while c < t.size:
    y += np.exp(-0.5 * ((t - c) / 2.5) ** 2)
    c += 50 * rng.uniform(0.95, 1.05)

for extra in ([], [ConstraintSpec("peak_centered", {}, "soft")]):
    rc = RunConfig(kappa=2, rho=0.8, nu=0.25, l_min=30, l_max=70, constraints=extra)
    r = discover(y, rc.to_discovery_config(y))
    where = []
    for m in r.motif_sets:
        if m is not None:
            rep = m.representative
            where.append(round(int(np.argmax(y[rep.start:rep.end + 1])) / (rep.length - 1), 2))
    print("peak_centered" if extra else "plain        ", "relative peak position:", where)
