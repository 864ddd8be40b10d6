"""Multistability: time-weighted intensity histogram vs branch predictions.

In the strongly multistable regime the intensity histogram of a long
trajectory develops one mode per quasi-coherent branch, at the predicted
normalized intensities and field phases.  This is a single-seed, reduced-
length illustration (the statistical acceptance checks pool several seeds
over much longer runs).

Run:  python3 demos/04_multistability_histogram.py  (outputs in demos/output/)
"""

import math
import pathlib
import time

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from quditcavity import (
    ModelParams,
    TrajectoryConfig,
    all_branches,
    empty_cavity_intensity,
    find_local_maxima,
    histogram,
    normalized_series,
    run_trajectory,
)
from quditcavity.fileio import write_histogram_csv

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

params = ModelParams(g=7.2, eta=12.0, delta=1.0)
CUTOFF = 320
space = params.space(CUTOFF)
dt = 0.05 / (params.g * math.sqrt(CUTOFF + 1))
config = TrajectoryConfig(t_final=250.0, record_stride=0.1, base_dt=dt, seed=1)

i0 = empty_cavity_intensity(params.eta, params.kappa, params.delta)
bright = [b for b in all_branches(params) if b.physical and b.n_ph / i0 > 0.1]
print(f"g = {params.g}, eta = {params.eta}, delta = {params.delta}: "
      f"bright branch ratios {[f'{b.n_ph / i0:.4f}' for b in bright]}")

t0 = time.perf_counter()
record = run_trajectory(params, space, config)
print(f"trajectory: {config.t_final}/kappa in {time.perf_counter() - t0:.0f} s, "
      f"{record.jump_times.size} jumps, leak {record.leak.max():.1e}")
series = normalized_series(record, params)

edges = np.linspace(0.0, 2.4, 81)
hist = histogram(series, edges, variable="ratio")
write_histogram_csv(OUT / "hist_ratio.csv", hist)
peaks = find_local_maxima(hist.columns[0].mass, edges,
                          min_mass=0.01 * hist.columns[0].mass.max())
print(f"ratio histogram peaks: {[f'{p:.3f}' for p in peaks[:6]]}")

pedges = np.linspace(-math.pi / 4, math.pi, 100)
phist = histogram(series, pedges, variable="phase")
write_histogram_csv(OUT / "hist_phase.csv", phist)
ppeaks = find_local_maxima(phist.columns[0].mass, pedges,
                           min_mass=0.01 * phist.columns[0].mass.max())
print(f"phase histogram peaks: {[f'{p:.3f} rad' for p in ppeaks[:6]]}")
print(f"predicted phases: {[f'{b.phase:.3f} rad' for b in bright]}")

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 3.8))
centers = 0.5 * (edges[:-1] + edges[1:])
ax1.bar(centers, hist.columns[0].mass, width=edges[1] - edges[0], align="center")
for b in bright:
    ax1.axvline(b.n_ph / i0, color="crimson", lw=1.0, ls="--")
ax1.set_xlabel("intensity $n/I_0$")
ax1.set_ylabel("dwell mass (time units)")
ax1.set_title("intensity modes at the predicted branches (dashed)")
pcenters = 0.5 * (pedges[:-1] + pedges[1:])
ax2.bar(pcenters, phist.columns[0].mass, width=pedges[1] - pedges[0], align="center")
for b in bright:
    ax2.axvline(b.phase, color="crimson", lw=1.0, ls="--")
ax2.set_xlabel("field phase (rad)")
ax2.set_title("phase modes")
fig.tight_layout()
fig.savefig(OUT / "multistability_histogram.png", dpi=130)
print(f"wrote {OUT / 'hist_ratio.csv'}, {OUT / 'hist_phase.csv'}, "
      f"{OUT / 'multistability_histogram.png'}")
