"""Quasi-coherent branches: onsets, amplitudes, and the existence map.

Each dressed ladder u supports a self-consistent coherent amplitude once
the drive passes its onset threshold.  This script prints the four branch
solutions at a strongly multistable operating point, sweeps the drive to
show the saturation of every branch toward the empty-cavity intensity,
and renders the existence bitmask over the (drive, detuning) plane.

Run:  python3 demos/02_branch_map.py        (outputs in demos/output/)
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from quditcavity import (
    ModelParams,
    U_LABELS,
    all_branches,
    empty_cavity_intensity,
    onset_threshold,
    solution_map,
)
from quditcavity.fileio import write_branch_csv, write_map_csv

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

G, DELTA = 7.2, 1.0

print(f"branch solutions at g = {G}, delta = {DELTA}, eta = 18 (all four physical):")
params = ModelParams(g=G, eta=18.0, delta=DELTA)
i0 = empty_cavity_intensity(18.0, 1.0, DELTA)
for sol in all_branches(params):
    print(f"  u = {sol.u:+d}: zeta = {sol.zeta:+.4f}, n = {sol.n_ph:8.3f}, "
          f"n/I0 = {sol.n_ph / i0:.4f}, phase = {sol.phase:+.4f} rad")
write_branch_csv(OUT / "branches_eta18.csv", all_branches(params))

print("\nonset thresholds (drive amplitude where each ladder becomes physical):")
for u in U_LABELS:
    print(f"  u = {u:+d}: eta* = {onset_threshold(u, G, DELTA):.6f}")

etas = np.linspace(0.5, 40.0, 400)
fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4))
for u in U_LABELS:
    ratios = []
    for eta in etas:
        sol = all_branches(ModelParams(g=G, eta=float(eta), delta=DELTA))[U_LABELS.index(u)]
        i0 = empty_cavity_intensity(float(eta), 1.0, DELTA)
        ratios.append(sol.n_ph / i0 if sol.physical else np.nan)
    ax1.plot(etas, ratios, label=f"u = {u:+d}")
    ax1.axvline(onset_threshold(u, G, DELTA), color="gray", lw=0.5, ls=":")
ax1.axhline(1.0, color="k", lw=0.6, ls="--")
ax1.set_xlabel("drive amplitude $\\eta/\\kappa$")
ax1.set_ylabel("branch intensity $n_u/I_0$")
ax1.set_title("branches appear at their onsets and saturate to $I_0$")
ax1.legend()

sol_map = solution_map(G, 1.0, (0.5, 14.0), (-4.0, 4.0), (240, 240))
write_map_csv(OUT / "solution_map.csv", sol_map)
count = np.zeros_like(sol_map.mask, dtype=int)
for bit in range(4):
    count += (sol_map.mask >> bit) & 1
im = ax2.imshow(
    count.T,
    origin="lower",
    aspect="auto",
    extent=(0.5, 14.0, -4.0, 4.0),
    cmap="viridis",
)
ax2.set_xlabel("drive amplitude $\\eta/\\kappa$")
ax2.set_ylabel("detuning $\\delta/\\kappa$")
ax2.set_title(f"number of physical branches (g = {G})")
fig.colorbar(im, ax=ax2, ticks=range(5))
fig.tight_layout()
fig.savefig(OUT / "branch_map.png", dpi=130)
print(f"\nwrote {OUT / 'branches_eta18.csv'}, {OUT / 'solution_map.csv'}, "
      f"{OUT / 'branch_map.png'}")
