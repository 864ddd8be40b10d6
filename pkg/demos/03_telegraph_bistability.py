"""Telegraph switching between metastable intensity levels.

A single quantum-jump trajectory in a bistable regime hops stochastically
between the dim (blockaded) state and a bright quasi-coherent branch.  The
script runs one trajectory, classifies each sample to its nearest
attractor, prints the dwell segments, and plots the telegraph signal with
the predicted branch levels overlaid.

Run:  python3 demos/03_telegraph_bistability.py   (outputs in demos/output/)
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from quditcavity import (
    ModelParams,
    TrajectoryConfig,
    all_branches,
    classify_and_dwell,
    empty_cavity_intensity,
    normalized_series,
    run_trajectory,
    suggested_fock_cutoff,
)
from quditcavity.fileio import write_dwell_csv, write_trajectory_csv

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

# negative detuning puts the descending ladders near resonance: u = -3
# sits close to its intensity maximum while the ascending ones stay weak
params = ModelParams(g=5.0, eta=4.3, delta=-2.0)
cutoff = suggested_fock_cutoff(params)
space = params.space(cutoff)
i0 = empty_cavity_intensity(params.eta, params.kappa, params.delta)

print(f"operating point g = {params.g}, eta = {params.eta}, delta = {params.delta}, "
      f"cutoff = {cutoff}")
branches = all_branches(params)
for sol in branches:
    if sol.physical:
        print(f"  branch u = {sol.u:+d}: n = {sol.n_ph:7.3f} (n/I0 = {sol.n_ph / i0:.3f})")
    else:
        print(f"  branch u = {sol.u:+d}: not physical")

config = TrajectoryConfig(t_final=300.0, record_stride=0.2, base_dt=1e-3, seed=3)
record = run_trajectory(params, space, config)
series = normalized_series(record, params)
write_trajectory_csv(OUT / "telegraph.csv", record)
print(f"\n{record.jump_times.size} jumps over {config.t_final}/kappa, "
      f"max truncation leak {record.leak.max():.2e}")

assignment = classify_and_dwell(series, branches, params, dim_threshold=0.05, min_dwell=5.0)
write_dwell_csv(OUT / "telegraph_dwell.csv", assignment.segments)
print("dwell segments (u = 0 is the dim state):")
for seg in assignment.segments:
    print(f"  u = {seg.u:+d}: t in [{seg.t_start:7.1f}, {seg.t_end:7.1f}], "
          f"dwell {seg.dwell:6.1f}/kappa")
print(f"mean dwell {assignment.mean_dwell():.1f}/kappa")

fig, ax = plt.subplots(figsize=(10, 3.6))
ax.plot(series.times, series.ratio, lw=0.6)
for sol in branches:
    if sol.physical and sol.n_ph / i0 > 0.05:
        ax.axhline(sol.n_ph / i0, color="crimson", lw=0.8, ls="--")
        ax.text(config.t_final * 1.004, sol.n_ph / i0, f"u={sol.u:+d}", color="crimson",
                va="center", fontsize=8)
ax.axhline(0.0, color="gray", lw=0.8, ls=":")
ax.set_xlabel("time $\\kappa t$")
ax.set_ylabel("intensity $n/I_0$")
ax.set_title("telegraph signal locked to the predicted attractor levels")
fig.tight_layout()
fig.savefig(OUT / "telegraph.png", dpi=130)
print(f"\nwrote {OUT / 'telegraph.csv'}, {OUT / 'telegraph_dwell.csv'}, "
      f"{OUT / 'telegraph.png'}")
