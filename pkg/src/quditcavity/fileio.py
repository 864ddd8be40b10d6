"""Deterministic text exports: CSV tables, steady-state JSON, run manifests.

Floats are written with repr-faithful precision ("%.17g") so reruns with
identical inputs produce byte-identical files; absent values are empty
cells.  Newlines are "\n" on every platform.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .branches import BranchSolution, SolutionMap
from .mcwf import TrajectoryRecord
from .model import ModelParams

__all__ = [
    "format_float",
    "write_csv",
    "write_spectrum_csv",
    "write_branch_csv",
    "write_map_csv",
    "write_trajectory_csv",
    "write_jump_csv",
    "read_trajectory_csv",
    "write_histogram_csv",
    "write_dwell_csv",
    "write_steady_json",
    "write_manifest",
]


def format_float(x) -> str:
    if x is None:
        return ""
    return "%.17g" % float(x)


def _format_cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return format_float(x)


def write_csv(path, header: list[str], rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_format_cell(cell) for cell in row) + "\n")


def write_spectrum_csv(path, rows: list[dict]):
    header = ["n", "u", "lambda_exact", "lambda_approx", "spacing_exact", "spacing_approx"]
    write_csv(path, header, ([r[k] for k in header] for r in rows))


def write_branch_csv(path, solutions: list[BranchSolution]):
    header = ["u", "zeta", "physical", "n", "phase", "n_quadratic"]
    rows = (
        [s.u, s.zeta, s.physical, s.n_ph, s.phase, s.n_quadratic]
        for s in solutions
    )
    write_csv(path, header, rows)


def write_map_csv(path, sol_map: SolutionMap):
    header = ["eta", "delta", "bitmask"]
    rows = (
        [eta, delta, int(sol_map.mask[i, j])]
        for i, eta in enumerate(sol_map.eta_values)
        for j, delta in enumerate(sol_map.delta_values)
    )
    write_csv(path, header, rows)


def write_trajectory_csv(path, record: TrajectoryRecord):
    header = ["t", "n_ph", "re_a", "im_a", "leak"]
    rows = (
        [record.times[i], record.n_ph[i], record.a_expect[i].real, record.a_expect[i].imag, record.leak[i]]
        for i in range(record.times.size)
    )
    write_csv(path, header, rows)


def write_jump_csv(path, record: TrajectoryRecord):
    header = ["t", "channel"]
    rows = (
        [record.jump_times[i], int(record.jump_channels[i])]
        for i in range(record.jump_times.size)
    )
    write_csv(path, header, rows)


def read_trajectory_csv(path) -> dict:
    """Columns of a trajectory CSV as float arrays (keys from the header)."""
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        data = [line.strip().split(",") for line in fh if line.strip()]
    cols = {name: np.array([float(row[k]) for row in data]) for k, name in enumerate(header)}
    return cols


def write_histogram_csv(path, hist_set):
    sweep = any(col.sweep_value is not None for col in hist_set.columns)
    header = ["bin_lo", "bin_hi", "mass"] + (["sweep_value"] if sweep else [])
    edges = hist_set.edges

    def rows():
        for col in hist_set.columns:
            for b in range(edges.size - 1):
                row = [edges[b], edges[b + 1], col.mass[b]]
                if sweep:
                    row.append(col.sweep_value)
                yield row

    write_csv(path, header, rows())


def write_dwell_csv(path, segments):
    header = ["u", "t_start", "t_end"]
    write_csv(path, header, ([s.u, s.t_start, s.t_end] for s in segments))


def _params_dict(params: ModelParams) -> dict:
    return {
        "g": params.g,
        "eta": params.eta,
        "delta": params.delta,
        "kappa": params.kappa,
        "gamma": params.gamma,
        "emitters": params.emitters.value,
    }


def write_steady_json(path, result, params: ModelParams, cutoff: int):
    payload = {
        "params": _params_dict(params),
        "cutoff": cutoff,
        "n_ph": result.n_ph,
        "re_a": result.a_expect.real,
        "im_a": result.a_expect.imag,
        "residual": result.residual,
    }
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_manifest(directory, subcommand: str, arguments: dict, outputs: list[str]):
    """Record what produced the files in a run directory."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    from . import __version__

    payload = {
        "tool": "quditcavity",
        "version": __version__,
        "subcommand": subcommand,
        "arguments": arguments,
        "outputs": sorted(outputs),
    }
    with open(directory / "manifest.json", "w", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return directory / "manifest.json"
