"""Command-line front end.

Subcommands: spectrum, branches, map, trajectory, ensemble, steady, hist.
Every run writes its outputs plus a manifest.json into the output directory
(--out, default $QUDITCAVITY_OUTDIR or the current directory).  Outputs are
deterministic: rerunning with identical arguments reproduces files byte for
byte, independent of --workers.

Exit codes: 0 success, 2 invalid arguments or inconsistent physics flags,
3 numerical-validity failure (outputs are still written, flagged).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import NormalizedSeries, empty_cavity_intensity, histogram
from .branches import all_branches, solution_map
from .fileio import (
    read_trajectory_csv,
    write_branch_csv,
    write_histogram_csv,
    write_jump_csv,
    write_manifest,
    write_map_csv,
    write_spectrum_csv,
    write_steady_json,
    write_trajectory_csv,
)
from .hilbert import EmitterKind
from .mcwf import TrajectoryConfig, run_ensemble, run_trajectory
from .model import ModelParams, suggested_fock_cutoff
from .spectrum import spectrum_rows
from .steady import DegenerateSteadyStateError, steady_state

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


class CliError(Exception):
    """Invalid argument combination detected past argparse."""


def _out_dir(args) -> Path:
    out = args.out or os.environ.get("QUDITCAVITY_OUTDIR") or "."
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _add_model_args(parser: argparse.ArgumentParser, drive: bool = True):
    parser.add_argument("--g", type=float, required=True, help="coupling in units of kappa")
    if drive:
        parser.add_argument("--eta", type=float, required=True, help="drive amplitude / kappa")
        parser.add_argument("--delta", type=float, required=True, help="drive detuning / kappa")
    parser.add_argument("--kappa", type=float, default=1.0, help="field decay rate (default 1)")
    parser.add_argument("--gamma", type=float, default=0.0, help="per-qubit decay / kappa")
    parser.add_argument(
        "--emitters",
        choices=["collective", "distinct"],
        default="collective",
        help="collective spin-3/2 or three distinct qubits",
    )


def _model_params(args) -> ModelParams:
    kind = EmitterKind(args.emitters)
    if args.gamma > 0 and kind is not EmitterKind.DISTINCT:
        raise CliError("--gamma > 0 requires --emitters distinct")
    try:
        return ModelParams(
            g=args.g,
            eta=getattr(args, "eta", 0.0),
            delta=getattr(args, "delta", 0.0),
            kappa=args.kappa,
            gamma=args.gamma,
            emitters=kind,
        )
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def _resolve_cutoff(args, params: ModelParams) -> int:
    if args.cutoff is not None:
        if args.cutoff < 1:
            raise CliError(f"--cutoff must be >= 1, got {args.cutoff}")
        return args.cutoff
    return suggested_fock_cutoff(params)


def _manifest_args(args, skip=("out", "func")) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


def cmd_spectrum(args) -> int:
    if args.n_max < 3:
        raise CliError("--n-max must be >= 3 to cover full manifolds")
    out = _out_dir(args)
    rows = spectrum_rows(args.g, args.delta, args.n_max, n_min=args.n_min)
    target = out / "spectrum.csv"
    write_spectrum_csv(target, rows)
    write_manifest(out, "spectrum", _manifest_args(args), [target.name])
    print(f"wrote {target} ({len(rows)} rows)")
    return EXIT_OK


def cmd_branches(args) -> int:
    params = _model_params(args)
    out = _out_dir(args)
    solutions = all_branches(params)
    target = out / "branches.csv"
    write_branch_csv(target, solutions)
    write_manifest(out, "branches", _manifest_args(args), [target.name])
    for sol in solutions:
        status = f"n = {sol.n_ph:.6g}, phase = {sol.phase:.6g}" if sol.physical else "not physical"
        print(f"u = {sol.u:+d}: zeta = {sol.zeta:+.6g}, {status}")
    return EXIT_OK


def cmd_map(args) -> int:
    if args.g < 0 or args.kappa <= 0:
        raise CliError(f"need g >= 0 and kappa > 0, got g={args.g}, kappa={args.kappa}")
    eta_steps = args.eta_steps or args.resolution
    delta_steps = args.delta_steps or args.resolution
    out = _out_dir(args)
    sol_map = solution_map(
        args.g,
        args.kappa,
        (args.eta_min, args.eta_max),
        (args.delta_min, args.delta_max),
        (eta_steps, delta_steps),
    )
    target = out / "solution_map.csv"
    write_map_csv(target, sol_map)
    write_manifest(out, "map", _manifest_args(args), [target.name])
    print(f"wrote {target} ({eta_steps} x {delta_steps} grid)")
    return EXIT_OK


def _trajectory_config(args) -> TrajectoryConfig:
    return TrajectoryConfig(
        t_final=args.t_final,
        record_stride=args.stride,
        base_dt=args.dt,
        seed=args.seed,
        initial_state=args.initial,
    )


def _default_dt(params: ModelParams, cutoff: int, requested: float | None) -> float:
    if requested is not None:
        return requested
    from .mcwf import FREQUENCY_GUARD, max_model_frequency

    space = params.space(cutoff)
    return FREQUENCY_GUARD / max_model_frequency(params, space)


def cmd_trajectory(args) -> int:
    params = _model_params(args)
    cutoff = _resolve_cutoff(args, params)
    space = params.space(cutoff)
    args.dt = _default_dt(params, cutoff, args.dt)
    config = _trajectory_config(args)
    record = run_trajectory(params, space, config, trajectory_index=args.index)
    out = _out_dir(args)
    traj = out / "trajectory.csv"
    jumps = out / "jumps.csv"
    write_trajectory_csv(traj, record)
    write_jump_csv(jumps, record)
    write_manifest(out, "trajectory", _manifest_args(args) | {"cutoff": cutoff}, [traj.name, jumps.name])
    print(f"wrote {traj} and {jumps} ({record.jump_times.size} jumps)")
    if not record.truncation_valid:
        print("warning: truncation leak exceeded threshold; results flagged", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


SWEEPABLE = ("g", "eta", "delta", "gamma")


def _parse_sweep(spec: str) -> tuple[str, list[float]]:
    name, sep, rest = spec.partition("=")
    if not sep or name not in SWEEPABLE:
        raise CliError(f"--sweep expects <{'|'.join(SWEEPABLE)}>=start:stop:step, got {spec!r}")
    parts = rest.split(":")
    if len(parts) != 3:
        raise CliError(f"--sweep range must be start:stop:step, got {rest!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError as exc:
        raise CliError(f"non-numeric sweep range {rest!r}") from exc
    if step <= 0 or stop < start:
        raise CliError(f"--sweep needs step > 0 and stop >= start, got {rest!r}")
    count = int(round((stop - start) / step)) + 1
    if count > 1000:
        raise CliError(f"sweep of {count} points is above the 1000-point cap")
    values = [start + step * k for k in range(count)]
    return name, [v for v in values if v <= stop + 1e-9 * step]


def _ensemble_into(args, params: ModelParams, target: Path, override: dict) -> tuple[int, list[str]]:
    cutoff = _resolve_cutoff(args, params)
    space = params.space(cutoff)
    dt = _default_dt(params, cutoff, args.dt)
    config = TrajectoryConfig(
        t_final=args.t_final,
        record_stride=args.stride,
        base_dt=dt,
        seed=args.seed,
        initial_state=args.initial,
    )
    records = run_ensemble(params, space, config, args.trajectories, workers=args.workers)
    target.mkdir(parents=True, exist_ok=True)
    outputs = []
    for rec in records:
        traj = target / f"traj_{rec.trajectory_index:04d}.csv"
        jumps = target / f"jumps_{rec.trajectory_index:04d}.csv"
        write_trajectory_csv(traj, rec)
        write_jump_csv(jumps, rec)
        outputs += [traj.name, jumps.name]
    manifest_args = _manifest_args(args) | {"cutoff": cutoff, "dt": dt} | override
    write_manifest(target, "ensemble", manifest_args, outputs)
    bad = sum(1 for rec in records if not rec.truncation_valid)
    if bad:
        print(f"warning: {bad} trajectories exceeded the truncation leak threshold", file=sys.stderr)
    return (EXIT_NUMERICAL if bad else EXIT_OK), outputs


def cmd_ensemble(args) -> int:
    params = _model_params(args)
    if args.trajectories < 1:
        raise CliError("--trajectories must be >= 1")
    if args.workers < 1:
        raise CliError("--workers must be >= 1")
    out = _out_dir(args)
    if args.sweep is None:
        code, outputs = _ensemble_into(args, params, out, {})
        print(f"wrote {len(outputs) // 2} trajectories to {out}")
        return code
    name, values = _parse_sweep(args.sweep)
    worst = EXIT_OK
    all_outputs = []
    for value in values:
        try:
            swept = dataclasses.replace(params, **{name: value})
        except ValueError as exc:
            raise CliError(f"sweep point {name}={value:g}: {exc}") from exc
        subdir = out / f"{name}_{value:g}"
        code, outputs = _ensemble_into(args, swept, subdir, {name: value})
        worst = max(worst, code)
        all_outputs += [f"{subdir.name}/{n}" for n in outputs]
    write_manifest(out, "ensemble", _manifest_args(args), all_outputs)
    print(f"wrote {len(values)} sweep points to {out}")
    return worst


def cmd_steady(args) -> int:
    params = _model_params(args)
    cutoff = _resolve_cutoff(args, params)
    space = params.space(cutoff)
    try:
        result = steady_state(params, space)
    except (DegenerateSteadyStateError, ValueError) as exc:
        raise CliError(str(exc)) from exc
    out = _out_dir(args)
    target = out / "steady.json"
    write_steady_json(target, result, params, cutoff)
    write_manifest(out, "steady", _manifest_args(args) | {"cutoff": cutoff}, [target.name])
    print(f"<n> = {result.n_ph:.12g}, residual = {result.residual:.3g}")
    return EXIT_OK


def _hist_params_from_manifest(path: Path) -> dict | None:
    manifest = path.parent / "manifest.json"
    if not manifest.exists():
        return None
    with open(manifest) as fh:
        payload = json.load(fh)
    return payload.get("arguments")


def cmd_hist(args) -> int:
    if args.bins < 2:
        raise CliError("--bins must be >= 2")
    if not args.inputs:
        raise CliError("hist needs at least one trajectory CSV")
    lo, hi = args.range
    if hi <= lo:
        raise CliError(f"--range needs lo < hi, got {args.range}")
    edges = np.linspace(lo, hi, args.bins + 1)

    series_list = []
    for name in args.inputs:
        path = Path(name)
        if not path.exists():
            raise CliError(f"input file {path} does not exist")
        cols = read_trajectory_csv(path)
        eta, delta, kappa = args.eta, args.delta, args.kappa
        if eta is None or delta is None:
            from_manifest = _hist_params_from_manifest(path)
            if from_manifest is None:
                raise CliError(
                    f"no manifest next to {path}; pass --eta/--delta/--kappa explicitly"
                )
            eta = from_manifest["eta"] if eta is None else eta
            delta = from_manifest["delta"] if delta is None else delta
            kappa = from_manifest.get("kappa", 1.0) if kappa is None else kappa
        times = cols["t"]
        stride = float(times[1] - times[0]) if times.size > 1 else 1.0
        i0 = empty_cavity_intensity(eta, kappa or 1.0, delta)
        series_list.append(
            NormalizedSeries(
                times=times,
                ratio=cols["n_ph"] / i0,
                phase=np.arctan2(cols["im_a"], cols["re_a"]),
                stride=stride,
            )
        )
    hist_set = histogram(series_list, edges, variable=args.variable)
    out = _out_dir(args)
    target = out / f"hist_{args.variable}.csv"
    write_histogram_csv(target, hist_set)
    write_manifest(out, "hist", _manifest_args(args), [target.name])
    print(f"wrote {target} (total mass {hist_set.columns[0].total_time:.6g})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quditcavity",
        description="Driven-dissipative cavity QED with a spin-3/2 qudit.",
    )
    parser.add_argument("--version", action="version", version=f"quditcavity {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("spectrum", help="dressed-ladder eigenvalue table")
    p.add_argument("--g", type=float, required=True)
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--n-min", type=int, default=0)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("branches", help="quasi-coherent branch table at one drive point")
    _add_model_args(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_branches)

    p = sub.add_parser("map", help="physical-branch bitmask over the (eta, delta) plane")
    p.add_argument("--g", type=float, required=True)
    p.add_argument("--kappa", type=float, default=1.0)
    p.add_argument("--eta-min", type=float, required=True)
    p.add_argument("--eta-max", type=float, required=True)
    p.add_argument("--delta-min", type=float, required=True)
    p.add_argument("--delta-max", type=float, required=True)
    p.add_argument("--resolution", type=int, default=101, help="grid points per axis")
    p.add_argument("--eta-steps", type=int, default=None, help="override drive-axis points")
    p.add_argument("--delta-steps", type=int, default=None, help="override detuning-axis points")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_map)

    for name, helptext in (
        ("trajectory", "single quantum-jump trajectory"),
        ("ensemble", "ensemble of quantum-jump trajectories"),
    ):
        p = sub.add_parser(name, help=helptext)
        _add_model_args(p)
        p.add_argument("--cutoff", type=int, default=None, help="Fock cutoff (default: suggested)")
        p.add_argument("--t-final", type=float, required=True, help="duration in 1/kappa")
        p.add_argument("--dt", type=float, default=None, help="base step (default: guard limit)")
        p.add_argument("--stride", type=float, default=0.1, help="sampling stride in 1/kappa")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--initial", default="ground", help="'ground' or 'fock:<k>'")
        p.add_argument("--out", default=None)
        if name == "trajectory":
            p.add_argument("--index", type=int, default=0, help="trajectory index (RNG stream)")
            p.set_defaults(func=cmd_trajectory)
        else:
            p.add_argument("--trajectories", type=int, required=True)
            p.add_argument("--workers", type=int, default=1)
            p.add_argument(
                "--sweep",
                default=None,
                metavar="NAME=START:STOP:STEP",
                help="repeat the ensemble over a parameter range, one subdirectory per value",
            )
            p.set_defaults(func=cmd_ensemble)

    p = sub.add_parser("steady", help="master-equation steady state (small systems)")
    _add_model_args(p)
    p.add_argument("--cutoff", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_steady)

    p = sub.add_parser("hist", help="time-weighted histogram from trajectory CSVs")
    p.add_argument("inputs", nargs="*", help="trajectory CSV files")
    p.add_argument("--variable", choices=["ratio", "phase"], default="ratio")
    p.add_argument("--bins", type=int, default=60)
    p.add_argument("--range", type=float, nargs=2, metavar=("LO", "HI"), required=True)
    p.add_argument("--eta", type=float, default=None, help="override manifest drive amplitude")
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--kappa", type=float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_hist)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
