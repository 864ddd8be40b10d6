"""Quantum-jump (Monte Carlo wave function) unraveling of the master equation.

Between jumps the state evolves under the non-Hermitian H_eff with a fixed
step dt, using the 4th-order Taylor polynomial of exp(-i H_eff dt).  For a
linear autonomous system this polynomial is algebraically identical to the
classic 4th-order Runge-Kutta step, so full steps can be applied by one
precompiled sparse matrix while partial steps reuse the same polynomial in
the substep length.  The squared norm decays monotonically (all channel
rates are non-negative); a jump fires when it crosses a pre-drawn uniform
threshold r, and the crossing time inside the step is refined by bisection.
On that substep the squared norm is evaluated exactly as a degree-8
polynomial built from the Taylor vectors, so the refinement is cheap.  The
jump channel is then selected with probability proportional to
<psi|L^dag L|psi>, the channel operator applied, the state renormalized,
and a fresh threshold drawn.

Randomness contract (bit-reproducibility across runs and worker counts):
trajectory k of an ensemble with base seed s uses the counter-based Philox
generator seeded by SeedSequence(entropy=s, spawn_key=(k,)).  Each
trajectory draws one initial threshold, then exactly two uniforms per jump
(channel selection, then the next threshold), in that order.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
import multiprocessing

import numpy as np
import scipy.sparse as sp

from .hilbert import CompositeSpace, StateVector, annihilation, basis_state, embed, number
from .model import ModelParams, effective_hamiltonian, jump_channels

__all__ = [
    "FREQUENCY_GUARD",
    "LEAK_THRESHOLD",
    "StepSizeError",
    "TrajectoryConfig",
    "JumpEvent",
    "TrajectoryRecord",
    "trajectory_rng",
    "initial_state_vector",
    "max_model_frequency",
    "validate_step_size",
    "step",
    "run_trajectory",
    "run_ensemble",
]

# dimensionless accuracy guard: base_dt times the largest model frequency
FREQUENCY_GUARD = 0.05
# per-sample truncation alarm on the top five photon levels
LEAK_THRESHOLD = 1e-6
# jump-time bisection tolerance, relative to the step size
BISECTION_RTOL = 1e-6


class StepSizeError(RuntimeError):
    """Raised when the fixed step cannot resolve the dynamics safely."""


@dataclass(frozen=True)
class TrajectoryConfig:
    """Run plan for one trajectory or ensemble (times in units of 1/kappa).

    Samples are recorded every ``record_stride``; the stride is realized as
    the nearest whole number of base steps, so the effective stride is
    round(record_stride/base_dt)*base_dt and the run covers
    round(t_final/stride) strides.
    """

    t_final: float
    record_stride: float = 0.1
    base_dt: float = 1e-3
    seed: int = 0
    initial_state: str = "ground"

    def __post_init__(self):
        if self.t_final <= 0:
            raise ValueError(f"t_final must be > 0, got {self.t_final}")
        if self.base_dt <= 0:
            raise ValueError(f"base_dt must be > 0, got {self.base_dt}")
        if self.record_stride < self.base_dt:
            raise ValueError(
                f"record_stride ({self.record_stride}) must be >= base_dt ({self.base_dt})"
            )

    @property
    def steps_per_sample(self) -> int:
        return max(1, int(round(self.record_stride / self.base_dt)))

    @property
    def effective_stride(self) -> float:
        return self.steps_per_sample * self.base_dt

    @property
    def n_intervals(self) -> int:
        return max(1, int(round(self.t_final / self.effective_stride)))


@dataclass(frozen=True)
class JumpEvent:
    time: float
    channel: int


@dataclass(eq=False)
class TrajectoryRecord:
    """Sampled observables and jump log of a single trajectory.

    ``truncation_valid`` is False when any sample leaked more than
    LEAK_THRESHOLD of its population into the top five photon levels; the
    record is still returned, flagged.
    """

    times: np.ndarray
    n_ph: np.ndarray
    a_expect: np.ndarray
    leak: np.ndarray
    jump_times: np.ndarray
    jump_channels: np.ndarray
    truncation_valid: bool
    params: ModelParams
    space: CompositeSpace
    config: TrajectoryConfig
    trajectory_index: int


def trajectory_rng(seed: int, trajectory_index: int = 0) -> np.random.Generator:
    """Counter-based generator for one trajectory; independent of worker count."""
    seq = np.random.SeedSequence(entropy=seed, spawn_key=(trajectory_index,))
    return np.random.Generator(np.random.Philox(seq))


def initial_state_vector(space: CompositeSpace, descriptor: str) -> np.ndarray:
    """Normalized start state: 'ground' or 'fock:<k>' (k photons, emitter ground)."""
    if descriptor == "ground":
        return basis_state(space, 0, 0).amplitudes
    if descriptor.startswith("fock:"):
        k = int(descriptor.split(":", 1)[1])
        return basis_state(space, k, 0).amplitudes
    raise ValueError(f"unknown initial state descriptor {descriptor!r}")


def max_model_frequency(params: ModelParams, space: CompositeSpace) -> float:
    return max(
        abs(params.delta),
        params.g * math.sqrt(space.fock.cutoff),
        params.eta,
        params.kappa,
        params.gamma,
    )


def validate_step_size(params: ModelParams, space: CompositeSpace, base_dt: float):
    product = base_dt * max_model_frequency(params, space)
    if product > FREQUENCY_GUARD * (1.0 + 1e-12):
        raise StepSizeError(
            f"base_dt {base_dt} too large: dt * max frequency = {product:.3g} "
            f"exceeds the guard {FREQUENCY_GUARD}"
        )


def _taylor_vectors(a_op: sp.csr_matrix, psi: np.ndarray) -> tuple[np.ndarray, ...]:
    """(A^k psi / k!) for k = 0..4, with A = -i H_eff."""
    v1 = a_op @ psi
    v2 = (a_op @ v1) * 0.5
    v3 = (a_op @ v2) * (1.0 / 3.0)
    v4 = (a_op @ v3) * 0.25
    return (psi, v1, v2, v3, v4)


def _norm2_poly(vs: tuple[np.ndarray, ...]) -> np.ndarray:
    """Coefficients c of |psi(h)|^2 = sum_m c[m] h^m (degree 8, real)."""
    c = np.zeros(9)
    for j in range(5):
        c[2 * j] += np.vdot(vs[j], vs[j]).real
        for k in range(j + 1, 5):
            c[j + k] += 2.0 * np.vdot(vs[j], vs[k]).real
    return c


def _poly_eval(c: np.ndarray, h: float) -> float:
    acc = 0.0
    for m in range(8, -1, -1):
        acc = acc * h + c[m]
    return acc


def _state_at(vs: tuple[np.ndarray, ...], h: float) -> np.ndarray:
    acc = vs[4] * h + vs[3]
    acc = acc * h + vs[2]
    acc = acc * h + vs[1]
    return acc * h + vs[0]


def _resolve_jumps(
    a_op: sp.csr_matrix,
    rate_diags: list[np.ndarray],
    channel_ops: list[sp.csr_matrix],
    psi: np.ndarray,
    span: float,
    threshold: float,
    rng: np.random.Generator,
    t_start: float,
    tol: float,
    events: list[JumpEvent],
) -> tuple[np.ndarray, float]:
    """Advance psi across an interval known (or suspected) to contain a jump.

    Handles any number of jumps within the interval; returns the end state
    and the current (possibly re-drawn) threshold.
    """
    remaining = span
    t = t_start
    while True:
        vs = _taylor_vectors(a_op, psi)
        c = _norm2_poly(vs)
        if _poly_eval(c, remaining) > threshold:
            # rounding disagreement or post-jump remainder without a crossing
            return _state_at(vs, remaining), threshold
        lo, hi = 0.0, remaining
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if _poly_eval(c, mid) > threshold:
                lo = mid
            else:
                hi = mid
        tau = 0.5 * (lo + hi)
        psi_jump = _state_at(vs, tau)
        occupancy = np.abs(psi_jump) ** 2
        weights = np.array([d @ occupancy for d in rate_diags])
        total = float(weights.sum())
        if not math.isfinite(total) or total <= 0.0:
            raise StepSizeError("vanishing decay weight at a jump; step size likely too large")
        pick = rng.random() * total
        channel = int(np.searchsorted(np.cumsum(weights), pick, side="right"))
        channel = min(channel, len(channel_ops) - 1)
        psi = channel_ops[channel] @ psi_jump
        nrm = np.linalg.norm(psi)
        if nrm == 0.0 or not math.isfinite(nrm):
            raise StepSizeError("jump projected the state to zero; inconsistent channel")
        psi = psi / nrm
        events.append(JumpEvent(time=t + tau, channel=channel))
        threshold = rng.random()
        remaining -= tau
        t += tau
        if remaining <= 0.0:
            return psi, threshold


class _Propagator:
    """Precompiled pieces for fixed-step propagation of one (params, space, dt)."""

    def __init__(self, params: ModelParams, space: CompositeSpace, dt: float):
        self.dt = dt
        h_eff = effective_hamiltonian(params, space)
        self.a_op = (-1j * h_eff).tocsr()
        channels = jump_channels(params, space)
        self.channel_ops = [ch.operator.tocsr() for ch in channels]
        self.rate_diags = [
            np.asarray((ch.operator.conj().transpose().tocsr() @ ch.operator).diagonal()).real
            for ch in channels
        ]
        m = (self.a_op * dt).tocsr()
        ident = sp.identity(space.total_dim, dtype=np.complex128, format="csr")
        poly = ident + (m * 0.25)
        poly = ident + (m * (1.0 / 3.0)) @ poly
        poly = ident + (m * 0.5) @ poly
        self.transfer = (ident + m @ poly).tocsr()
        # observable helpers
        self.n_diag = np.asarray(embed(number(space.fock), "mode", space).diagonal()).real
        self.a_emb = embed(annihilation(space.fock), "mode", space).tocsr()
        leak_start = max(0, space.fock.cutoff - 4) * space.emitter.dim
        self.leak_slice = slice(leak_start, space.total_dim)


@lru_cache(maxsize=8)
def _propagator(params: ModelParams, space: CompositeSpace, dt: float) -> _Propagator:
    return _Propagator(params, space, dt)


def step(
    psi: StateVector,
    h_eff: sp.spmatrix,
    channels: list,
    dt: float,
    rng: np.random.Generator,
    threshold: float,
) -> tuple[StateVector, list[JumpEvent], float]:
    """One fixed step of the unraveling, standalone form.

    Returns (state after dt, jump events within the step, current threshold).
    Event times are relative to the start of the step.  The ensemble driver
    uses the same polynomial arithmetic through a precompiled fast path.
    """
    a_op = (-1j * h_eff).tocsr()
    rate_diags = [
        np.asarray((ch.operator.conj().transpose().tocsr() @ ch.operator).diagonal()).real
        for ch in channels
    ]
    channel_ops = [ch.operator.tocsr() for ch in channels]
    vs = _taylor_vectors(a_op, psi.amplitudes)
    events: list[JumpEvent] = []
    trial = _state_at(vs, dt)
    if np.vdot(trial, trial).real > threshold:
        return StateVector(trial, psi.space), events, threshold
    out, threshold = _resolve_jumps(
        a_op, rate_diags, channel_ops, psi.amplitudes, dt, threshold, rng, 0.0, BISECTION_RTOL * dt, events
    )
    return StateVector(out, psi.space), events, threshold


def run_trajectory(
    params: ModelParams,
    space: CompositeSpace,
    config: TrajectoryConfig,
    trajectory_index: int = 0,
) -> TrajectoryRecord:
    """Integrate one trajectory and sample observables on the stride grid."""
    validate_step_size(params, space, config.base_dt)
    prop = _propagator(params, space, config.base_dt)
    rng = trajectory_rng(config.seed, trajectory_index)
    psi = initial_state_vector(space, config.initial_state)

    dt = config.base_dt
    steps_per_sample = config.steps_per_sample
    n_intervals = config.n_intervals
    n_samples = n_intervals + 1
    tol = BISECTION_RTOL * dt

    times = np.arange(n_samples) * config.effective_stride
    n_ph = np.empty(n_samples)
    a_expect = np.empty(n_samples, dtype=np.complex128)
    leak = np.empty(n_samples)
    events: list[JumpEvent] = []

    def sample(slot: int, state: np.ndarray):
        occupancy = np.abs(state) ** 2
        norm2 = occupancy.sum()
        n_ph[slot] = (prop.n_diag @ occupancy) / norm2
        a_expect[slot] = np.vdot(state, prop.a_emb @ state) / norm2
        leak[slot] = occupancy[prop.leak_slice].sum() / norm2

    sample(0, psi)
    threshold = rng.random()
    transfer = prop.transfer
    step_index = 0
    for slot in range(1, n_samples):
        for _ in range(steps_per_sample):
            trial = transfer @ psi
            if np.vdot(trial, trial).real > threshold:
                psi = trial
            else:
                psi, threshold = _resolve_jumps(
                    prop.a_op,
                    prop.rate_diags,
                    prop.channel_ops,
                    psi,
                    dt,
                    threshold,
                    rng,
                    step_index * dt,
                    tol,
                    events,
                )
            step_index += 1
        sample(slot, psi)

    jump_times = np.array([ev.time for ev in events])
    jump_channel_ids = np.array([ev.channel for ev in events], dtype=np.int64)
    return TrajectoryRecord(
        times=times,
        n_ph=n_ph,
        a_expect=a_expect,
        leak=leak,
        jump_times=jump_times,
        jump_channels=jump_channel_ids,
        truncation_valid=bool(np.all(leak < LEAK_THRESHOLD)),
        params=params,
        space=space,
        config=config,
        trajectory_index=trajectory_index,
    )


def _run_one(task) -> TrajectoryRecord:
    params, space, config, index = task
    return run_trajectory(params, space, config, index)


def run_ensemble(
    params: ModelParams,
    space: CompositeSpace,
    config: TrajectoryConfig,
    n_trajectories: int,
    workers: int = 1,
) -> list[TrajectoryRecord]:
    """Run trajectories 0..n-1; results are identical for any worker count."""
    if n_trajectories < 1:
        raise ValueError(f"need at least one trajectory, got {n_trajectories}")
    tasks = [(params, space, config, k) for k in range(n_trajectories)]
    if workers <= 1:
        return [_run_one(task) for task in tasks]
    ctx = multiprocessing.get_context("fork")
    with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
        return list(pool.map(_run_one, tasks))
