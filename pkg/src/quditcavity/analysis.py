"""Trajectory post-processing: normalization, histograms, attractor dwells.

Intensity is reported relative to the resonant empty-cavity peak
I0 = (eta/kappa)^2 / (1 + (Delta/kappa)^2), so ratio 1 marks where a bare
cavity would sit and the quasi-coherent branches appear at their predicted
ratios n_u / I0.  The field phase comes from <a> directly.

Histograms are time-weighted: every sample carries its stride as weight, so
masses sum to the total sampled time and histograms from runs with
different strides can be pooled.  Values are clipped into the outermost
bins to keep that invariant exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .branches import BranchSolution
from .mcwf import TrajectoryRecord
from .model import ModelParams

__all__ = [
    "empty_cavity_intensity",
    "NormalizedSeries",
    "normalized_series",
    "HistogramColumn",
    "HistogramSet",
    "histogram",
    "find_local_maxima",
    "Segment",
    "BranchAssignment",
    "classify_and_dwell",
    "LinearResponse",
    "linear_response_reference",
    "time_average",
]


def empty_cavity_intensity(eta: float, kappa: float, delta: float) -> float:
    """Steady photon number of the bare driven cavity, eta^2/(kappa^2 + Delta^2)."""
    if eta < 0 or kappa <= 0:
        raise ValueError(f"need eta >= 0 and kappa > 0, got eta={eta}, kappa={kappa}")
    return eta * eta / (kappa * kappa + delta * delta)


@dataclass(eq=False)
class NormalizedSeries:
    """Per-sample intensity ratio and field phase with uniform time weights."""

    times: np.ndarray
    ratio: np.ndarray
    phase: np.ndarray
    stride: float


def normalized_series(record: TrajectoryRecord, params: ModelParams) -> NormalizedSeries:
    """Reduce a trajectory record to (n/I0, arg<a>) samples."""
    i0 = empty_cavity_intensity(params.eta, params.kappa, params.delta)
    if i0 == 0.0:
        raise ValueError("normalized series needs a drive (eta > 0)")
    stride = record.config.effective_stride
    return NormalizedSeries(
        times=record.times.copy(),
        ratio=record.n_ph / i0,
        phase=np.angle(record.a_expect),
        stride=stride,
    )


@dataclass(eq=False)
class HistogramColumn:
    sweep_value: float | None
    mass: np.ndarray
    total_time: float


@dataclass(eq=False)
class HistogramSet:
    edges: np.ndarray
    variable: str
    columns: list[HistogramColumn]


def _series_values(series: NormalizedSeries, variable: str) -> np.ndarray:
    if variable == "ratio":
        return series.ratio
    if variable == "phase":
        return series.phase
    raise ValueError(f"histogram variable must be 'ratio' or 'phase', got {variable!r}")


def histogram(
    series: "NormalizedSeries | list[NormalizedSeries]",
    edges: np.ndarray,
    variable: str = "ratio",
    sweep_value: float | None = None,
) -> HistogramSet:
    """Time-weighted histogram of one or more pooled series."""
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
        raise ValueError("edges must be a strictly increasing 1-d array of length >= 2")
    pool = [series] if isinstance(series, NormalizedSeries) else list(series)
    if not pool:
        raise ValueError("histogram needs at least one series")
    mass = np.zeros(edges.size - 1)
    total = 0.0
    for s in pool:
        values = np.clip(_series_values(s, variable), edges[0], edges[-1])
        counts, _ = np.histogram(values, bins=edges)
        mass += counts * s.stride
        total += values.size * s.stride
    return HistogramSet(
        edges=edges, variable=variable, columns=[HistogramColumn(sweep_value, mass, total)]
    )


def find_local_maxima(mass: np.ndarray, edges: np.ndarray, min_mass: float = 0.0) -> list[float]:
    """Bin centers that dominate both neighbors (plateau-tolerant), heaviest first."""
    centers = 0.5 * (edges[:-1] + edges[1:])
    peaks = []
    n = mass.size
    for i in range(n):
        if mass[i] <= min_mass:
            continue
        left = mass[i - 1] if i > 0 else -np.inf
        right = mass[i + 1] if i < n - 1 else -np.inf
        if mass[i] >= left and mass[i] >= right and (mass[i] > left or mass[i] > right):
            peaks.append((mass[i], centers[i]))
    peaks.sort(key=lambda p: (-p[0], p[1]))
    return [c for _, c in peaks]


@dataclass(frozen=True)
class Segment:
    """Maximal run of samples assigned to one attractor; u = 0 marks dim."""

    u: int
    t_start: float
    t_end: float

    @property
    def dwell(self) -> float:
        return self.t_end - self.t_start


@dataclass(eq=False)
class BranchAssignment:
    labels: np.ndarray
    segments: list[Segment]

    def mean_dwell(self) -> float:
        if not self.segments:
            raise ValueError("no segments to average")
        return float(np.mean([s.dwell for s in self.segments]))


def _attractor_table(
    branches: list[BranchSolution], params: ModelParams
) -> tuple[list[int], np.ndarray, np.ndarray]:
    i0 = empty_cavity_intensity(params.eta, params.kappa, params.delta)
    us, ratios, phases = [], [], []
    for sol in branches:
        if sol.physical and sol.n_ph is not None:
            us.append(sol.u)
            ratios.append(sol.n_ph / i0)
            phases.append(sol.phase)
    return us, np.asarray(ratios), np.asarray(phases)


def classify_and_dwell(
    series: NormalizedSeries,
    branches: list[BranchSolution],
    params: ModelParams,
    dim_threshold: float | None = None,
    min_dwell: float = 5.0,
) -> BranchAssignment:
    """Assign samples to the nearest attractor and merge sub-dwell flicker.

    Attractors are the physical branches (label u) plus, when
    ``dim_threshold`` is given, a dim state (label 0) claiming samples with
    ratio below the threshold.  Runs shorter than ``min_dwell`` are merged
    into their longer neighbor until every segment dwells at least that
    long, so a series already constant on segments of >= min_dwell is
    returned unchanged.  Segment boundaries sit on the sampling grid and
    consecutive segments abut; the last segment closes one stride after the
    final sample so dwells total the sampled time.
    """
    us, ratios, phases = _attractor_table(branches, params)
    if not us and dim_threshold is None:
        raise ValueError("need at least one physical branch or a dim threshold")

    n = series.times.size
    labels = np.zeros(n, dtype=np.int64)
    if us:
        spread = float(ratios.max() - ratios.min())
        ratio_scale = spread if spread > 0 else max(1.0, float(ratios.max()))
        dist = ((series.ratio[:, None] - ratios[None, :]) / ratio_scale) ** 2
        dist += (_phase_distance(series.phase[:, None], phases[None, :]) / math.pi) ** 2
        labels = np.asarray([us[k] for k in np.argmin(dist, axis=1)], dtype=np.int64)
    if dim_threshold is not None:
        labels[series.ratio < dim_threshold] = 0

    runs = _runs(labels)
    runs = _merge_short_runs(runs, series.stride, min_dwell)
    segments = []
    for label, start, stop in runs:
        t_start = series.times[start]
        t_end = series.times[stop - 1] + series.stride
        segments.append(Segment(u=int(label), t_start=float(t_start), t_end=float(t_end)))
    merged_labels = np.empty(n, dtype=np.int64)
    for label, start, stop in runs:
        merged_labels[start:stop] = label
    return BranchAssignment(labels=merged_labels, segments=segments)


def _phase_distance(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    d = np.abs(a - b)
    return np.minimum(d, 2.0 * math.pi - d)


def _runs(labels: np.ndarray) -> list[list]:
    runs = []
    start = 0
    for i in range(1, labels.size + 1):
        if i == labels.size or labels[i] != labels[start]:
            runs.append([int(labels[start]), start, i])
            start = i
    return runs


def _merge_short_runs(runs: list[list], stride: float, min_dwell: float) -> list[list]:
    # repeatedly fold the shortest sub-threshold run into its longer neighbor
    runs = [list(r) for r in runs]
    while len(runs) > 1:
        lengths = [(r[2] - r[1]) * stride for r in runs]
        order = sorted(range(len(runs)), key=lambda i: (lengths[i], i))
        idx = next((i for i in order if lengths[i] < min_dwell), None)
        if idx is None:
            break
        left = idx - 1 if idx > 0 else None
        right = idx + 1 if idx < len(runs) - 1 else None
        if left is None:
            target = right
        elif right is None:
            target = left
        else:
            target = left if lengths[left] >= lengths[right] else right
        # absorb, then fuse any now-adjacent equal labels
        runs[target][1] = min(runs[target][1], runs[idx][1])
        runs[target][2] = max(runs[target][2], runs[idx][2])
        del runs[idx]
        i = 1
        while i < len(runs):
            if runs[i][0] == runs[i - 1][0]:
                runs[i - 1][2] = runs[i][2]
                del runs[i]
            else:
                i += 1
    return runs


@dataclass(frozen=True)
class LinearResponse:
    alpha: complex
    n_ph: float


def linear_response_reference(params: ModelParams) -> LinearResponse:
    """Weak-drive dispersive field with all three qubits in the ground state.

    The fully inverted-down emitter shifts the cavity by -3 g^2 / Delta, so
    alpha = eta / (kappa - i (Delta - 3 g^2 / Delta)).  Undefined on bare
    resonance Delta = 0 (the dispersive shift diverges).
    """
    if params.delta == 0:
        raise ValueError("dispersive reference undefined at Delta = 0")
    shift = params.delta - 3.0 * params.g ** 2 / params.delta
    alpha = params.eta / complex(params.kappa, -shift)
    return LinearResponse(alpha=alpha, n_ph=abs(alpha) ** 2)


def time_average(series: NormalizedSeries, window: tuple[float, float]) -> float:
    """Mean ratio over samples with window[0] <= t <= window[1]."""
    lo, hi = window
    mask = (series.times >= lo) & (series.times <= hi)
    if not np.any(mask):
        raise ValueError(f"no samples inside window {window}")
    return float(np.mean(series.ratio[mask]))
