import math

import numpy as np
import pytest

from quditcavity import (
    ModelParams,
    NormalizedSeries,
    Segment,
    TrajectoryConfig,
    all_branches,
    classify_and_dwell,
    empty_cavity_intensity,
    find_local_maxima,
    histogram,
    linear_response_reference,
    normalized_series,
    time_average,
)
from quditcavity.mcwf import TrajectoryRecord


def make_series(ratio, phase=None, stride=1.0):
    ratio = np.asarray(ratio, dtype=float)
    if phase is None:
        phase = np.zeros_like(ratio)
    times = np.arange(ratio.size) * stride
    return NormalizedSeries(times=times, ratio=ratio, phase=np.asarray(phase, float), stride=stride)


def make_record(params, n_ph, a_expect, stride=0.5):
    n_ph = np.asarray(n_ph, dtype=float)
    cfg = TrajectoryConfig(t_final=stride * n_ph.size, record_stride=stride, base_dt=stride / 10)
    space = params.space(4)
    return TrajectoryRecord(
        times=np.arange(n_ph.size) * stride,
        n_ph=n_ph,
        a_expect=np.asarray(a_expect, complex),
        leak=np.zeros_like(n_ph),
        jump_times=np.array([]),
        jump_channels=np.array([], dtype=np.int64),
        truncation_valid=True,
        params=params,
        space=space,
        config=cfg,
        trajectory_index=0,
    )


def test_empty_cavity_intensity_values():
    assert empty_cavity_intensity(2.0, 1.0, 0.0) == pytest.approx(4.0)
    assert empty_cavity_intensity(2.0, 1.0, 2.0) == pytest.approx(0.8)
    assert empty_cavity_intensity(0.0, 1.0, 0.0) == 0.0
    with pytest.raises(ValueError):
        empty_cavity_intensity(-1.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        empty_cavity_intensity(1.0, 0.0, 0.0)


def test_normalized_series_ratio_and_phase():
    params = ModelParams(g=1.0, eta=2.0, delta=0.0)
    rec = make_record(params, n_ph=[4.0, 8.0], a_expect=[2.0, 2.0j])
    series = normalized_series(rec, params)
    assert series.ratio == pytest.approx([1.0, 2.0])
    assert series.phase == pytest.approx([0.0, math.pi / 2])
    assert series.stride == pytest.approx(0.5)


def test_normalized_series_requires_drive():
    params = ModelParams(g=1.0, eta=0.0, delta=0.0)
    rec = make_record(params, n_ph=[0.0], a_expect=[0.0])
    with pytest.raises(ValueError):
        normalized_series(rec, params)


def test_histogram_mass_equals_sampled_time():
    series = make_series([0.1, 0.5, 0.5, 0.9, 2.3], stride=0.25)
    edges = np.linspace(0.0, 1.0, 5)
    hist = histogram(series, edges)
    col = hist.columns[0]
    # out-of-range value clipped into the last bin, not dropped
    assert col.mass.sum() == pytest.approx(5 * 0.25)
    assert col.total_time == pytest.approx(5 * 0.25)
    assert col.mass[-1] == pytest.approx(2 * 0.25)  # 0.9 and clipped 2.3


def test_histogram_pools_mixed_strides():
    a = make_series([0.1, 0.1], stride=1.0)
    b = make_series([0.1, 0.9], stride=0.5)
    hist = histogram([a, b], np.array([0.0, 0.5, 1.0]))
    col = hist.columns[0]
    assert col.mass == pytest.approx([2.0 + 0.5, 0.5])
    assert col.total_time == pytest.approx(3.0)


def test_histogram_phase_variable_and_sweep_tag():
    series = make_series([1.0, 1.0], phase=[0.2, 1.1])
    hist = histogram(series, np.array([0.0, 0.5, 1.5]), variable="phase", sweep_value=7.0)
    assert hist.variable == "phase"
    assert hist.columns[0].sweep_value == 7.0
    assert hist.columns[0].mass == pytest.approx([1.0, 1.0])


def test_histogram_validation():
    series = make_series([0.1])
    with pytest.raises(ValueError):
        histogram(series, np.array([1.0, 0.5]))
    with pytest.raises(ValueError):
        histogram(series, np.array([0.0]))
    with pytest.raises(ValueError):
        histogram([], np.array([0.0, 1.0]))
    with pytest.raises(ValueError):
        histogram(series, np.array([0.0, 1.0]), variable="intensity")


def test_find_local_maxima_orders_by_mass():
    edges = np.arange(7.0)
    mass = np.array([0.0, 5.0, 0.0, 9.0, 0.0, 2.0])
    peaks = find_local_maxima(mass, edges)
    assert peaks == [3.5, 1.5, 5.5]


def test_find_local_maxima_plateau_and_floor():
    edges = np.arange(6.0)
    mass = np.array([1.0, 4.0, 4.0, 1.0, 0.5])
    # plateau: both plateau bins beat one side strictly
    peaks = find_local_maxima(mass, edges)
    assert set(peaks) == {1.5, 2.5}
    assert find_local_maxima(mass, edges, min_mass=4.0) == []


def test_classify_constant_series_single_segment():
    params = ModelParams(g=7.2, eta=18.0, delta=1.0)
    branches = [b for b in all_branches(params) if b.physical]
    i0 = empty_cavity_intensity(params.eta, params.kappa, params.delta)
    target = branches[1]  # u = -1
    n = 80
    series = make_series(np.full(n, target.n_ph / i0), np.full(n, target.phase), stride=1.0)
    out = classify_and_dwell(series, branches, params)
    assert np.all(out.labels == target.u)
    assert len(out.segments) == 1
    seg = out.segments[0]
    assert seg.u == target.u
    assert seg.t_start == 0.0
    assert seg.dwell == pytest.approx(n * 1.0)


def test_classify_two_attractors_and_dwell_sum():
    params = ModelParams(g=7.2, eta=18.0, delta=1.0)
    branches = [b for b in all_branches(params) if b.physical]
    i0 = empty_cavity_intensity(params.eta, params.kappa, params.delta)
    lo, hi = branches[1], branches[2]  # u = -1, +1
    ratio = np.concatenate([np.full(60, lo.n_ph / i0), np.full(40, hi.n_ph / i0)])
    phase = np.concatenate([np.full(60, lo.phase), np.full(40, hi.phase)])
    series = make_series(ratio, phase, stride=1.0)
    out = classify_and_dwell(series, branches, params)
    assert [s.u for s in out.segments] == [lo.u, hi.u]
    assert out.segments[0].dwell == pytest.approx(60.0)
    assert out.segments[1].dwell == pytest.approx(40.0)
    assert sum(s.dwell for s in out.segments) == pytest.approx(100.0)
    assert out.segments[0].t_end == out.segments[1].t_start
    assert out.mean_dwell() == pytest.approx(50.0)


def test_classify_merges_flicker():
    params = ModelParams(g=7.2, eta=18.0, delta=1.0)
    branches = [b for b in all_branches(params) if b.physical]
    i0 = empty_cavity_intensity(params.eta, params.kappa, params.delta)
    lo, hi = branches[1], branches[2]
    ratio = np.full(100, lo.n_ph / i0)
    phase = np.full(100, lo.phase)
    ratio[50:52] = hi.n_ph / i0  # 2-sample blip, shorter than min_dwell
    phase[50:52] = hi.phase
    series = make_series(ratio, phase, stride=1.0)
    out = classify_and_dwell(series, branches, params, min_dwell=5.0)
    assert len(out.segments) == 1
    assert out.segments[0].u == lo.u
    assert np.all(out.labels == lo.u)


def test_classify_dim_threshold():
    params = ModelParams(g=7.2, eta=18.0, delta=1.0)
    branches = [b for b in all_branches(params) if b.physical]
    ratio = np.concatenate([np.full(30, 0.01), np.full(30, 0.72)])
    phase = np.concatenate([np.full(30, 1.5), np.full(30, 0.9273)])
    series = make_series(ratio, phase, stride=1.0)
    out = classify_and_dwell(series, branches, params, dim_threshold=0.1)
    assert [s.u for s in out.segments] == [0, -1]
    assert out.segments[0].dwell == pytest.approx(30.0)


def test_classify_requires_attractors():
    params = ModelParams(g=7.2, eta=1.0, delta=-1.0)
    series = make_series(np.full(10, 0.5))
    with pytest.raises(ValueError):
        classify_and_dwell(series, [], params)


def test_segment_dwell_property():
    seg = Segment(u=3, t_start=2.0, t_end=7.5)
    assert seg.dwell == pytest.approx(5.5)


def test_linear_response_reference_values():
    params = ModelParams(g=0.9, eta=0.5, delta=-2.0)
    ref = linear_response_reference(params)
    shift = -2.0 - 3.0 * 0.81 / -2.0
    expected = 0.5 / complex(1.0, -shift)
    assert ref.alpha == pytest.approx(expected, rel=1e-12)
    assert ref.n_ph == pytest.approx(abs(expected) ** 2, rel=1e-12)
    with pytest.raises(ValueError):
        linear_response_reference(ModelParams(g=1.0, eta=0.5, delta=0.0))


def test_time_average_window():
    series = make_series([1.0, 2.0, 3.0, 4.0], stride=1.0)
    assert time_average(series, (1.0, 2.0)) == pytest.approx(2.5)
    assert time_average(series, (0.0, 10.0)) == pytest.approx(2.5)
    with pytest.raises(ValueError):
        time_average(series, (8.0, 9.0))
