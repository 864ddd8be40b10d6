import math

import numpy as np
import pytest

from quditcavity import (
    ModelParams,
    all_branches,
    branch_solution,
    is_physical,
    onset_threshold,
    photon_number_quadratic,
    solution_map,
    zeta,
)


def test_zeta_values_and_validation():
    assert zeta(3, 7.2, 18.0, 1.0) == pytest.approx((3 * 7.2 / 36.0) / math.sqrt(2.0), rel=1e-15)
    assert zeta(-3, 7.2, 18.0, 1.0) == -zeta(3, 7.2, 18.0, 1.0)
    with pytest.raises(ValueError):
        zeta(2, 1.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        zeta(3, 1.0, 0.0, 0.0)


def test_physicality_boundaries():
    # exact boundary is included: delta = 0, g = 2, u = 3 gives zeta = 1
    # exactly in floating point at eta = 3
    assert zeta(3, 2.0, 3.0, 0.0) == 1.0
    assert is_physical(3, 2.0, 3.0, 0.0)
    assert not is_physical(3, 2.0, 2.999999, 0.0)
    # zeta*delta >= 0 arm: threshold shrinks with detuning
    g, delta, u = 4.0, 2.0, 3
    eta_star = abs(u) * g / (2.0 * math.sqrt(1 + delta ** 2))
    assert is_physical(u, g, eta_star * 1.001, delta)
    assert not is_physical(u, g, eta_star * 0.999, delta)
    # zeta*delta < 0 arm: threshold |u| g / 2, independent of delta
    u = -3
    eta_star = abs(u) * g / 2.0
    assert is_physical(u, g, eta_star * 1.001, delta)
    assert not is_physical(u, g, eta_star * 0.999, delta)


def test_onset_thresholds_reference_point():
    # g = 7.2, delta = 1: onsets at 7.2/(2 sqrt 2), 3.6, 21.6/(2 sqrt 2), 10.8
    expected = {
        1: 7.2 / (2 * math.sqrt(2)),
        -1: 3.6,
        3: 21.6 / (2 * math.sqrt(2)),
        -3: 10.8,
    }
    for u, eta_star in expected.items():
        assert onset_threshold(u, 7.2, 1.0) == pytest.approx(eta_star, rel=1e-15)
        assert is_physical(u, 7.2, eta_star + 1e-12, 1.0)
        assert not is_physical(u, 7.2, eta_star - 1e-9, 1.0)


def test_branch_count_vs_drive():
    # g = 7.2, delta = 1: eta = 3 supports only u = +1; eta = 18 all four
    p3 = ModelParams(g=7.2, eta=3.0, delta=1.0)
    assert [s.u for s in all_branches(p3) if s.physical] == [1]
    p18 = ModelParams(g=7.2, eta=18.0, delta=1.0)
    assert [s.u for s in all_branches(p18) if s.physical] == [-3, -1, 1, 3]


def test_nonphysical_branch_has_no_amplitude():
    sol = branch_solution(-3, ModelParams(g=7.2, eta=3.0, delta=1.0))
    assert not sol.physical
    assert sol.alpha is None and sol.n_ph is None and sol.phase is None
    assert sol.n_quadratic is None
    assert sol.zeta == pytest.approx(zeta(-3, 7.2, 3.0, 1.0), rel=1e-15)


def test_branch_resonance_reaches_empty_cavity_peak():
    # delta = u g / (2 eta) puts the branch at n = (eta/kappa)^2 exactly
    for u in (-3, -1, 1, 3):
        g, eta = 5.0, 11.0
        sol = branch_solution(u, ModelParams(g=g, eta=eta, delta=u * g / (2 * eta)))
        assert sol.physical
        assert abs(sol.n_ph - eta ** 2) < 1e-12 * eta ** 2


def test_closed_form_agrees_with_quadratic_root():
    rng = np.random.default_rng(2024)
    checked = 0
    while checked < 2000:
        g = float(rng.uniform(0.1, 25.0))
        eta = float(rng.uniform(0.05, 40.0))
        delta = float(rng.uniform(-5.0, 5.0))
        u = int(rng.choice([-3, -1, 1, 3]))
        if not is_physical(u, g, eta, delta):
            assert photon_number_quadratic(u, ModelParams(g=g, eta=eta, delta=delta)) is None
            continue
        sol = branch_solution(u, ModelParams(g=g, eta=eta, delta=delta))
        assert sol.n_quadratic is not None
        assert abs(sol.n_ph - sol.n_quadratic) / max(sol.n_ph, 1.0) < 1e-9
        checked += 1


def test_fixed_point_residual():
    # alpha solves alpha = (eta/kappa) / (1 - i(delta - u g/(2 kappa |alpha|)))
    rng = np.random.default_rng(99)
    checked = 0
    while checked < 500:
        g = float(rng.uniform(0.1, 20.0))
        eta = float(rng.uniform(0.1, 30.0))
        delta = float(rng.uniform(-4.0, 4.0))
        u = int(rng.choice([-3, -1, 1, 3]))
        if not is_physical(u, g, eta, delta):
            continue
        sol = branch_solution(u, ModelParams(g=g, eta=eta, delta=delta))
        if sol.n_ph < 1e-12:  # amplitude collapses to zero at hard boundaries
            checked += 1
            continue
        mapped = eta / (1 - 1j * (delta - u * g / (2 * abs(sol.alpha))))
        assert abs(sol.alpha - mapped) / abs(sol.alpha) < 1e-10
        checked += 1


def test_amplitude_monotone_in_drive():
    g, delta, u = 7.2, 1.0, 3
    etas = np.linspace(onset_threshold(u, g, delta) + 0.01, 40.0, 50)
    values = [branch_solution(u, ModelParams(g=g, eta=float(e), delta=delta)).n_ph for e in etas]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_small_zeta_branch_approaches_empty_cavity():
    # |zeta| = 1e-4: the branch intensity deviates from the empty-cavity
    # Lorentzian by O(zeta), far below 1e-3
    for delta in (-2.0, -1.0, 0.5, 1.0, 2.0):
        for u in (-3, 3):
            # pick eta so that zeta_u = sign(u) * 1e-4
            eta = abs(u) * 5.0 / (2.0 * 1e-4 * math.sqrt(1 + delta ** 2))
            sol = branch_solution(u, ModelParams(g=5.0, eta=eta, delta=delta))
            assert abs(sol.zeta) == pytest.approx(1e-4, rel=1e-12)
            i0 = eta ** 2 / (1 + delta ** 2)
            assert abs(sol.n_ph / i0 - 1.0) < 1e-3


def test_solution_map_matches_pointwise_checks():
    sol_map = solution_map(7.2, 1.0, (1.0, 20.0), (-3.0, 3.0), (39, 25))
    assert sol_map.mask.shape == (39, 25)
    for i in (0, 10, 25, 38):
        for j in (0, 6, 12, 24):
            eta = sol_map.eta_values[i]
            delta = sol_map.delta_values[j]
            expected = tuple(u for u in (-3, -1, 1, 3) if is_physical(u, 7.2, eta, delta))
            assert sol_map.physical_set(i, j) == expected
    # monotone in drive: bits only accumulate as eta grows
    for j in range(25):
        for i in range(1, 39):
            prev = set(sol_map.physical_set(i - 1, j))
            cur = set(sol_map.physical_set(i, j))
            assert prev <= cur


def test_solution_map_validation():
    with pytest.raises(ValueError):
        solution_map(1.0, 1.0, (0.0, 5.0), (-1.0, 1.0), 10)
    with pytest.raises(ValueError):
        solution_map(1.0, 1.0, (1.0, 5.0), (2.0, -2.0), 10)
    with pytest.raises(ValueError):
        solution_map(1.0, 1.0, (1.0, 5.0), (-1.0, 1.0), 0)
