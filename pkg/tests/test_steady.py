import numpy as np
import pytest
import scipy.sparse as sp

from quditcavity import (
    DegenerateSteadyStateError,
    EmitterKind,
    ModelParams,
    annihilation,
    embed,
    hamiltonian,
    jump_channels,
    liouvillian,
    null_space_dimension,
    number,
    propagate,
    propagate_grid,
    steady_state,
    validate_density_matrix,
)


def dense_reference_liouvillian(params, space):
    """Independent dense construction, element by element via superoperator action."""
    d = space.total_dim
    h = hamiltonian(params, space).toarray()
    chans = [ch.operator.toarray() for ch in jump_channels(params, space)]
    gen = np.zeros((d * d, d * d), dtype=complex)
    for col in range(d * d):
        rho = np.zeros((d, d), dtype=complex)
        rho[col // d, col % d] = 1.0
        out = -1j * (h @ rho - rho @ h)
        for lop in chans:
            out += lop @ rho @ lop.conj().T - 0.5 * (lop.conj().T @ lop @ rho + rho @ lop.conj().T @ lop)
        gen[:, col] = out.reshape(-1)
    return gen


def test_liouvillian_matches_dense_reference():
    params = ModelParams(g=1.3, eta=0.8, delta=-0.6)
    space = params.space(3)
    gen = liouvillian(params, space).toarray()
    ref = dense_reference_liouvillian(params, space)
    assert np.max(np.abs(gen - ref)) < 1e-13 * max(1.0, np.max(np.abs(ref)))


def test_liouvillian_preserves_trace():
    # vec(identity) is a left null vector
    params = ModelParams(g=2.0, eta=1.0, delta=0.5)
    space = params.space(4)
    gen = liouvillian(params, space)
    d = space.total_dim
    left = np.eye(d, dtype=complex).reshape(-1) @ gen
    scale = np.max(np.abs(gen.data))
    assert np.max(np.abs(left)) < 1e-12 * scale


def test_liouvillian_dimension_cap():
    params = ModelParams(g=1.0, eta=1.0, delta=0.0)
    with pytest.raises(ValueError):
        liouvillian(params, params.space(200))


def test_empty_cavity_steady_state():
    res = steady_state(ModelParams(g=0.0, eta=1.0, delta=0.0), ModelParams(g=0.0, eta=1.0, delta=0.0).space(20))
    assert res.n_ph == pytest.approx(1.0, abs=1e-8)
    assert res.a_expect == pytest.approx(1.0 + 0.0j, abs=1e-8)
    res2 = steady_state(ModelParams(g=0.0, eta=1.0, delta=2.0), ModelParams(g=0.0, eta=1.0, delta=2.0).space(20))
    assert res2.n_ph == pytest.approx(0.2, abs=1e-8)


def test_steady_state_density_matrix_is_valid():
    params = ModelParams(g=2.0, eta=1.0, delta=0.0)
    res = steady_state(params, params.space(10))
    validate_density_matrix(res.rho, atol=1e-9)
    assert res.residual < 1e-10


def test_degenerate_null_space_reported():
    # undriven, undamped emitter sector: vacuum times any emitter mixture is steady
    params = ModelParams(g=0.0, eta=0.0, delta=1.0)
    with pytest.raises(DegenerateSteadyStateError):
        steady_state(params, params.space(3))


def test_gamma_lifts_degeneracy():
    params = ModelParams(g=0.0, eta=0.0, delta=1.0, gamma=0.05, emitters=EmitterKind.DISTINCT)
    res = steady_state(params, params.space(2))
    # unique global ground state
    assert res.rho[0, 0].real == pytest.approx(1.0, abs=1e-9)
    assert res.n_ph == pytest.approx(0.0, abs=1e-10)


def test_null_space_dimension_counts():
    driven = ModelParams(g=2.0, eta=1.0, delta=0.5)
    assert null_space_dimension(driven, driven.space(5)) == 1
    undriven = ModelParams(g=0.0, eta=0.0, delta=1.0)
    assert null_space_dimension(undriven, undriven.space(1)) > 1


def test_propagate_identity_and_convergence():
    params = ModelParams(g=2.0, eta=1.0, delta=0.0)
    space = params.space(8)
    d = space.total_dim
    rho0 = np.zeros((d, d), dtype=complex)
    rho0[0, 0] = 1.0
    assert np.max(np.abs(propagate(rho0, params, space, 0.0) - rho0)) < 1e-14
    rho_t = propagate(rho0, params, space, 40.0)
    validate_density_matrix(rho_t, atol=1e-9)
    res = steady_state(params, space)
    assert np.max(np.abs(rho_t - res.rho)) < 1e-6
    with pytest.raises(ValueError):
        propagate(rho0, params, space, -1.0)


def test_propagate_grid_trace_preserved():
    params = ModelParams(g=1.0, eta=0.7, delta=0.3)
    space = params.space(6)
    d = space.total_dim
    rho0 = np.zeros((d, d), dtype=complex)
    rho0[0, 0] = 1.0
    times, rhos = propagate_grid(rho0, params, space, 10.0, 6)
    assert times.shape == (6,)
    for rho in rhos:
        assert abs(np.trace(rho).real - 1.0) < 1e-9
        validate_density_matrix(rho, atol=1e-8)


def test_weak_coupling_matches_dispersive_field():
    # far-detuned weak coupling: steady field close to the dispersive value
    from quditcavity import linear_response_reference

    params = ModelParams(g=0.9, eta=0.5, delta=-2.0)
    res = steady_state(params, params.space(12))
    ref = linear_response_reference(params)
    assert abs(res.a_expect - ref.alpha) / abs(ref.alpha) < 0.1
    assert abs(res.n_ph - ref.n_ph) / ref.n_ph < 0.1


def test_validate_density_matrix_rejects_bad_input():
    good = np.diag([0.5, 0.5]).astype(complex)
    validate_density_matrix(good)
    with pytest.raises(ValueError):
        validate_density_matrix(np.diag([0.9, 0.3]).astype(complex))
    bad_herm = np.array([[0.5, 0.3], [0.1, 0.5]], dtype=complex)
    with pytest.raises(ValueError):
        validate_density_matrix(bad_herm)
    neg = np.diag([1.2, -0.2]).astype(complex)
    with pytest.raises(ValueError):
        validate_density_matrix(neg)
