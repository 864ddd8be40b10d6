import math

import numpy as np
import pytest
import scipy.sparse as sp

from quditcavity import (
    CompositeSpace,
    EmitterKind,
    EmitterSpace,
    FockSpace,
    StateVector,
    annihilation,
    basis_state,
    coherent_state,
    collective_lowering,
    collective_raising,
    creation,
    embed,
    expectation,
    number,
    single_qubit_lowering,
    symmetric_subspace_isometry,
    sz,
    vacuum_ground,
)

COLLECTIVE = EmitterSpace(EmitterKind.COLLECTIVE)
DISTINCT = EmitterSpace(EmitterKind.DISTINCT)


def test_fock_dimensions():
    assert FockSpace(1).dim == 2
    assert FockSpace(30).dim == 31
    with pytest.raises(ValueError):
        FockSpace(0)


def test_space_index_photon_major():
    space = CompositeSpace(FockSpace(3), COLLECTIVE)
    assert space.total_dim == 16
    assert space.index(0, 0) == 0
    assert space.index(2, 1) == 9
    with pytest.raises(ValueError):
        space.index(4, 0)
    with pytest.raises(ValueError):
        space.index(0, 4)


def test_annihilation_minimal_cutoff():
    a = annihilation(FockSpace(1)).toarray()
    expected = np.zeros((2, 2)); expected[0, 1] = 1.0
    assert np.array_equal(a, expected)


def test_annihilation_matrix_elements():
    a = annihilation(FockSpace(4)).toarray()
    assert a[3, 4] == 2.0
    assert a[0, 1] == 1.0
    assert a[2, 3] == pytest.approx(math.sqrt(3.0), abs=0.0)


def test_mode_commutator_truncation_defect():
    # [a, a^dag] = 1 everywhere except the top level, where it is -cutoff
    cutoff = 9
    a = annihilation(FockSpace(cutoff))
    ad = creation(FockSpace(cutoff))
    comm = (a @ ad - ad @ a).toarray()
    expected = np.eye(cutoff + 1)
    expected[cutoff, cutoff] = -cutoff
    assert np.max(np.abs(comm - expected)) < 1e-13


def test_number_operator_counts():
    n = number(FockSpace(6))
    for k in range(7):
        e = np.zeros(7); e[k] = 1.0
        assert (n @ e)[k] == k


def test_collective_lowering_elements():
    s = collective_lowering(COLLECTIVE).toarray()
    assert s[0, 1] == pytest.approx(math.sqrt(3.0), abs=0.0)
    assert s[1, 2] == 2.0
    assert s[2, 3] == pytest.approx(math.sqrt(3.0), abs=0.0)
    assert np.count_nonzero(s) == 3


def test_sz_spectra():
    vals = np.sort(np.linalg.eigvalsh(sz(COLLECTIVE).toarray()))
    assert np.array_equal(vals, [-3.0, -1.0, 1.0, 3.0])
    vals8 = np.sort(np.linalg.eigvalsh(sz(DISTINCT).toarray()))
    assert np.array_equal(vals8, [-3.0, -1.0, -1.0, -1.0, 1.0, 1.0, 1.0, 3.0])
    assert np.trace(sz(COLLECTIVE).toarray()) == 0.0


def test_spin_commutation_relations():
    # [sz/2, S+-] = +-S+- holds exactly for both realizations
    for emitter in (COLLECTIVE, DISTINCT):
        half_sz = 0.5 * sz(emitter).toarray()
        sm = collective_lowering(emitter).toarray()
        sp_ = collective_raising(emitter).toarray()
        assert np.max(np.abs(half_sz @ sm - sm @ half_sz + sm)) < 1e-14
        assert np.max(np.abs(half_sz @ sp_ - sp_ @ half_sz - sp_)) < 1e-14


def test_distinct_reduces_to_collective_on_symmetric_subspace():
    v = symmetric_subspace_isometry()
    assert np.max(np.abs(v.conj().T @ v - np.eye(4))) < 1e-15
    for op_builder in (collective_lowering, sz):
        reduced = v.conj().T @ op_builder(DISTINCT).toarray() @ v
        direct = op_builder(COLLECTIVE).toarray()
        assert np.max(np.abs(reduced - direct)) < 1e-14


def test_single_qubit_lowering_sums_to_collective():
    total = sum(single_qubit_lowering(DISTINCT, q).toarray() for q in range(3))
    assert np.max(np.abs(total - collective_lowering(DISTINCT).toarray())) == 0.0
    with pytest.raises(ValueError):
        single_qubit_lowering(COLLECTIVE, 0)
    with pytest.raises(ValueError):
        single_qubit_lowering(DISTINCT, 3)


def test_embed_dimension_check_and_order():
    space = CompositeSpace(FockSpace(2), COLLECTIVE)
    a = annihilation(space.fock)
    sm = collective_lowering(space.emitter)
    with pytest.raises(ValueError):
        embed(a, "emitter", space)
    with pytest.raises(ValueError):
        embed(sm, "mode", space)
    with pytest.raises(ValueError):
        embed(a, "both", space)
    # photon-major ordering: embedded product equals the explicit kron
    prod = (embed(a, "mode", space) @ embed(sm, "emitter", space)).toarray()
    direct = sp.kron(a, sm).toarray()
    assert np.max(np.abs(prod - direct)) == 0.0


def test_expectation_on_fock_states():
    space = CompositeSpace(FockSpace(5), COLLECTIVE)
    n_emb = embed(number(space.fock), "mode", space)
    psi = basis_state(space, 2, 3)
    assert expectation(n_emb, psi) == 2.0
    # unnormalized input is normalized internally
    scaled = StateVector(2.5j * psi.amplitudes, space)
    assert expectation(n_emb, scaled) == pytest.approx(2.0, abs=1e-15)


def test_expectation_zero_state_raises():
    space = CompositeSpace(FockSpace(2), COLLECTIVE)
    zero = StateVector(np.zeros(space.total_dim), space)
    with pytest.raises(ValueError):
        expectation(embed(number(space.fock), "mode", space), zero)


def test_coherent_state_field_expectation():
    space = CompositeSpace(FockSpace(40), COLLECTIVE)
    psi = coherent_state(space, 1.5)
    a_emb = embed(annihilation(space.fock), "mode", space)
    assert expectation(a_emb, psi) == pytest.approx(1.5, abs=1e-9)
    assert expectation(a_emb, coherent_state(space, 0.0)) == 0.0
    # complex amplitude round-trips too
    alpha = 0.8 - 0.6j
    val = expectation(a_emb, coherent_state(space, alpha))
    assert abs(val - alpha) < 1e-9


def test_state_vector_normalization():
    space = CompositeSpace(FockSpace(2), COLLECTIVE)
    psi = StateVector(np.full(space.total_dim, 0.3 + 0.1j), space)
    unit = psi.normalized()
    assert unit.norm() == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        StateVector(np.zeros(space.total_dim), space).normalized()
    with pytest.raises(ValueError):
        StateVector(np.zeros(3), space)


def test_vacuum_ground_is_first_basis_vector():
    space = CompositeSpace(FockSpace(4), DISTINCT)
    psi = vacuum_ground(space)
    assert psi.amplitudes[0] == 1.0
    assert np.count_nonzero(psi.amplitudes) == 1
