"""Truncated composite Hilbert space and sparse operator builders.

Conventions
-----------
The composite basis is photon-major: basis index = n_ph * emitter_dim + j,
where j indexes the emitter level.  Mode operators are then block matrices
coupling adjacent photon blocks, which keeps sparse matrix-vector products
cache friendly.

The emitter is either a collective spin-3/2 (dimension 4) or three
distinguishable qubits (dimension 8).  Emitter levels are ordered by
ascending inversion, so index 0 is the ground level.  ``sz`` is stored with
integer eigenvalues {-3, -1, 1, 3} (twice the spin projection); detuning
terms therefore use ``sz/2``, and the ladder label u used elsewhere in the
package is the literal spectrum of ``sz``.

For three distinguishable qubits the basis index is the bit pattern
q0*4 + q1*2 + q2 with q_i = 1 for an excited qubit; the totally symmetric
subspace of this register is isometric to the collective spin-3/2 space
(see ``symmetric_subspace_isometry``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.sparse as sp

__all__ = [
    "EmitterKind",
    "FockSpace",
    "EmitterSpace",
    "CompositeSpace",
    "StateVector",
    "annihilation",
    "creation",
    "number",
    "collective_lowering",
    "collective_raising",
    "sz",
    "single_qubit_lowering",
    "symmetric_subspace_isometry",
    "embed",
    "expectation",
    "basis_state",
    "vacuum_ground",
    "coherent_state",
]


class EmitterKind(Enum):
    """Emitter realization: one collective spin-3/2 or three distinct qubits."""

    COLLECTIVE = "collective"
    DISTINCT = "distinct"


@dataclass(frozen=True)
class FockSpace:
    """Photon mode truncated at ``cutoff`` (levels 0..cutoff inclusive)."""

    cutoff: int

    def __post_init__(self):
        if self.cutoff < 1:
            raise ValueError(f"Fock cutoff must be >= 1, got {self.cutoff}")

    @property
    def dim(self) -> int:
        return self.cutoff + 1


@dataclass(frozen=True)
class EmitterSpace:
    kind: EmitterKind

    @property
    def dim(self) -> int:
        return 4 if self.kind is EmitterKind.COLLECTIVE else 8


@dataclass(frozen=True)
class CompositeSpace:
    """Photon-major tensor product of a Fock space and an emitter space."""

    fock: FockSpace
    emitter: EmitterSpace

    @property
    def total_dim(self) -> int:
        return self.fock.dim * self.emitter.dim

    def index(self, n_ph: int, emitter_index: int) -> int:
        if not 0 <= n_ph <= self.fock.cutoff:
            raise ValueError(f"photon number {n_ph} outside 0..{self.fock.cutoff}")
        if not 0 <= emitter_index < self.emitter.dim:
            raise ValueError(f"emitter index {emitter_index} outside 0..{self.emitter.dim - 1}")
        return n_ph * self.emitter.dim + emitter_index


@dataclass(eq=False)
class StateVector:
    """Complex amplitudes over a :class:`CompositeSpace` basis."""

    amplitudes: np.ndarray
    space: CompositeSpace

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (self.space.total_dim,):
            raise ValueError(
                f"amplitude vector has shape {amps.shape}, expected ({self.space.total_dim},)"
            )
        self.amplitudes = amps

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        n = self.norm()
        if n == 0.0 or not math.isfinite(n):
            raise ValueError("cannot normalize a zero or non-finite state vector")
        return StateVector(self.amplitudes / n, self.space)

    def copy(self) -> "StateVector":
        return StateVector(self.amplitudes.copy(), self.space)


def annihilation(fock: FockSpace) -> sp.csr_matrix:
    """Photon annihilation operator on the truncated mode; <n-1|a|n> = sqrt(n)."""
    amps = np.sqrt(np.arange(1, fock.dim, dtype=float))
    return sp.diags(amps, offsets=1, format="csr", dtype=np.complex128)


def creation(fock: FockSpace) -> sp.csr_matrix:
    return annihilation(fock).conj().transpose().tocsr()


def number(fock: FockSpace) -> sp.csr_matrix:
    return sp.diags(np.arange(fock.dim, dtype=float), format="csr", dtype=np.complex128)


_SIGMA_MINUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=np.complex128)
_SIGMA_Z = np.array([[-1.0, 0.0], [0.0, 1.0]], dtype=np.complex128)


def _qubit_chain_op(single: np.ndarray, position: int) -> sp.csr_matrix:
    # qubit 0 is the slowest-varying bit of the 8-dim register index
    op = sp.identity(1, format="csr", dtype=np.complex128)
    for q in range(3):
        factor = sp.csr_matrix(single) if q == position else sp.identity(2, format="csr", dtype=np.complex128)
        op = sp.kron(op, factor, format="csr")
    return op


def collective_lowering(emitter: EmitterSpace) -> sp.csr_matrix:
    """Collective lowering operator S^- (matrix elements sqrt(3), 2, sqrt(3))."""
    if emitter.kind is EmitterKind.COLLECTIVE:
        amps = np.array([math.sqrt(3.0), 2.0, math.sqrt(3.0)])
        return sp.diags(amps, offsets=1, format="csr", dtype=np.complex128)
    total = _qubit_chain_op(_SIGMA_MINUS, 0)
    for q in (1, 2):
        total = total + _qubit_chain_op(_SIGMA_MINUS, q)
    return total.tocsr()


def collective_raising(emitter: EmitterSpace) -> sp.csr_matrix:
    return collective_lowering(emitter).conj().transpose().tocsr()


def sz(emitter: EmitterSpace) -> sp.csr_matrix:
    """Inversion operator with spectrum {-3, -1, 1, 3} (twice the spin projection)."""
    if emitter.kind is EmitterKind.COLLECTIVE:
        return sp.diags(np.array([-3.0, -1.0, 1.0, 3.0]), format="csr", dtype=np.complex128)
    total = _qubit_chain_op(_SIGMA_Z, 0)
    for q in (1, 2):
        total = total + _qubit_chain_op(_SIGMA_Z, q)
    return total.tocsr()


def single_qubit_lowering(emitter: EmitterSpace, position: int) -> sp.csr_matrix:
    """Lowering operator of one qubit in the distinguishable register."""
    if emitter.kind is not EmitterKind.DISTINCT:
        raise ValueError("single-qubit operators exist only for distinct emitters")
    if position not in (0, 1, 2):
        raise ValueError(f"qubit position must be 0, 1 or 2, got {position}")
    return _qubit_chain_op(_SIGMA_MINUS, position)


def symmetric_subspace_isometry() -> np.ndarray:
    """Isometry V (8 x 4) embedding the collective basis into the qubit register.

    Columns are the symmetric Dicke states ordered by ascending inversion, so
    V^dagger O_distinct V reproduces the corresponding collective operator.
    """
    v = np.zeros((8, 4), dtype=np.complex128)
    v[0b000, 0] = 1.0
    for idx in (0b001, 0b010, 0b100):
        v[idx, 1] = 1.0 / math.sqrt(3.0)
    for idx in (0b011, 0b101, 0b110):
        v[idx, 2] = 1.0 / math.sqrt(3.0)
    v[0b111, 3] = 1.0
    return v


def embed(op: sp.spmatrix, target: str, space: CompositeSpace) -> sp.csr_matrix:
    """Lift a single-subsystem operator to the composite space.

    ``target`` is ``"mode"`` or ``"emitter"``.  Raises ``ValueError`` when the
    operator dimension does not match the targeted subsystem.
    """
    if target == "mode":
        if op.shape != (space.fock.dim, space.fock.dim):
            raise ValueError(
                f"mode operator has shape {op.shape}, space expects {(space.fock.dim,) * 2}"
            )
        return sp.kron(op, sp.identity(space.emitter.dim, dtype=np.complex128), format="csr")
    if target == "emitter":
        if op.shape != (space.emitter.dim, space.emitter.dim):
            raise ValueError(
                f"emitter operator has shape {op.shape}, space expects {(space.emitter.dim,) * 2}"
            )
        return sp.kron(sp.identity(space.fock.dim, dtype=np.complex128), op, format="csr")
    raise ValueError(f"embed target must be 'mode' or 'emitter', got {target!r}")


def expectation(op: sp.spmatrix, psi: "StateVector | np.ndarray") -> complex:
    """<psi|op|psi> / <psi|psi>; raises on zero-norm or non-finite input."""
    vec = psi.amplitudes if isinstance(psi, StateVector) else np.asarray(psi, dtype=np.complex128)
    norm2 = np.vdot(vec, vec).real
    if norm2 == 0.0 or not math.isfinite(norm2):
        raise ValueError("expectation value of a zero or non-finite state is undefined")
    return complex(np.vdot(vec, op @ vec) / norm2)


def basis_state(space: CompositeSpace, n_ph: int, emitter_index: int = 0) -> StateVector:
    amps = np.zeros(space.total_dim, dtype=np.complex128)
    amps[space.index(n_ph, emitter_index)] = 1.0
    return StateVector(amps, space)


def vacuum_ground(space: CompositeSpace) -> StateVector:
    return basis_state(space, 0, 0)


def coherent_state(space: CompositeSpace, alpha: complex, emitter_index: int = 0) -> StateVector:
    """Truncated coherent state on the mode, emitter in a single level.

    The amplitude series is cut at the Fock cutoff without renormalization,
    so the norm falls slightly below one when the tail is not negligible.
    """
    amps = np.zeros(space.total_dim, dtype=np.complex128)
    c = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(space.fock.dim):
        amps[space.index(n, emitter_index)] = c
        c = c * alpha / math.sqrt(n + 1.0)
    return StateVector(amps, space)
