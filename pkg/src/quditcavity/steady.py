"""Liouvillian construction, steady states and density-matrix propagation.

This is the ensemble-level oracle against which trajectory unravelings are
checked, so it stays deliberately independent of the trajectory machinery:
the generator is assembled directly from the Hamiltonian and the jump
channels, and the steady state is obtained by linear algebra on the
vectorized generator rather than by any stochastic method.

Density matrices are vectorized row-major (C order): vec(rho)[i*d + j] =
rho[i, j], so vec(A rho B) = (A kron B^T) vec(rho).  The generator is kept
sparse; sizes are capped at total dimension 512 (vectorized dimension
262144) because this module targets small oracle problems, not production
sweeps.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .hilbert import CompositeSpace, annihilation, embed, number
from .model import ModelParams, hamiltonian, jump_channels

__all__ = [
    "MAX_TOTAL_DIM",
    "DegenerateSteadyStateError",
    "SteadyStateResult",
    "liouvillian",
    "steady_state",
    "propagate",
    "propagate_grid",
    "null_space_dimension",
    "validate_density_matrix",
]

MAX_TOTAL_DIM = 512


class DegenerateSteadyStateError(RuntimeError):
    """Steady state is not unique (or the solve could not certify uniqueness)."""


def _check_dim(space: CompositeSpace):
    if space.total_dim > MAX_TOTAL_DIM:
        raise ValueError(
            f"total dimension {space.total_dim} exceeds the oracle cap {MAX_TOTAL_DIM}; "
            "use trajectories for larger problems"
        )


def liouvillian(params: ModelParams, space: CompositeSpace) -> sp.csr_matrix:
    """Sparse vectorized generator L with d(vec rho)/dt = L vec(rho)."""
    _check_dim(space)
    h = hamiltonian(params, space)
    d = space.total_dim
    ident = sp.identity(d, dtype=np.complex128, format="csr")
    gen = -1j * (sp.kron(h, ident) - sp.kron(ident, h.T))
    for ch in jump_channels(params, space):
        lop = ch.operator
        ldl = lop.conj().transpose().tocsr() @ lop
        gen = gen + sp.kron(lop, lop.conj()) - 0.5 * (sp.kron(ldl, ident) + sp.kron(ident, ldl.T))
    return gen.tocsr()


@dataclass(eq=False)
class SteadyStateResult:
    rho: np.ndarray = field(repr=False)
    residual: float
    n_ph: float
    a_expect: complex


def steady_state(
    params: ModelParams, space: CompositeSpace, residual_tol: float = 1e-8
) -> SteadyStateResult:
    """Unique trace-one null vector of the generator.

    Solves the generator with its first row replaced by the trace functional
    (the dropped row is linearly dependent on the remaining diagonal rows).
    Raises :class:`DegenerateSteadyStateError` when the factorization hits a
    singular matrix or the residual check fails, both of which signal a
    non-unique null space rather than a numerical accident.
    """
    gen = liouvillian(params, space)
    d = space.total_dim
    trace_row = sp.csr_matrix(
        (np.ones(d), (np.zeros(d, dtype=int), np.arange(d) * (d + 1))),
        shape=(1, d * d),
        dtype=np.complex128,
    )
    system = sp.vstack([trace_row, gen[1:]], format="csc")
    rhs = np.zeros(d * d, dtype=np.complex128)
    rhs[0] = 1.0
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", spla.MatrixRankWarning)
            vec = spla.spsolve(system, rhs)
    except (RuntimeError, spla.MatrixRankWarning) as exc:
        raise DegenerateSteadyStateError(
            f"steady-state solve failed ({exc}); the null space is likely degenerate"
        ) from exc
    if not np.all(np.isfinite(vec)):
        raise DegenerateSteadyStateError("steady-state solve returned non-finite entries")
    rho = vec.reshape(d, d)
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real
    residual = float(np.max(np.abs(gen @ rho.reshape(-1))))
    scale = float(np.max(np.abs(gen.data))) if gen.nnz else 1.0
    if residual > residual_tol * max(scale, 1.0):
        raise DegenerateSteadyStateError(
            f"steady-state residual {residual:.3g} exceeds tolerance; null space may be degenerate"
        )
    n_op = embed(number(space.fock), "mode", space)
    a_op = embed(annihilation(space.fock), "mode", space)
    return SteadyStateResult(
        rho=rho,
        residual=residual,
        n_ph=float(np.trace(n_op @ rho).real),
        a_expect=complex(np.trace(a_op @ rho)),
    )


def propagate(
    rho0: np.ndarray, params: ModelParams, space: CompositeSpace, t: float
) -> np.ndarray:
    """exp(L t) applied to rho0, re-Hermitized; trace is preserved by L."""
    if t < 0:
        raise ValueError(f"propagation time must be >= 0, got {t}")
    gen = liouvillian(params, space)
    d = space.total_dim
    vec = spla.expm_multiply(gen * t, np.asarray(rho0, dtype=np.complex128).reshape(-1))
    rho = vec.reshape(d, d)
    return 0.5 * (rho + rho.conj().T)


def propagate_grid(
    rho0: np.ndarray, params: ModelParams, space: CompositeSpace, t_stop: float, num: int
) -> tuple[np.ndarray, np.ndarray]:
    """States on the uniform grid linspace(0, t_stop, num); returns (times, rhos)."""
    if t_stop <= 0 or num < 2:
        raise ValueError(f"need t_stop > 0 and num >= 2, got {t_stop}, {num}")
    gen = liouvillian(params, space)
    d = space.total_dim
    vec0 = np.asarray(rho0, dtype=np.complex128).reshape(-1)
    raw = spla.expm_multiply(gen, vec0, start=0.0, stop=t_stop, num=num, endpoint=True)
    rhos = raw.reshape(num, d, d)
    rhos = 0.5 * (rhos + np.conj(np.transpose(rhos, (0, 2, 1))))
    return np.linspace(0.0, t_stop, num), rhos


def null_space_dimension(
    params: ModelParams, space: CompositeSpace, tol: float = 1e-9
) -> int:
    """Number of zero eigenvalues of the generator (dense solve, small systems)."""
    if space.total_dim > 48:
        raise ValueError("dense null-space scan is limited to total dimension <= 48")
    gen = liouvillian(params, space).toarray()
    vals = np.linalg.eigvals(gen)
    return int(np.sum(np.abs(vals) < tol))


def validate_density_matrix(rho: np.ndarray, atol: float = 1e-8):
    """Assert Hermiticity, unit trace and positivity up to atol; raises on failure."""
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    if herm > atol:
        raise ValueError(f"density matrix not Hermitian: max asymmetry {herm:.3g}")
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > atol:
        raise ValueError(f"density matrix trace {tr} differs from 1")
    evals = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    if evals.min() < -atol:
        raise ValueError(f"density matrix has negative eigenvalue {evals.min():.3g}")
