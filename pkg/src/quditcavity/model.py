"""Driven damped qudit-cavity model: parameters, Hamiltonian, jump channels.

All rates and frequencies are in units of the field half-linewidth kappa
(the cavity intensity decays at 2*kappa).  In the frame rotating at the
drive frequency the Hamiltonian is

    H = -Delta (n_hat + sz/2) + i g (a^dag S^- - S^+ a) + i eta (a^dag - a),

with the mode and emitter resonant with each other and detuned by Delta
from the drive.  Cavity loss enters as the jump operator sqrt(2 kappa) a;
individual emitter decay (rate gamma per qubit, distinct emitters only)
adds sqrt(2 gamma) sigma_i^- channels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .hilbert import (
    CompositeSpace,
    EmitterKind,
    EmitterSpace,
    FockSpace,
    annihilation,
    collective_lowering,
    embed,
    number,
    single_qubit_lowering,
    sz,
)

__all__ = [
    "ModelParams",
    "JumpChannel",
    "hamiltonian",
    "jump_channels",
    "effective_hamiltonian",
    "suggested_fock_cutoff",
]


@dataclass(frozen=True)
class ModelParams:
    """Model rates in units of kappa, plus the emitter realization.

    ``gamma`` is the decay rate of each individual qubit and is only
    meaningful for distinct emitters; requesting gamma > 0 with a collective
    emitter is rejected because collective states cannot support local decay.
    """

    g: float
    eta: float
    delta: float
    kappa: float = 1.0
    gamma: float = 0.0
    emitters: EmitterKind = EmitterKind.COLLECTIVE

    def __post_init__(self):
        if self.g < 0:
            raise ValueError(f"coupling g must be >= 0, got {self.g}")
        if self.eta < 0:
            raise ValueError(f"drive amplitude eta must be >= 0, got {self.eta}")
        if self.kappa <= 0:
            raise ValueError(f"kappa must be > 0, got {self.kappa}")
        if self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        if self.gamma > 0 and self.emitters is not EmitterKind.DISTINCT:
            raise ValueError("gamma > 0 requires distinct emitters")

    def emitter_space(self) -> EmitterSpace:
        return EmitterSpace(self.emitters)

    def space(self, cutoff: int) -> CompositeSpace:
        return CompositeSpace(FockSpace(cutoff), self.emitter_space())


@dataclass(frozen=True)
class JumpChannel:
    """One Lindblad channel; ``operator`` already carries sqrt(rate).

    The dissipator contribution is L rho L^dag - (L^dag L rho + rho L^dag L)/2
    with L = operator, so ``rate`` (2*kappa for the cavity, 2*gamma per qubit)
    is recorded only for reporting.
    """

    operator: sp.csr_matrix = field(repr=False)
    rate: float
    label: str


def _check_space(params: ModelParams, space: CompositeSpace):
    if space.emitter.kind is not params.emitters:
        raise ValueError(
            f"space built for {space.emitter.kind.value} emitters, params request {params.emitters.value}"
        )


def hamiltonian(params: ModelParams, space: CompositeSpace) -> sp.csr_matrix:
    """Sparse Hamiltonian on the composite space (complex csr)."""
    _check_space(params, space)
    a = embed(annihilation(space.fock), "mode", space)
    ad = a.conj().transpose().tocsr()
    n_op = embed(number(space.fock), "mode", space)
    sz_half = 0.5 * embed(sz(space.emitter), "emitter", space)
    s_minus = embed(collective_lowering(space.emitter), "emitter", space)

    coupling = ad @ s_minus
    h = (
        -params.delta * (n_op + sz_half)
        + 1j * params.g * (coupling - coupling.conj().transpose().tocsr())
        + 1j * params.eta * (ad - a)
    )
    return h.tocsr()


def jump_channels(params: ModelParams, space: CompositeSpace) -> list[JumpChannel]:
    """Cavity loss channel, plus one channel per qubit when gamma > 0."""
    _check_space(params, space)
    a = embed(annihilation(space.fock), "mode", space)
    channels = [
        JumpChannel(
            operator=(math.sqrt(2.0 * params.kappa) * a).tocsr(),
            rate=2.0 * params.kappa,
            label="cavity",
        )
    ]
    if params.gamma > 0:
        for q in range(3):
            op = embed(single_qubit_lowering(space.emitter, q), "emitter", space)
            channels.append(
                JumpChannel(
                    operator=(math.sqrt(2.0 * params.gamma) * op).tocsr(),
                    rate=2.0 * params.gamma,
                    label=f"qubit{q}",
                )
            )
    return channels


def effective_hamiltonian(params: ModelParams, space: CompositeSpace) -> sp.csr_matrix:
    """Non-Hermitian H_eff = H - (i/2) sum_L L^dag L driving no-jump evolution."""
    h = hamiltonian(params, space)
    for ch in jump_channels(params, space):
        ldl = ch.operator.conj().transpose().tocsr() @ ch.operator
        h = h - 0.5j * ldl
    return h.tocsr()


def suggested_fock_cutoff(params: ModelParams) -> int:
    """Conservative truncation guidance from drive strength and branch maxima.

    Returns ceil of max(4*(eta/kappa)^2, 1.5*n_max + 10*sqrt(n_max)) where
    n_max is the largest predicted quasi-coherent photon number among
    physical branches (0 when none exist).  Deliberately generous; heavy
    runs may justify smaller cutoffs from the actual occupied scale.
    """
    from .branches import all_branches

    n_max = 0.0
    for sol in all_branches(params):
        if sol.physical and sol.n_ph is not None:
            n_max = max(n_max, sol.n_ph)
    drive_scale = 4.0 * (params.eta / params.kappa) ** 2
    branch_scale = 1.5 * n_max + 10.0 * math.sqrt(n_max) if n_max > 0 else 0.0
    return max(1, math.ceil(max(drive_scale, branch_scale)))
