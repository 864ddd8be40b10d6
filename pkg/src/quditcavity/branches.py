"""Quasi-coherent branch solutions of the driven, damped dressed ladders.

Climbing ladder u, the drive sees an effective oscillator whose level
spacing (minus the drive detuning) is delta - u g / (2 kappa sqrt(n)) in
units of kappa.  A steady coherent amplitude alpha_u must then satisfy the
self-consistency condition

    alpha_u = (eta / kappa) / (1 - i (delta - u g / (2 kappa |alpha_u|))),

whose modulus solves a quadratic in x = |alpha_u|.  With the dimensionless
branch parameter

    zeta_u = (u g / (2 eta)) / sqrt(1 + delta^2),

the larger quadratic root has the explicit form

    |alpha_u| = (eta / kappa) cos(phi_u),
    cos(phi_u) = (zeta delta + sqrt(1 - zeta^2)) / sqrt(1 + delta^2),
    sin(phi_u) = (-zeta + delta sqrt(1 - zeta^2)) / sqrt(1 + delta^2),

and alpha_u = |alpha_u| exp(i phi_u).  The branch exists (is "physical")
when the root is real and non-negative:

    zeta delta >= 0:  |zeta| <= 1,
    zeta delta <  0:  |zeta| sqrt(1 + delta^2) <= 1,

with boundary equality counted as physical.  The smaller quadratic root
decreases with drive and is never returned.  At the branch resonance
delta = u g / (2 eta) the photon number reaches the empty-cavity peak
(eta/kappa)^2 exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hilbert import EmitterKind
from .model import ModelParams
from .spectrum import U_LABELS

__all__ = [
    "BranchSolution",
    "SolutionMap",
    "zeta",
    "is_physical",
    "branch_solution",
    "all_branches",
    "photon_number_quadratic",
    "onset_threshold",
    "solution_map",
]


def _check_u(u: int):
    if u not in U_LABELS:
        raise ValueError(f"ladder label must be one of {U_LABELS}, got {u}")


def zeta(u: int, g: float, eta: float, delta: float) -> float:
    """Branch parameter zeta_u = (u g / (2 eta)) / sqrt(1 + delta^2); eta > 0."""
    _check_u(u)
    if eta <= 0:
        raise ValueError(f"branch parameter requires a drive, eta > 0; got {eta}")
    return (u * g / (2.0 * eta)) / math.sqrt(1.0 + delta * delta)


def is_physical(u: int, g: float, eta: float, delta: float) -> bool:
    """Whether ladder u supports a quasi-coherent amplitude (boundary counts)."""
    z = zeta(u, g, eta, delta)
    if z * delta >= 0.0:
        return abs(z) <= 1.0
    return abs(z) * math.sqrt(1.0 + delta * delta) <= 1.0


@dataclass(frozen=True)
class BranchSolution:
    """Quasi-coherent solution on one ladder; amplitude fields None when absent.

    ``n_ph`` is |alpha|^2 from the closed form, ``n_quadratic`` the same
    quantity recomputed from the larger root of the underlying quadratic
    (kept as an independent route, not collapsed into one formula).
    """

    u: int
    zeta: float
    physical: bool
    alpha: complex | None
    n_ph: float | None
    phase: float | None
    n_quadratic: float | None


def photon_number_quadratic(u: int, params: ModelParams) -> float | None:
    """|alpha_u|^2 via the larger root of the amplitude quadratic, else None.

    The quadratic in x = |alpha| kappa / 1 reads
    (1 + delta^2) x^2 - (delta u g / kappa) x + (u g / (2 kappa))^2 - (eta/kappa)^2 = 0.
    None when the discriminant is negative or the larger root is negative.
    """
    _check_u(u)
    if params.eta <= 0:
        raise ValueError(f"branch quadratic requires a drive, eta > 0; got {params.eta}")
    delta = params.delta / params.kappa
    g = params.g / params.kappa
    eta = params.eta / params.kappa
    a2 = 1.0 + delta * delta
    b = -delta * u * g
    c = 0.25 * u * u * g * g - eta * eta
    disc = b * b - 4.0 * a2 * c
    if disc < 0.0:
        return None
    x = (-b + math.sqrt(disc)) / (2.0 * a2)
    if x < 0.0:
        return None
    return x * x


def branch_solution(u: int, params: ModelParams) -> BranchSolution:
    """Closed-form quasi-coherent solution on ladder u for the given drive."""
    delta = params.delta / params.kappa
    z = zeta(u, params.g / params.kappa, params.eta / params.kappa, delta)
    if not is_physical(u, params.g / params.kappa, params.eta / params.kappa, delta):
        return BranchSolution(u=u, zeta=z, physical=False, alpha=None, n_ph=None, phase=None, n_quadratic=None)
    s = math.sqrt(max(0.0, 1.0 - z * z))
    norm = math.sqrt(1.0 + delta * delta)
    cos_phi = (z * delta + s) / norm
    sin_phi = (-z + delta * s) / norm
    amp = (params.eta / params.kappa) * cos_phi
    alpha = complex(amp * cos_phi, amp * sin_phi)
    return BranchSolution(
        u=u,
        zeta=z,
        physical=True,
        alpha=alpha,
        n_ph=amp * amp,
        phase=math.atan2(sin_phi, cos_phi),
        n_quadratic=photon_number_quadratic(u, params),
    )


def all_branches(params: ModelParams) -> list[BranchSolution]:
    """Branch solutions for all four ladders, ascending u."""
    return [branch_solution(u, params) for u in U_LABELS]


def onset_threshold(u: int, g: float, delta: float) -> float:
    """Smallest drive eta (units of kappa) at which ladder u becomes physical.

    From the physicality conditions: |u| g / (2 sqrt(1 + delta^2)) when
    u delta >= 0 and |u| g / 2 otherwise.  The branch exists for all
    eta >= threshold (existence is monotone in drive).
    """
    _check_u(u)
    if g <= 0:
        return 0.0
    if u * delta >= 0.0:
        return abs(u) * g / (2.0 * math.sqrt(1.0 + delta * delta))
    return abs(u) * g / 2.0


@dataclass(frozen=True)
class SolutionMap:
    """Bitmask of physical ladders over a drive-parameter grid.

    ``mask[i, j]`` encodes which ladders are physical at eta_values[i],
    delta_values[j]; bit k set means ladder U_LABELS[k] exists.
    """

    eta_values: tuple[float, ...]
    delta_values: tuple[float, ...]
    mask: np.ndarray

    def physical_set(self, i: int, j: int) -> tuple[int, ...]:
        bits = int(self.mask[i, j])
        return tuple(u for k, u in enumerate(U_LABELS) if bits & (1 << k))


def solution_map(
    g: float,
    kappa: float,
    eta_range: tuple[float, float],
    delta_range: tuple[float, float],
    resolution: "int | tuple[int, int]",
) -> SolutionMap:
    """Scan the (eta, delta) plane and record which ladders are physical."""
    n_eta, n_delta = (resolution, resolution) if isinstance(resolution, int) else resolution
    if n_eta < 1 or n_delta < 1:
        raise ValueError(f"resolution must be >= 1 per axis, got {(n_eta, n_delta)}")
    if eta_range[0] <= 0 or eta_range[1] < eta_range[0]:
        raise ValueError(f"need 0 < eta_min <= eta_max, got {eta_range}")
    if delta_range[1] < delta_range[0]:
        raise ValueError(f"need delta_min <= delta_max, got {delta_range}")
    etas = np.linspace(eta_range[0], eta_range[1], n_eta)
    deltas = np.linspace(delta_range[0], delta_range[1], n_delta)
    mask = np.zeros((n_eta, n_delta), dtype=np.uint8)
    g_k = g / kappa
    for i, eta in enumerate(etas):
        for j, delta in enumerate(deltas):
            bits = 0
            for k, u in enumerate(U_LABELS):
                if is_physical(u, g_k, eta / kappa, delta / kappa):
                    bits |= 1 << k
            mask[i, j] = bits
    return SolutionMap(eta_values=tuple(etas), delta_values=tuple(deltas), mask=mask)
