"""Dressed-state ladders of the undriven qudit-cavity Hamiltonian.

With the drive off, excitation number N = n_hat + (sz + 3)/2 is conserved
and the Hamiltonian block-diagonalizes over manifolds labelled by N (called
``n`` here).  Within a manifold the coupling is a tridiagonal 4x4 block
(smaller near the bottom of the spectrum: dimensions 1, 2, 3 for n = 0, 1, 2).

For n >= 3 the squared coupling eigenvalues solve a biquadratic equation and
come out in closed form,

    lambda_u(n) = -Delta n +- g sqrt((5 +- 4 sqrt(1 + eps^2)) (n - 1)),
    eps = 3 / (4 (n - 1)),

which is exact, not asymptotic.  The four values are labelled by
u in {-3, -1, 1, 3} in ascending order, matching the sz spectrum; for large
n they approach the equally spaced values -Delta n + u g sqrt(n).

Eigenvalues are reported in the convention where the manifold carries the
diagonal term -Delta n.  The physical block constant is -Delta (n - 3/2)
(the emitter zero-point), a u-independent offset that drops out of all
spacings and transition frequencies; ``numerical_block_eigenvalues`` shifts
its output to the same -Delta n convention so the two routes agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "U_LABELS",
    "ManifoldSpectrum",
    "LadderSpacing",
    "closed_form_eigenvalues",
    "numerical_block_eigenvalues",
    "approximate_eigenvalue",
    "ladder_spacing",
    "spectrum_rows",
]

U_LABELS = (-3, -1, 1, 3)


@dataclass(frozen=True)
class ManifoldSpectrum:
    """Eigenvalues of one excitation manifold, keyed by ladder label u.

    ``couplings`` holds the eigenvalues with the -Delta*n diagonal removed,
    ascending, aligned with ``u_labels``.  ``epsilon`` is 3/(4(n-1)) for
    n >= 2 and None below.
    """

    n: int
    delta: float
    u_labels: tuple[int, ...]
    couplings: tuple[float, ...]
    epsilon: float | None

    def eigenvalue(self, u: int) -> float:
        try:
            k = self.u_labels.index(u)
        except ValueError:
            raise KeyError(f"manifold n={self.n} has no ladder label u={u}") from None
        return -self.delta * self.n + self.couplings[k]

    def eigenvalues(self) -> tuple[float, ...]:
        return tuple(-self.delta * self.n + c for c in self.couplings)


class LadderSpacing(NamedTuple):
    exact: float
    approximate: float


def _epsilon(n: int) -> float | None:
    return 3.0 / (4.0 * (n - 1.0)) if n >= 2 else None


def closed_form_eigenvalues(n: int, g: float, delta: float) -> ManifoldSpectrum:
    """Exact four-ladder spectrum of manifold n; requires n >= 3."""
    if n < 3:
        raise ValueError(f"closed form covers full manifolds only (n >= 3), got n={n}")
    eps = _epsilon(n)
    root = math.sqrt(1.0 + eps * eps)
    outer = g * math.sqrt((5.0 + 4.0 * root) * (n - 1.0))
    inner = g * math.sqrt((5.0 - 4.0 * root) * (n - 1.0))
    return ManifoldSpectrum(
        n=n,
        delta=delta,
        u_labels=U_LABELS,
        couplings=(-outer, -inner, inner, outer),
        epsilon=eps,
    )


def _manifold_block(n: int, g: float, delta: float) -> np.ndarray:
    """Explicit manifold block of H in the basis |n_ph(m)>|m>, ascending m.

    m runs over the spin projections (in units of 1/2: -3/2..3/2) compatible
    with n_ph = n - (m + 3/2) >= 0.  The coupling i g a^dag S^- connects
    adjacent m with matrix element i g c_m sqrt(n_ph + 1).
    """
    two_m_values = [two_m for two_m in (-3, -1, 1, 3) if n - (two_m + 3) // 2 >= 0]
    dim = len(two_m_values)
    block = np.zeros((dim, dim), dtype=np.complex128)
    for k, two_m in enumerate(two_m_values):
        block[k, k] = -delta * (n - 1.5)
        if k > 0:
            m = two_m / 2.0
            c = math.sqrt(3.75 - m * (m - 1.0))
            photon = math.sqrt(n - m - 0.5)
            block[k - 1, k] = 1j * g * c * photon
            block[k, k - 1] = -1j * g * c * photon
    return block


def numerical_block_eigenvalues(n: int, g: float, delta: float) -> ManifoldSpectrum:
    """Manifold spectrum from direct diagonalization of the explicit block.

    Valid for every n >= 0, including the reduced blocks below n = 3.
    Reported in the same -Delta*n convention as the closed form.  Ladder
    labels for the reduced blocks: n=0 -> (0,), n=1 -> (-3, 3),
    n=2 -> (-3, 0, 3); the 0 labels mark states outside the four-ladder
    pattern (the n=2 central pair is exactly degenerate at zero coupling).
    """
    if n < 0:
        raise ValueError(f"manifold label must be >= 0, got n={n}")
    block = _manifold_block(n, g, delta)
    vals = np.linalg.eigvalsh(block)
    couplings = tuple(float(v + delta * (n - 1.5)) for v in vals)
    labels = {1: (0,), 2: (-3, 3), 3: (-3, 0, 3), 4: U_LABELS}[len(couplings)]
    return ManifoldSpectrum(
        n=n,
        delta=delta,
        u_labels=labels,
        couplings=couplings,
        epsilon=_epsilon(n),
    )


def approximate_eigenvalue(n: int, u: int, g: float, delta: float) -> float:
    """Equally-spaced ladder approximation -Delta n + u g sqrt(n)."""
    if u not in U_LABELS:
        raise ValueError(f"ladder label must be one of {U_LABELS}, got {u}")
    return -delta * n + u * g * math.sqrt(n)


def ladder_spacing(u: int, n: int, g: float, delta: float) -> LadderSpacing:
    """Spacing lambda_u(n+1) - lambda_u(n): exact and -Delta + u g/(2 sqrt(n))."""
    if u not in U_LABELS:
        raise ValueError(f"ladder label must be one of {U_LABELS}, got {u}")
    if n < 3:
        raise ValueError(f"ladder spacing is defined for n >= 3, got n={n}")
    exact = closed_form_eigenvalues(n + 1, g, delta).eigenvalue(u) - closed_form_eigenvalues(
        n, g, delta
    ).eigenvalue(u)
    approx = -delta + u * g / (2.0 * math.sqrt(n))
    return LadderSpacing(exact=exact, approximate=approx)


def spectrum_rows(g: float, delta: float, n_max: int, n_min: int = 0) -> list[dict]:
    """Table rows (one per manifold and ladder) for CSV export.

    Columns: n, u, lambda_exact, lambda_approx, spacing_exact,
    spacing_approx.  Approximation and spacing entries are None where
    undefined (reduced manifolds and merged labels).
    """
    if n_max < n_min or n_min < 0:
        raise ValueError(f"need 0 <= n_min <= n_max, got {n_min}..{n_max}")
    rows = []
    for n in range(n_min, n_max + 1):
        spec = closed_form_eigenvalues(n, g, delta) if n >= 3 else numerical_block_eigenvalues(n, g, delta)
        for u in spec.u_labels:
            row = {
                "n": n,
                "u": u,
                "lambda_exact": spec.eigenvalue(u),
                "lambda_approx": approximate_eigenvalue(n, u, g, delta) if u != 0 and n >= 1 else None,
                "spacing_exact": None,
                "spacing_approx": None,
            }
            if n >= 3:
                spacing = ladder_spacing(u, n, g, delta)
                row["spacing_exact"] = spacing.exact
                row["spacing_approx"] = spacing.approximate
            rows.append(row)
    return rows
