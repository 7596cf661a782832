"""Helstrom discrimination of pairs of Bell diagonal states and its LOCC implementability."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .states import BELL_VECTORS

SIGN_ATOL = 1e-12


@dataclass(frozen=True)
class DiscriminationResult:
    success_bound: float
    positive_indices: tuple
    negative_indices: tuple
    locc_optimal: bool


def _pair(rho_theta, phi_theta):
    rho = np.asarray(rho_theta, dtype=float)
    phi = np.asarray(phi_theta, dtype=float)
    if rho.shape != (4,) or phi.shape != (4,):
        raise ValueError("states are given by their four Bell-basis weights")
    return rho, phi


def helstrom_bound(rho_theta, phi_theta) -> float:
    rho, phi = _pair(rho_theta, phi_theta)
    return 0.5 * (1.0 + 0.5 * float(np.abs(rho - phi).sum()))


def _sign_counts(rho, phi):
    d = rho - phi
    return int(np.sum(d > SIGN_ATOL)), int(np.sum(d < -SIGN_ATOL))


def is_locc_optimal(rho_theta, phi_theta) -> bool:
    """True if a parity-check POVM {Psi_i + Psi_j, Psi_k + Psi_l} reaches the Helstrom bound."""
    pos, neg = _sign_counts(*_pair(rho_theta, phi_theta))
    return pos <= 2 and neg <= 2


def projector(indices) -> np.ndarray:
    """Dense projector onto the span of the given Bell states (0-based)."""
    v = BELL_VECTORS[:, list(indices)]
    return v @ v.conj().T


def success_probability(povm, rho_theta, phi_theta) -> float:
    """Equal-prior success of guessing ``rho`` on outcome 0 and ``phi`` on outcome 1."""
    rho, phi = _pair(rho_theta, phi_theta)
    rho_m = BELL_VECTORS @ np.diag(rho) @ BELL_VECTORS.conj().T
    phi_m = BELL_VECTORS @ np.diag(phi) @ BELL_VECTORS.conj().T
    m0, m1 = povm
    return 0.5 * float(np.real(np.trace(m0 @ rho_m) + np.trace(m1 @ phi_m)))


def optimal_povm(rho_theta, phi_theta) -> DiscriminationResult:
    """Projective Helstrom measurement; indices are 0-based into the Bell basis.

    Components with ``rho_i - phi_i <= 0`` (within tolerance) go to the second outcome.
    """
    rho, phi = _pair(rho_theta, phi_theta)
    d = rho - phi
    pos = tuple(int(i) for i in np.flatnonzero(d > SIGN_ATOL))
    neg = tuple(i for i in range(4) if i not in pos)
    return DiscriminationResult(
        success_bound=helstrom_bound(rho, phi),
        positive_indices=pos,
        negative_indices=neg,
        locc_optimal=is_locc_optimal(rho, phi),
    )
