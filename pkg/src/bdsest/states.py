"""Bell diagonal two-qubit states: parametrizations, geometry and Pauli channels.

A Bell diagonal state is stored by its mixing weights ``theta`` over the Bell
basis ``(Phi+, Phi-, Psi+, Psi-)``. The correlation vector ``t`` (diagonal of the
Pauli correlation matrix) is derived from it.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

PHYSICAL_ATOL = 1e-9
SUM_ATOL = 1e-12

_S = 2.0 ** -0.5

# columns are |Phi+>, |Phi->, |Psi+>, |Psi-> in the computational basis |00>,|01>,|10>,|11>
BELL_VECTORS = np.array(
    [
        [_S, _S, 0.0, 0.0],
        [0.0, 0.0, _S, _S],
        [0.0, 0.0, _S, -_S],
        [_S, -_S, 0.0, 0.0],
    ],
    dtype=complex,
)

# t = THETA_TO_T @ theta
THETA_TO_T = np.array(
    [
        [1.0, -1.0, 1.0, -1.0],
        [-1.0, 1.0, 1.0, -1.0],
        [1.0, 1.0, -1.0, -1.0],
    ]
)

PAULI = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def _as_theta(theta) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (4,):
        raise ValueError(f"theta must have shape (4,), got {theta.shape}")
    return theta


def theta_to_t(theta) -> np.ndarray:
    """Map mixing weights on the Bell basis to the correlation vector t."""
    theta = _as_theta(theta)
    if abs(theta.sum() - 1.0) > SUM_ATOL:
        raise ValueError(f"theta must sum to 1, got sum {theta.sum()!r}")
    return THETA_TO_T @ theta


def t_to_theta(t) -> np.ndarray:
    """Inverse of :func:`theta_to_t`. Unphysical ``t`` gives negative weights."""
    t = np.asarray(t, dtype=float)
    if t.shape != (3,):
        raise ValueError(f"t must have shape (3,), got {t.shape}")
    return 0.25 * (THETA_TO_T.T @ t) + 0.25


def is_physical(t) -> bool:
    return bool(np.all(t_to_theta(t) >= -PHYSICAL_ATOL))


def is_separable(t) -> bool:
    """Octahedron test ``|t1|+|t2|+|t3| <= 1``; the boundary counts as separable."""
    if not is_physical(t):
        raise ValueError("separability is only defined for physical states")
    return bool(np.abs(np.asarray(t, dtype=float)).sum() <= 1.0 + SUM_ATOL)


@dataclass(frozen=True)
class BellDiagonalState:
    theta: np.ndarray
    t: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        theta = _as_theta(self.theta).copy()
        if abs(theta.sum() - 1.0) > PHYSICAL_ATOL:
            raise ValueError(f"theta must sum to 1, got sum {theta.sum()!r}")
        if np.any(theta < -PHYSICAL_ATOL) or np.any(theta > 1 + PHYSICAL_ATOL):
            raise ValueError(f"theta outside the probability simplex: {theta}")
        theta = np.clip(theta, 0.0, 1.0)
        theta /= theta.sum()
        theta.flags.writeable = False
        t = THETA_TO_T @ theta
        t.flags.writeable = False
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "t", t)

    @classmethod
    def from_t(cls, t) -> "BellDiagonalState":
        return cls(t_to_theta(t))

    @property
    def purity(self) -> float:
        return float(self.theta @ self.theta)

    def __eq__(self, other):
        if not isinstance(other, BellDiagonalState):
            return NotImplemented
        return bool(np.array_equal(self.theta, other.theta))

    def __hash__(self):
        return hash(self.theta.tobytes())


def density_matrix(state: BellDiagonalState) -> np.ndarray:
    """Dense 4x4 matrix ``(I + sum_i t_i sigma_i x sigma_i) / 4``."""
    rho = np.eye(4, dtype=complex)
    for ti, sigma in zip(state.t, PAULI[1:]):
        rho += ti * np.kron(sigma, sigma)
    return rho / 4.0


def check_density_matrix(rho, atol: float = 1e-12) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {rho.shape}")
    if not np.allclose(rho, rho.conj().T, rtol=0.0, atol=atol):
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > atol:
        raise ValueError(f"density matrix trace is {np.trace(rho).real!r}, expected 1")
    return rho


def bell_components(rho) -> np.ndarray:
    """Matrix of ``rho`` expressed in the Bell basis."""
    return BELL_VECTORS.conj().T @ np.asarray(rho, dtype=complex) @ BELL_VECTORS


def twirl_matrix(rho) -> np.ndarray:
    """Average of ``rho`` conjugated by ``sigma_i x sigma_i`` for i = 0..3."""
    rho = check_density_matrix(rho)
    out = np.zeros((4, 4), dtype=complex)
    for sigma in PAULI:
        u = np.kron(sigma, sigma)
        out += u @ rho @ u
    return out / 4.0


def twirl(rho) -> BellDiagonalState:
    """Project a two-qubit state onto the Bell diagonal set."""
    diag = bell_components(twirl_matrix(rho)).diagonal().real
    return BellDiagonalState(diag)


def check_pauli_channel(p, atol: float = 1e-12) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape != (4, 4):
        raise ValueError(f"Pauli channel needs a 4x4 table of probabilities, got {p.shape}")
    if np.any(p < 0):
        raise ValueError("Pauli channel probabilities must be nonnegative")
    if abs(p.sum() - 1.0) > atol:
        raise ValueError(f"Pauli channel probabilities sum to {p.sum()!r}")
    return p


def apply_pauli_channel(rho, channel) -> np.ndarray:
    """Apply ``sum_ij p_ij (s_i x s_j) rho (s_i x s_j)`` to a dense state."""
    p = check_pauli_channel(channel)
    rho = check_density_matrix(rho)
    out = np.zeros((4, 4), dtype=complex)
    for i in range(4):
        for j in range(4):
            if p[i, j] == 0.0:
                continue
            u = np.kron(PAULI[i], PAULI[j])
            out += p[i, j] * (u @ rho @ u)
    return out


def pauli_channel_theta_map(channel) -> np.ndarray:
    """4x4 stochastic matrix ``T`` with ``theta_out = T @ theta_in`` for Bell diagonal input."""
    p = check_pauli_channel(channel)
    T = np.zeros((4, 4))
    for i in range(4):
        for j in range(4):
            if p[i, j] == 0.0:
                continue
            u = np.kron(PAULI[i], PAULI[j])
            # a local Pauli permutes the Bell states up to phase
            T += p[i, j] * np.abs(BELL_VECTORS.conj().T @ u @ BELL_VECTORS) ** 2
    return T
