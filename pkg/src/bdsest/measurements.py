"""Projective measurement strategies on Bell diagonal states and outcome sampling."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .states import BELL_VECTORS, PAULI, THETA_TO_T, BellDiagonalState, density_matrix

STRATEGIES = ("bell", "parity_ordered", "parity_random", "mub", "pauli", "haar", "haar_separable")
PARITY_STRATEGIES = ("parity_ordered", "parity_random")
RANDOM_BASIS_STRATEGIES = ("parity_random", "haar", "haar_separable")

# shots must split evenly over the fixed bases of these strategies
SHOT_DIVISOR = {"parity_ordered": 3, "mub": 5, "pauli": 9}

AXES = ("x", "y", "z")


@dataclass(frozen=True, eq=False)
class ProjectiveBasis:
    """Orthonormal basis of C^4; ``vectors[:, k]`` is the k-th outcome."""

    label: str
    vectors: np.ndarray
    # overlaps[k, j] = |<v_k|Psi_j>|^2, so outcome probabilities are overlaps @ theta
    overlaps: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=complex)
        if v.shape != (4, 4):
            raise ValueError(f"basis needs four vectors of length 4, got shape {v.shape}")
        if np.abs(v.conj().T @ v - np.eye(4)).max() > 1e-10:
            raise ValueError(f"basis {self.label!r} is not orthonormal")
        v.flags.writeable = False
        overlaps = np.abs(v.conj().T @ BELL_VECTORS) ** 2
        overlaps.flags.writeable = False
        object.__setattr__(self, "vectors", v)
        object.__setattr__(self, "overlaps", overlaps)


@dataclass(frozen=True)
class MeasurementPlan:
    strategy: str
    shots: int

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}; choose from {STRATEGIES}")
        if self.shots < 0:
            raise ValueError("shots must be nonnegative")
        div = SHOT_DIVISOR.get(self.strategy)
        if div and self.shots % div:
            raise ValueError(
                f"strategy {self.strategy!r} measures {div} bases equally often; "
                f"shots={self.shots} is not a multiple of {div}"
            )


@dataclass(frozen=True, eq=False)
class OutcomeRecord:
    """Measurement data.

    ``entries`` holds ``(setting, counts)`` pairs. A setting is a
    :class:`ProjectiveBasis` (4 counts) or a parity axis index 0..2 for x, y, z
    (counts of even and odd outcomes). Fixed-basis plans store one aggregated
    entry per setting, random-basis plans store one entry per shot.
    """

    strategy: str
    total_shots: int
    entries: tuple = ()

    def __post_init__(self):
        entries = tuple((s, np.asarray(c, dtype=np.int64)) for s, c in self.entries)
        total = 0
        for setting, counts in entries:
            size = 2 if isinstance(setting, (int, np.integer)) else 4
            if counts.shape != (size,):
                raise ValueError(f"counts for {setting!r} must have length {size}")
            if np.any(counts < 0):
                raise ValueError("counts must be nonnegative")
            total += int(counts.sum())
        if total != self.total_shots:
            raise ValueError(f"counts sum to {total}, expected total_shots={self.total_shots}")
        object.__setattr__(self, "entries", entries)

    def parity_counts(self) -> np.ndarray:
        """3x2 array of (even, odd) counts per axis x, y, z."""
        out = np.zeros((3, 2), dtype=np.int64)
        for setting, counts in self.entries:
            if not isinstance(setting, (int, np.integer)):
                raise ValueError("record contains non-parity settings")
            out[int(setting)] += counts
        return out


def _single_qubit_eigvecs(axis: int) -> np.ndarray:
    """Columns are the +1 and -1 eigenvectors of sigma_axis (axis 1..3)."""
    _, vecs = np.linalg.eigh(PAULI[axis])
    vecs = vecs[:, ::-1]
    # fix global phase: first nonzero component real positive
    for k in range(2):
        col = vecs[:, k]
        lead = col[np.argmax(np.abs(col) > 1e-12)]
        vecs[:, k] = col * (abs(lead) / lead)
    return vecs


@lru_cache(maxsize=None)
def bell_basis() -> ProjectiveBasis:
    return ProjectiveBasis("bell", BELL_VECTORS.copy())


@lru_cache(maxsize=None)
def pauli_product_basis(axis_a: int, axis_b: int) -> ProjectiveBasis:
    """Eigenbasis of ``sigma_a x sigma_b`` ordered (+,+), (+,-), (-,+), (-,-)."""
    ua = _single_qubit_eigvecs(axis_a)
    ub = _single_qubit_eigvecs(axis_b)
    cols = [np.kron(ua[:, i], ub[:, j]) for i in range(2) for j in range(2)]
    label = "sigma_" + AXES[axis_a - 1] + AXES[axis_b - 1]
    return ProjectiveBasis(label, np.stack(cols, axis=1))


@lru_cache(maxsize=None)
def pauli_bases() -> tuple[ProjectiveBasis, ...]:
    return tuple(pauli_product_basis(a, b) for a in (1, 2, 3) for b in (1, 2, 3))


def _common_eigenbasis(ops, label: str) -> ProjectiveBasis:
    # generic real combination of commuting Hermitian operators has a simple spectrum
    weights = (1.0, np.pi, np.e**2)
    _, vecs = np.linalg.eigh(sum(w * op for w, op in zip(weights, ops)))
    signs = [tuple(np.round(np.real(vecs[:, k].conj() @ op @ vecs[:, k])).astype(int) for op in ops)
             for k in range(4)]
    order = sorted(range(4), key=lambda k: tuple(-s for s in signs[k]))
    vecs = vecs[:, order]
    for k in range(4):
        col = vecs[:, k]
        lead = col[np.argmax(np.abs(col) > 1e-12)]
        vecs[:, k] = col * (abs(lead) / lead)
    return ProjectiveBasis(label, vecs)


@lru_cache(maxsize=None)
def mub_bases() -> tuple[ProjectiveBasis, ...]:
    """Five mutually unbiased bases: three product bases (z, x, y) and two entangled."""
    x, y, z = PAULI[1], PAULI[2], PAULI[3]
    return (
        pauli_product_basis(3, 3),
        pauli_product_basis(1, 1),
        pauli_product_basis(2, 2),
        _common_eigenbasis((np.kron(x, y), np.kron(y, z), np.kron(z, x)), "mub_xy_yz_zx"),
        _common_eigenbasis((np.kron(y, x), np.kron(z, y), np.kron(x, z)), "mub_yx_zy_xz"),
    )


def haar_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-random unitary from a Ginibre matrix via QR with phase correction."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def haar_basis(rng, separable: bool = False) -> ProjectiveBasis:
    rng = np.random.default_rng(rng)
    if separable:
        u = np.kron(haar_unitary(rng, 2), haar_unitary(rng, 2))
        return ProjectiveBasis("haar_separable", u)
    return ProjectiveBasis("haar", haar_unitary(rng, 4))


def parity_check_probs(state: BellDiagonalState, axis) -> tuple[float, float]:
    """(even, odd) probabilities of a parity check along ``axis`` (0..2 or 'x','y','z')."""
    i = AXES.index(axis) if isinstance(axis, str) else int(axis)
    ti = float(state.t[i])
    return (1.0 + ti) / 2.0, (1.0 - ti) / 2.0


def parity_rows(axis: int) -> np.ndarray:
    """Rows ``r`` with ``(p_even, p_odd) = r @ theta`` for a parity check."""
    m = THETA_TO_T[axis]
    return np.stack([(1.0 + m) / 2.0, (1.0 - m) / 2.0])


def basis_probs(state: BellDiagonalState, basis: ProjectiveBasis) -> np.ndarray:
    """Born-rule outcome probabilities ``<v_k| rho |v_k>``."""
    p = basis.overlaps @ state.theta
    return np.clip(p, 0.0, None)


def born_probs_dense(state: BellDiagonalState, basis: ProjectiveBasis) -> np.ndarray:
    """Same as :func:`basis_probs` but through the dense density matrix."""
    rho = density_matrix(state)
    v = basis.vectors
    return np.real(np.einsum("ik,ij,jk->k", v.conj(), rho, v))


def _draw(rng, probs) -> int:
    # inverse-CDF draw; cheaper than rng.choice for a single sample
    u = rng.random()
    c = np.cumsum(probs)
    return int(min(np.searchsorted(c, u * c[-1], side="right"), len(probs) - 1))


def sample_outcomes(state: BellDiagonalState, plan: MeasurementPlan, seed=None) -> OutcomeRecord:
    """Simulate ``plan.shots`` measurements of ``state``.

    ``seed`` may be an int, a SeedSequence or a Generator; identical seeds give
    identical records.
    """
    if not isinstance(state, BellDiagonalState):
        state = BellDiagonalState(state)
    rng = np.random.default_rng(seed)
    n = plan.shots
    s = plan.strategy
    entries = []
    if s == "bell":
        entries.append((bell_basis(), rng.multinomial(n, state.theta)))
    elif s == "parity_ordered":
        for axis in range(3):
            p_even, _ = parity_check_probs(state, axis)
            even = rng.binomial(n // 3, min(max(p_even, 0.0), 1.0))
            entries.append((axis, np.array([even, n // 3 - even])))
    elif s == "parity_random":
        axes = rng.integers(0, 3, size=n)
        u = rng.random(n)
        p_even = np.clip((1.0 + state.t) / 2.0, 0.0, 1.0)
        odd = (u >= p_even[axes]).astype(np.int64)
        for a, o in zip(axes, odd):
            counts = np.zeros(2, dtype=np.int64)
            counts[o] = 1
            entries.append((int(a), counts))
    elif s in ("mub", "pauli"):
        bases = mub_bases() if s == "mub" else pauli_bases()
        per = n // len(bases)
        for b in bases:
            entries.append((b, rng.multinomial(per, basis_probs(state, b))))
    elif s in ("haar", "haar_separable"):
        for _ in range(n):
            b = haar_basis(rng, separable=(s == "haar_separable"))
            counts = np.zeros(4, dtype=np.int64)
            counts[_draw(rng, basis_probs(state, b))] = 1
            entries.append((b, counts))
    return OutcomeRecord(s, n, tuple(entries))


def setting_rows(setting) -> np.ndarray:
    """Outcome-probability rows of a setting: ``probs = rows @ theta``."""
    if isinstance(setting, (int, np.integer)):
        return parity_rows(int(setting))
    return setting.overlaps
