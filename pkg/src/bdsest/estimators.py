"""Direct inversion, grid maximum likelihood and Bayesian mean estimation."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from . import _kernels
from .measurements import PARITY_STRATEGIES, OutcomeRecord, setting_rows
from .states import PHYSICAL_ATOL, THETA_TO_T, is_physical, t_to_theta

DEFAULT_RESOLUTION = 37

# fraction of a lattice cell inside the tetrahedron, by number of zero coordinates:
# interior, facet, edge (dihedral angle / 2pi), vertex (solid angle / 4pi)
_DIHEDRAL = math.acos(1.0 / 3.0)
CELL_FRACTION = np.array(
    [1.0, 0.5, _DIHEDRAL / (2 * math.pi), (3 * _DIHEDRAL - math.pi) / (4 * math.pi)]
)


@dataclass(frozen=True, eq=False)
class StateGrid:
    """Lattice ``theta = k/m`` on the simplex in lexicographic order of ``k``.

    ``volumes`` are the quadrature weights of the points: the fraction of a
    lattice cell that lies inside the simplex.
    """

    resolution: int
    points: np.ndarray = field(repr=False)
    volumes: np.ndarray = field(repr=False)

    def __len__(self):
        return self.points.shape[0]


@lru_cache(maxsize=8)
def build_grid(resolution: int = DEFAULT_RESOLUTION) -> StateGrid:
    m = int(resolution)
    if m < 1:
        raise ValueError("grid resolution must be >= 1")
    k = np.array(
        [(a, b, c, m - a - b - c)
         for a in range(m + 1) for b in range(m + 1 - a) for c in range(m + 1 - a - b)],
        dtype=np.int64,
    )
    points = k / m
    volumes = CELL_FRACTION[(k == 0).sum(axis=1)]
    points.flags.writeable = False
    volumes.flags.writeable = False
    return StateGrid(m, points, volumes)


@dataclass(frozen=True)
class PriorSpec:
    dirichlet_alpha: tuple = (1.0, 1.0, 1.0, 1.0)

    def __post_init__(self):
        alpha = tuple(float(a) for a in np.broadcast_to(np.asarray(self.dirichlet_alpha, float), (4,)))
        if any(not a > 0 for a in alpha):
            raise ValueError(f"Dirichlet concentrations must be positive, got {alpha}")
        object.__setattr__(self, "dirichlet_alpha", alpha)

    @classmethod
    def uniform(cls) -> "PriorSpec":
        return cls((1.0, 1.0, 1.0, 1.0))

    @classmethod
    def jeffreys(cls) -> "PriorSpec":
        return cls((0.5, 0.5, 0.5, 0.5))

    @property
    def is_uniform(self) -> bool:
        return self.dirichlet_alpha == (1.0, 1.0, 1.0, 1.0)


@dataclass(frozen=True, eq=False)
class Estimate:
    theta_hat: np.ndarray
    physical: bool
    posterior_mean: Optional[np.ndarray] = None
    posterior_cov: Optional[np.ndarray] = None

    @property
    def t_hat(self) -> np.ndarray:
        return THETA_TO_T @ self.theta_hat


def _estimate(theta) -> Estimate:
    theta = np.asarray(theta, dtype=float)
    return Estimate(theta, bool(np.all(theta >= -PHYSICAL_ATOL)))


def likelihood_design(record: OutcomeRecord) -> tuple[np.ndarray, np.ndarray]:
    """Reduce a record to rows ``w`` and counts ``n`` with loglik ``sum n log(w . theta)``.

    Outcomes never observed and outcomes whose probability does not depend on
    the state are dropped; they only shift the log-likelihood by a constant.
    """
    rows, counts = [], []
    for setting, c in record.entries:
        w = setting_rows(setting)
        keep = (c > 0) & (np.ptp(w, axis=1) > 1e-14)
        if np.any(keep):
            rows.append(w[keep])
            counts.append(c[keep])
    if not rows:
        return np.zeros((0, 4)), np.zeros(0)
    return np.concatenate(rows), np.concatenate(counts).astype(float)


# ---------------------------------------------------------------- direct inversion

def _parity_t_hat(record: OutcomeRecord) -> np.ndarray:
    pc = record.parity_counts()
    y = pc.sum(axis=1)
    t_hat = np.zeros(3)
    seen = y > 0
    t_hat[seen] = 2.0 * pc[seen, 0] / y[seen] - 1.0
    return t_hat


def _least_squares_t_hat(record: OutcomeRecord) -> np.ndarray:
    # probs = rows @ theta = rows @ (t_to_theta_lin @ t + 1/4), fit t to frequencies
    lin = THETA_TO_T.T / 4.0
    a_blocks, y_blocks = [], []
    for setting, counts in record.entries:
        n = counts.sum()
        if n == 0:
            continue
        w = setting_rows(setting)
        scale = math.sqrt(n)
        a_blocks.append(scale * (w @ lin))
        y_blocks.append(scale * (counts / n - w.sum(axis=1) / 4.0))
    a = np.concatenate(a_blocks)
    y = np.concatenate(y_blocks)
    # minimum-norm solution; the cutoff is absolute so that bases carrying no
    # information about t (rows that vanish up to rounding) are ignored
    u, sv, vt = np.linalg.svd(a, full_matrices=False)
    keep = sv > 1e-10 * math.sqrt(record.total_shots)
    return vt[keep].T @ ((u[:, keep].T @ y) / sv[keep])


def direct_inversion(record: OutcomeRecord) -> Estimate:
    """Invert Born's rule on the observed frequencies; the result may be unphysical."""
    s = record.strategy
    if s in PARITY_STRATEGIES:
        if s == "parity_ordered" and record.total_shots == 0:
            raise ValueError("direct inversion needs at least one shot")
        return _estimate(t_to_theta(_parity_t_hat(record)))
    if record.total_shots == 0:
        raise ValueError("direct inversion needs at least one shot")
    if s == "bell":
        (_, counts), = record.entries
        return _estimate(counts / record.total_shots)
    return _estimate(t_to_theta(_least_squares_t_hat(record)))


# ---------------------------------------------------------------- grid estimators

def grid_loglik(record: OutcomeRecord, grid: StateGrid) -> np.ndarray:
    rows, counts = likelihood_design(record)
    return _kernels.loglik_grid(grid.points, rows, counts)


def mle(record: OutcomeRecord, grid: StateGrid, refine: bool = True,
        loglik: Optional[np.ndarray] = None) -> Estimate:
    """Grid argmax of the likelihood, then local refinement inside the simplex.

    Ties go to the lowest grid index. ``loglik`` may be passed to reuse a grid
    evaluation.
    """
    if len(grid) == 0:
        raise ValueError("empty grid")
    if record.total_shots == 0:
        return _estimate(np.full(4, 0.25))
    if loglik is None:
        loglik = grid_loglik(record, grid)
    theta = grid.points[int(np.argmax(loglik))].copy()
    if refine:
        rows, counts = likelihood_design(record)
        theta = _kernels.refine_mle(theta, rows, counts)
    return _estimate(theta)


def log_prior_weights(grid: StateGrid, prior: PriorSpec) -> np.ndarray:
    """Log quadrature weight times Dirichlet density (unnormalized) at each grid point."""
    logw = np.log(grid.volumes)
    if prior.is_uniform:
        return logw
    alpha = np.asarray(prior.dirichlet_alpha)
    # keep boundary points finite when alpha < 1: evaluate at half a lattice step
    floor = 0.5 / grid.resolution
    return logw + np.log(np.maximum(grid.points, floor)) @ (alpha - 1.0)


def posterior_weights(record: OutcomeRecord, grid: StateGrid, prior: PriorSpec,
                      loglik: Optional[np.ndarray] = None) -> np.ndarray:
    if len(grid) == 0:
        raise ValueError("empty grid")
    if loglik is None:
        loglik = grid_loglik(record, grid)
    logpost = loglik + log_prior_weights(grid, prior)
    top = np.max(logpost)
    if not np.isfinite(top):
        raise ValueError("posterior has no mass on the grid")
    w = np.exp(logpost - top)
    return w / w.sum()


def bme(record: OutcomeRecord, grid: StateGrid, prior: Optional[PriorSpec] = None,
        loglik: Optional[np.ndarray] = None) -> Estimate:
    """Posterior mean over the grid with a Dirichlet prior."""
    prior = prior or PriorSpec.uniform()
    w = posterior_weights(record, grid, prior, loglik)
    mean = w @ grid.points
    dev = grid.points - mean
    cov = (dev * w[:, None]).T @ dev
    return Estimate(mean, is_physical(THETA_TO_T @ mean), posterior_mean=mean, posterior_cov=cov)


def posterior_covariance(record: OutcomeRecord, grid: StateGrid,
                         prior: Optional[PriorSpec] = None) -> np.ndarray:
    return bme(record, grid, prior).posterior_cov
