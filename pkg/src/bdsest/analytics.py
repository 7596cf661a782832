"""Closed-form risks, bounds and loss functions for Bell diagonal state estimation.

All risks use the squared Hilbert-Schmidt distance, which for Bell diagonal
states equals ``sum_i (theta_hat_i - theta_i)^2``. Average risks are taken over
the uniform (Dirichlet(1,1,1,1)) prior, under which ``E[sum theta_i^2] = 2/5``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import binom

from .states import THETA_TO_T

AVG_PURITY = 0.4


@dataclass(frozen=True)
class RiskFormulaResult:
    value: float
    formula_id: str


def _purity(theta) -> float:
    theta = np.asarray(theta, dtype=float)
    return float(theta @ theta)


def _check_divisible(n: int):
    if n % 3:
        raise ValueError(f"ordered parity checks need N divisible by 3, got {n}")


def hs_loss(theta_hat, theta) -> float:
    d = np.asarray(theta_hat, dtype=float) - np.asarray(theta, dtype=float)
    return float(d @ d)


def infidelity_loss(theta_hat, theta) -> float:
    """``1 - F`` for commuting states, ``F = (sum_i sqrt(theta_hat_i theta_i))^2``."""
    a = np.asarray(theta_hat, dtype=float)
    b = np.asarray(theta, dtype=float)
    if np.any(a < 0) or np.any(b < 0):
        raise ValueError("infidelity needs nonnegative weights; project unphysical estimates first")
    f = float(np.sqrt(a * b).sum()) ** 2
    return min(max(1.0 - f, 0.0), 1.0)


def project_to_simplex(v) -> np.ndarray:
    """Euclidean projection onto the probability simplex (sort-based)."""
    v = np.asarray(v, dtype=float)
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, v.size + 1)
    rho = idx[u - css / idx > 0][-1]
    return np.maximum(v - css[rho - 1] / rho, 0.0)


def fidelity_bounds(hs_distance: float) -> tuple[float, float]:
    """Lower and upper fidelity bounds implied by a squared HS distance ``L``."""
    if hs_distance < 0:
        raise ValueError("HS distance must be nonnegative")
    lower = max(0.0, 1.0 - math.sqrt(hs_distance)) ** 2
    upper = 1.0 - hs_distance / 2.0
    return lower, upper


def qfi_matrix(theta) -> np.ndarray:
    """Quantum Fisher information of ``rho(t)`` with respect to ``t``.

    Only the support (nonzero eigenvalues) contributes.
    """
    theta = np.asarray(theta, dtype=float)
    support = theta > 0
    d = THETA_TO_T[:, support] / 4.0  # d theta_i / d t_a
    return (d / theta[support]) @ d.T


def qcrb_bound(theta, n: int) -> float:
    """Lower bound on the HS risk of any unbiased estimator from ``n`` copies."""
    if n < 1:
        raise ValueError("N must be >= 1")
    return (1.0 - _purity(theta)) / n


def risk_bsm_di(theta, n: int) -> float:
    if n < 1:
        raise ValueError("N must be >= 1")
    return (1.0 - _purity(theta)) / n


def avg_risk_bsm_di(n: int) -> float:
    if n < 1:
        raise ValueError("N must be >= 1")
    return 3.0 / (5.0 * n)


def risk_bsm_bme(theta, n: int) -> float:
    if n < 0:
        raise ValueError("N must be >= 0")
    q = _purity(theta)
    return (n * (1.0 - q) + 4.0 * (4.0 * q - 1.0)) / (n + 4.0) ** 2


def avg_risk_bsm_bme(n: int) -> float:
    if n < 0:
        raise ValueError("N must be >= 0")
    return 3.0 / (5.0 * (n + 4.0))


def g_hyp(n: int) -> float:
    """Terminating 3F2(1, 1, 1-N; 2, 2; -1/2).

    The k-th term equals ``C(N-1, k) 2^-k / (k+1)^2``; all terms are positive.
    """
    if n < 1:
        raise ValueError("N must be >= 1")
    if n > 1000:
        # sum grows like (3/2)^N; go through the scaled form to avoid overflow
        log_g = math.log(_inverse_count_mean(n)) - n * math.log(2.0 / 3.0) + math.log(2.0 / n)
        return math.exp(log_g) if log_g < 709.0 else math.inf
    total = 0.0
    term = 1.0  # C(N-1, k) 2^-k
    for k in range(n):
        total += term / (k + 1) ** 2
        term *= (n - 1 - k) / (2.0 * (k + 1))
    return total


def _inverse_count_mean(n: int) -> float:
    """``E[1/Y; Y >= 1]`` for ``Y ~ Binomial(N, 1/3)``, i.e. ``(2/3)^N (N/2) g(N)``."""
    if n == 0:
        return 0.0
    if n <= 1000:
        return (2.0 / 3.0) ** n * (n / 2.0) * g_hyp(n)
    y = np.arange(1, n + 1)
    logp = binom.logpmf(y, n, 1.0 / 3.0)
    return float(np.exp(logp - np.log(y)).sum())


def risk_parity_random_di(theta, n: int) -> float:
    """Risk of direct inversion with ``n`` parity checks on uniformly random axes."""
    if n < 0:
        raise ValueError("N must be >= 0")
    q = _purity(theta)
    return (1.0 - q) * _inverse_count_mean(n) + (2.0 / 3.0) ** n * (q - 0.25)


def avg_risk_parity_random_di(n: int) -> float:
    """Uniform-prior average of :func:`risk_parity_random_di`.

    Equals ``(2/3)^N [3N/10 g(N) + 3/20]``.
    """
    if n < 0:
        raise ValueError("N must be >= 0")
    return (1.0 - AVG_PURITY) * _inverse_count_mean(n) + (2.0 / 3.0) ** n * (AVG_PURITY - 0.25)


def avg_risk_parity_random_di_variant(n: int) -> float:
    """``(2/3)^N [N/5 g(N) + 3/20]``, the form with coefficient N/5 in place of 3N/10.

    For comparison only. It is not the average of the pointwise risk: it gives
    7/30 at N=1, where the estimator's average risk is 3/10.
    """
    if n < 0:
        raise ValueError("N must be >= 0")
    if n == 0:
        return 3.0 / 20.0
    return (2.0 / 3.0) ** n * (n / 5.0 * g_hyp(n) + 3.0 / 20.0)


def risk_parity_ordered_di(theta, n: int) -> float:
    if n < 3:
        raise ValueError("N must be >= 3")
    _check_divisible(n)
    return 3.0 * (1.0 - _purity(theta)) / n


def avg_risk_parity_ordered_di(n: int) -> float:
    if n < 3:
        raise ValueError("N must be >= 3")
    _check_divisible(n)
    return 9.0 / (5.0 * n)


def bme_parity_pointwise(theta, n: int) -> float:
    """Risk of the cube-posterior mean estimator ``t_i = (2 x_i0 - N/3) / (2 + N/3)``."""
    if n < 0:
        raise ValueError("N must be >= 0")
    _check_divisible(n)
    k = n / 3.0
    q = _purity(theta)
    return (k - 1.0 + (4.0 - k) * q) / (k + 2.0) ** 2


def bme_parity_upper_bound(n: int) -> float:
    """Upper bound on the uniform-prior average BME risk for ordered parity checks."""
    if n < 0:
        raise ValueError("N must be >= 0")
    _check_divisible(n)
    return (n + 3.0) / (5.0 * (n / 3.0 + 2.0) ** 2)
