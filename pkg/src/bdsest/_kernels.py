"""Hot loops of the grid estimators, with numba and pure-numpy implementations.

The numba path is used when numba imports and ``BDSEST_NUMBA`` is not set to
``0``. Both paths implement the same algorithms and agree to rounding.

Grid likelihoods always go through numpy: the cost is one ``log`` per
(point, row) pair and numpy's vectorized ``log`` is at least as fast as a
compiled scalar loop (see ``benchmarks/bench_kernels.py``). The compiled loop
is kept for that comparison.
"""
from __future__ import annotations

import math
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
PAIRS = np.array([(i, j) for i in range(4) for j in range(i + 1, 4)], dtype=np.int64)

_BACKEND = "numba" if numba is not None and os.environ.get("BDSEST_NUMBA", "1") != "0" else "numpy"


def backend() -> str:
    return _BACKEND


def set_backend(name: str) -> None:
    global _BACKEND
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and numba is None:
        raise RuntimeError("numba is not installed")
    _BACKEND = name


# ---------------------------------------------------------------- numpy path

def _loglik_grid_np(points, rows, counts):
    with np.errstate(divide="ignore"):
        return np.log(points @ rows.T) @ counts


def _loglik_np(theta, rows, counts):
    p = rows @ theta
    if np.any(p <= 0.0):
        return -np.inf
    return float(np.log(p) @ counts)


def _refine_np(theta, rows, counts, tol, max_sweeps):
    theta = theta.copy()
    best = _loglik_np(theta, rows, counts)
    for _ in range(max_sweeps):
        moved = 0.0
        for i, j in PAIRS:
            lo, hi = -theta[i], theta[j]
            if hi - lo <= tol:
                continue
            d = np.zeros(4)
            d[i], d[j] = 1.0, -1.0
            a, b = lo, hi
            c = b - GOLDEN * (b - a)
            e = a + GOLDEN * (b - a)
            fc = _loglik_np(theta + c * d, rows, counts)
            fe = _loglik_np(theta + e * d, rows, counts)
            while b - a > tol:
                if fc >= fe:
                    b, e, fe = e, c, fc
                    c = b - GOLDEN * (b - a)
                    fc = _loglik_np(theta + c * d, rows, counts)
                else:
                    a, c, fc = c, e, fe
                    e = a + GOLDEN * (b - a)
                    fe = _loglik_np(theta + e * d, rows, counts)
            s = 0.5 * (a + b)
            cand = theta + s * d
            cand[i] = max(cand[i], 0.0)
            cand[j] = max(cand[j], 0.0)
            val = _loglik_np(cand, rows, counts)
            if val > best:
                moved = max(moved, abs(s))
                theta, best = cand, val
        if moved < tol:
            break
    return theta / theta.sum()


# ---------------------------------------------------------------- numba path

def _loglik_grid_loops(points, rows, counts):
    g = points.shape[0]
    r = rows.shape[0]
    out = np.empty(g)
    for k in range(g):
        acc = 0.0
        for m in range(r):
            p = (points[k, 0] * rows[m, 0] + points[k, 1] * rows[m, 1]
                 + points[k, 2] * rows[m, 2] + points[k, 3] * rows[m, 3])
            if p <= 0.0:
                acc = -np.inf
                break
            acc += counts[m] * math.log(p)
        out[k] = acc
    return out


def _loglik_loops(theta, rows, counts):
    acc = 0.0
    for m in range(rows.shape[0]):
        p = (theta[0] * rows[m, 0] + theta[1] * rows[m, 1]
             + theta[2] * rows[m, 2] + theta[3] * rows[m, 3])
        if p <= 0.0:
            return -np.inf
        acc += counts[m] * math.log(p)
    return acc


def _line_loglik(theta, i, j, s, rows, counts):
    acc = 0.0
    for m in range(rows.shape[0]):
        p = (theta[0] * rows[m, 0] + theta[1] * rows[m, 1]
             + theta[2] * rows[m, 2] + theta[3] * rows[m, 3]
             + s * (rows[m, i] - rows[m, j]))
        if p <= 0.0:
            return -np.inf
        acc += counts[m] * math.log(p)
    return acc


def _refine_loops(theta, rows, counts, tol, max_sweeps):
    theta = theta.copy()
    best = _loglik_loops(theta, rows, counts)
    for _ in range(max_sweeps):
        moved = 0.0
        for q in range(PAIRS.shape[0]):
            i = PAIRS[q, 0]
            j = PAIRS[q, 1]
            lo = -theta[i]
            hi = theta[j]
            if hi - lo <= tol:
                continue
            a = lo
            b = hi
            c = b - GOLDEN * (b - a)
            e = a + GOLDEN * (b - a)
            fc = _line_loglik(theta, i, j, c, rows, counts)
            fe = _line_loglik(theta, i, j, e, rows, counts)
            while b - a > tol:
                if fc >= fe:
                    b = e
                    e = c
                    fe = fc
                    c = b - GOLDEN * (b - a)
                    fc = _line_loglik(theta, i, j, c, rows, counts)
                else:
                    a = c
                    c = e
                    fc = fe
                    e = a + GOLDEN * (b - a)
                    fe = _line_loglik(theta, i, j, e, rows, counts)
            s = 0.5 * (a + b)
            cand = theta.copy()
            cand[i] = max(cand[i] + s, 0.0)
            cand[j] = max(cand[j] - s, 0.0)
            val = _loglik_loops(cand, rows, counts)
            if val > best:
                moved = max(moved, abs(s))
                theta = cand
                best = val
        if moved < tol:
            break
    return theta / theta.sum()


if numba is not None:
    _loglik_grid_nb = numba.njit(cache=True)(_loglik_grid_loops)
    _loglik_loops = numba.njit(cache=True)(_loglik_loops)
    _line_loglik = numba.njit(cache=True)(_line_loglik)
    _refine_nb = numba.njit(cache=True)(_refine_loops)


# ---------------------------------------------------------------- dispatch

def _prep(rows, counts):
    return np.ascontiguousarray(rows, dtype=np.float64), np.ascontiguousarray(counts, dtype=np.float64)


def loglik_grid(points, rows, counts) -> np.ndarray:
    """Log-likelihood ``sum_m counts[m] log(rows[m] . theta)`` for every grid point.

    Rows must have positive counts; a grid point giving probability 0 to any
    row gets ``-inf``.
    """
    rows, counts = _prep(rows, counts)
    if rows.shape[0] == 0:
        return np.zeros(points.shape[0])
    return _loglik_grid_np(points, rows, counts)


def loglik_grid_compiled(points, rows, counts) -> np.ndarray:
    """Scalar-loop version of :func:`loglik_grid`, compiled when numba is available."""
    rows, counts = _prep(rows, counts)
    if rows.shape[0] == 0:
        return np.zeros(points.shape[0])
    fn = _loglik_grid_nb if numba is not None else _loglik_grid_loops
    return fn(np.ascontiguousarray(points, dtype=np.float64), rows, counts)


def refine_mle(theta0, rows, counts, tol: float = 1e-10, max_sweeps: int = 500) -> np.ndarray:
    """Maximize the log-likelihood over the simplex starting at ``theta0``.

    Golden-section line searches along the six mass-exchange directions
    ``e_i - e_j``, swept until no move exceeds ``tol``.
    """
    rows, counts = _prep(rows, counts)
    theta0 = np.ascontiguousarray(theta0, dtype=np.float64)
    if rows.shape[0] == 0:
        return theta0.copy()
    if _BACKEND == "numba":
        return _refine_nb(theta0, rows, counts, tol, max_sweeps)
    return _refine_np(theta0, rows, counts, tol, max_sweeps)
