import itertools

import numpy as np
import pytest
from hypothesis import given

from bdsest.distinguish import (
    helstrom_bound,
    is_locc_optimal,
    optimal_povm,
    projector,
    success_probability,
)
from bdsest.states import BellDiagonalState, density_matrix, is_separable

from .conftest import thetas

MIXED = np.full(4, 0.25)
COUNTER = np.array([0.4, 0.2, 0.2, 0.2])
E = np.eye(4)


def rank3_pair(rng):
    rho = rng.dirichlet(np.ones(4))
    k = rng.integers(4)
    phi = np.empty(4)
    phi[k] = rho[k]
    others = [i for i in range(4) if i != k]
    phi[others] = rng.dirichlet(np.ones(3)) * (1 - rho[k])
    return rho, phi


def test_helstrom_examples():
    assert helstrom_bound(MIXED, MIXED) == 0.5
    assert helstrom_bound(E[0], E[1]) == 1
    assert helstrom_bound(MIXED, COUNTER) == pytest.approx(0.575, abs=1e-15)


def test_helstrom_equals_trace_norm(rng):
    for _ in range(50):
        a, b = rng.dirichlet(np.ones(4), size=2)
        diff = density_matrix(BellDiagonalState(a)) - density_matrix(BellDiagonalState(b))
        trace_norm = np.abs(np.linalg.eigvalsh(diff)).sum()
        assert helstrom_bound(a, b) == pytest.approx(0.5 * (1 + 0.5 * trace_norm), abs=1e-12)


@given(thetas(), thetas())
def test_helstrom_symmetric_and_in_range(a, b):
    p = helstrom_bound(a, b)
    assert p == helstrom_bound(b, a)
    assert 0.5 <= p <= 1 + 1e-15


def test_partition_examples():
    r = optimal_povm(E[0], E[1])
    assert (r.positive_indices, r.negative_indices) == ((0,), (1, 2, 3))
    r = optimal_povm(MIXED, COUNTER)
    assert (r.positive_indices, r.negative_indices) == ((1, 2, 3), (0,))
    assert r.success_bound == pytest.approx(0.575)
    r = optimal_povm(MIXED, MIXED)
    assert r.positive_indices == () and r.negative_indices == (0, 1, 2, 3)
    assert r.success_bound == 0.5 and r.locc_optimal


def test_counterexample_not_locc_optimal():
    assert not is_locc_optimal(MIXED, COUNTER)
    assert is_locc_optimal(E[0], E[1])
    # both states are separable, yet not LOCC-optimally distinguishable
    assert is_separable(BellDiagonalState(MIXED).t) and is_separable(BellDiagonalState(COUNTER).t)


@given(thetas(), thetas())
def test_povm_achieves_bound(a, b):
    r = optimal_povm(a, b)
    assert sorted(r.positive_indices + r.negative_indices) == [0, 1, 2, 3]
    povm = (projector(r.positive_indices), projector(r.negative_indices))
    assert success_probability(povm, a, b) == pytest.approx(r.success_bound, abs=1e-12)


def test_povm_is_optimal_among_bell_projections(rng):
    for _ in range(100):
        a, b = rng.dirichlet(np.ones(4), size=2)
        best = max(
            success_probability((projector(s), projector([i for i in range(4) if i not in s])), a, b)
            for k in range(5)
            for s in itertools.combinations(range(4), k)
        )
        assert best == pytest.approx(helstrom_bound(a, b), abs=1e-12)


def test_rank3_differences_are_locc_optimal(rng):
    for _ in range(1000):
        rho, phi = rank3_pair(rng)
        assert is_locc_optimal(rho, phi)


def test_convex_line_closure(rng):
    checked = 0
    while checked < 1000:
        rho, sigma = rng.dirichlet(np.ones(4), size=2)
        if not is_locc_optimal(rho, sigma):
            continue
        p, q = rng.random(2)
        assert is_locc_optimal(p * rho + (1 - p) * sigma, q * rho + (1 - q) * sigma)
        checked += 1
    mid = 0.5 * (rho + sigma)
    assert optimal_povm(mid, mid).success_bound == 0.5


def test_parity_pairs_achieve_bound_when_optimal(rng):
    for _ in range(300):
        a, b = rank3_pair(rng) if rng.random() < 0.5 else rng.dirichlet(np.ones(4), size=2)
        r = optimal_povm(a, b)
        if not r.locc_optimal:
            continue
        d = np.asarray(a) - np.asarray(b)
        # pad the positive set with the least negative indices to get a 2 | 2 split
        order = np.argsort(-d, kind="stable")
        first, second = tuple(order[:2]), tuple(order[2:])
        povm = (projector(first), projector(second))
        assert success_probability(povm, a, b) == pytest.approx(r.success_bound, abs=1e-12)
