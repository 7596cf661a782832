import numpy as np
import pytest
from hypothesis import given, settings

from bdsest.states import (
    BELL_VECTORS,
    PAULI,
    BellDiagonalState,
    apply_pauli_channel,
    bell_components,
    density_matrix,
    is_physical,
    is_separable,
    pauli_channel_theta_map,
    t_to_theta,
    theta_to_t,
    twirl,
)

from .conftest import random_density_matrix, random_state, thetas


@pytest.mark.parametrize(
    "theta, t",
    [
        ((1, 0, 0, 0), (1, -1, 1)),
        ((0.25, 0.25, 0.25, 0.25), (0, 0, 0)),
        ((0, 0, 0, 1), (-1, -1, -1)),
    ],
)
def test_theta_to_t(theta, t):
    np.testing.assert_allclose(theta_to_t(theta), t, atol=1e-15)


def test_theta_to_t_rejects_unnormalized():
    with pytest.raises(ValueError):
        theta_to_t((0.5, 0.5, 0.5, 0.0))


@pytest.mark.parametrize(
    "t, theta",
    [
        ((0, 0, 0), (0.25, 0.25, 0.25, 0.25)),
        ((1, -1, 1), (1, 0, 0, 0)),
        ((1, 1, 1), (0.5, 0.5, 0.5, -0.5)),
    ],
)
def test_t_to_theta(t, theta):
    np.testing.assert_allclose(t_to_theta(t), theta, atol=1e-15)


def test_t_matches_dense_expectations(rng):
    # t_i = Tr[(sigma_i x sigma_i) rho] for the Bell-basis mixture
    for _ in range(20):
        theta = rng.dirichlet(np.ones(4))
        rho = BELL_VECTORS @ np.diag(theta) @ BELL_VECTORS.conj().T
        direct = [np.trace(np.kron(s, s) @ rho).real for s in PAULI[1:]]
        np.testing.assert_allclose(theta_to_t(theta), direct, atol=1e-14)


@given(thetas())
def test_round_trip(theta):
    np.testing.assert_allclose(t_to_theta(theta_to_t(theta)), theta, atol=1e-12)


@given(thetas())
def test_purity_identity(theta):
    t = theta_to_t(theta)
    assert abs(t @ t - (4 * theta @ theta - 1)) < 1e-12


def test_vertices_map_to_tetrahedron():
    for i in range(4):
        e = np.eye(4)[i]
        t = theta_to_t(e)
        assert np.all(np.abs(t) == 1)
        np.testing.assert_allclose(t_to_theta(t), e, atol=1e-15)


@pytest.mark.parametrize("t, expected", [((0, 0, 0), True), ((1, 1, 1), False), ((1, -1, 1), True)])
def test_is_physical(t, expected):
    assert is_physical(t) is expected


@pytest.mark.parametrize("t, expected", [((0, 0, 0), True), ((1, -1, 1), False), ((0.5, 0.3, 0.2), True)])
def test_is_separable(t, expected):
    assert is_separable(t) is expected


def test_is_separable_rejects_unphysical():
    with pytest.raises(ValueError):
        is_separable((1, 1, 1))


def test_state_clamps_boundary_noise():
    s = BellDiagonalState((1 + 5e-10, -5e-10, 0, 0))
    assert np.all(s.theta >= 0) and abs(s.theta.sum() - 1) < 1e-15
    with pytest.raises(ValueError):
        BellDiagonalState((1.1, -0.1, 0, 0))


def test_density_matrix_examples():
    np.testing.assert_allclose(density_matrix(BellDiagonalState.from_t((0, 0, 0))), np.eye(4) / 4, atol=1e-15)
    phi_plus = BELL_VECTORS[:, 0]
    np.testing.assert_allclose(
        density_matrix(BellDiagonalState.from_t((1, -1, 1))), np.outer(phi_plus, phi_plus.conj()), atol=1e-15
    )


def test_density_matrix_diagonalized_by_bell_basis(rng):
    for _ in range(50):
        s = random_state(rng)
        rho = density_matrix(s)
        # brute force: eigenvalues as a multiset, and the Bell-basis diagonal
        np.testing.assert_allclose(np.sort(np.linalg.eigvalsh(rho)), np.sort(s.theta), atol=1e-10)
        comp = bell_components(rho)
        np.testing.assert_allclose(comp.diagonal().real, s.theta, atol=1e-12)
        assert np.abs(comp - np.diag(comp.diagonal())).max() < 1e-12


def test_twirl_examples():
    phi_plus = BELL_VECTORS[:, 0]
    np.testing.assert_allclose(twirl(np.outer(phi_plus, phi_plus.conj())).theta, (1, 0, 0, 0), atol=1e-15)
    ket00 = np.zeros(4)
    ket00[0] = 1
    np.testing.assert_allclose(twirl(np.outer(ket00, ket00)).theta, (0.5, 0.5, 0, 0), atol=1e-15)


def test_twirl_brute_force(rng):
    for _ in range(100):
        rho = random_density_matrix(rng)
        out = twirl(rho)
        # brute force: average the four conjugations by hand
        avg = sum(np.kron(s, s) @ rho @ np.kron(s, s) for s in PAULI) / 4
        comp = bell_components(avg)
        assert np.abs(comp - np.diag(comp.diagonal())).max() < 1e-12
        np.testing.assert_allclose(out.theta, bell_components(rho).diagonal().real, atol=1e-12)


def test_twirl_fixes_bell_diagonal_states(rng):
    for _ in range(20):
        s = random_state(rng)
        np.testing.assert_allclose(twirl(density_matrix(s)).theta, s.theta, atol=1e-12)


def test_twirl_rejects_invalid():
    with pytest.raises(ValueError):
        twirl(np.eye(4))
    with pytest.raises(ValueError):
        twirl(np.triu(np.ones((4, 4))) / 4)


def test_pauli_channel_identity_and_depolarizing(rng):
    rho = random_density_matrix(rng)
    ident = np.zeros((4, 4))
    ident[0, 0] = 1
    np.testing.assert_allclose(apply_pauli_channel(rho, ident), rho, atol=1e-15)
    np.testing.assert_allclose(apply_pauli_channel(rho, np.full((4, 4), 1 / 16)), np.eye(4) / 4, atol=1e-14)


def test_pauli_channel_z_flip():
    q = 0.3
    p = np.zeros((4, 4))
    p[0, 0], p[3, 0] = 1 - q, q
    phi_plus = density_matrix(BellDiagonalState((1, 0, 0, 0)))
    np.testing.assert_allclose(twirl(apply_pauli_channel(phi_plus, p)).theta, (1 - q, q, 0, 0), atol=1e-15)


def test_pauli_channel_preserves_bell_diagonal_and_commutes_with_twirl(rng):
    for _ in range(30):
        p = rng.dirichlet(np.ones(16)).reshape(4, 4)
        rho = random_density_matrix(rng)
        out = apply_pauli_channel(rho, p)
        assert np.allclose(out, out.conj().T, atol=1e-12) and abs(np.trace(out) - 1) < 1e-12
        s = random_state(rng)
        comp = bell_components(apply_pauli_channel(density_matrix(s), p))
        assert np.abs(comp - np.diag(comp.diagonal())).max() < 1e-12
        # channel then twirl == twirl then induced map on theta
        np.testing.assert_allclose(
            twirl(out).theta, pauli_channel_theta_map(p) @ twirl(rho).theta, atol=1e-12
        )


def test_pauli_channel_rejects_bad_spec(rng):
    rho = random_density_matrix(rng)
    with pytest.raises(ValueError):
        apply_pauli_channel(rho, np.full((4, 4), 0.1))
    bad = np.zeros((4, 4))
    bad[0, 0], bad[1, 1] = 1.5, -0.5
    with pytest.raises(ValueError):
        apply_pauli_channel(rho, bad)
