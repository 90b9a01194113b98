import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weylkin.linalg import hermitian_eigen
from weylkin.representations import (
    InvalidDimension,
    NonCommensurate,
    TruncationWeightTooLarge,
    boost_unitary,
    build,
    build_clock_shift,
    build_fock,
    build_grid,
    coherent_state,
    commensurate_steps,
    gaussian_packet,
    momentum_basis,
    position_basis,
    translation_unitary,
)

from oracles import brute_dft_overlap, brute_fock, brute_matmul

S = 1 / np.sqrt(2)


# --- fock -------------------------------------------------------------------


def test_fock_dim2_by_hand():
    rep = build_fock(2, 1.0)
    assert np.allclose(rep.X, [[0, S], [S, 0]], atol=1e-16)
    assert np.allclose(rep.P, [[0, -1j * S], [1j * S, 0]], atol=1e-16)
    comm = rep.X @ rep.P - rep.P @ rep.X
    assert np.allclose(comm, np.diag([1j, -1j]), atol=1e-15)


@pytest.mark.parametrize("dim", [2, 3, 5, 17, 64])
def test_fock_commutator_is_traceless(dim):
    rep = build_fock(dim, 0.7)
    assert abs(np.trace(rep.X @ rep.P - rep.P @ rep.X)) < 1e-12 * dim


def test_fock_dim4_defect_support():
    rep = build_fock(4, 1.0)
    defect = rep.X @ rep.P - rep.P @ rep.X - 1j * np.eye(4)
    mask = np.ones((4, 4), bool)
    mask[3, 3] = False
    assert np.abs(defect[mask]).max() < 1e-15
    assert abs(defect[3, 3] + 4j) < 1e-14


@pytest.mark.parametrize("dim", range(2, 7))
@pytest.mark.parametrize("hbar", [1.0, 0.3, 2.5])
def test_fock_matches_brute_force_oracle(dim, hbar):
    x, p = brute_fock(dim, hbar)
    rep = build_fock(dim, hbar)
    assert np.allclose(rep.X, x, atol=1e-15) and np.allclose(rep.P, p, atol=1e-15)
    xp, px = np.array(brute_matmul(x, p)), np.array(brute_matmul(p, x))
    assert np.allclose(rep.X @ rep.P - rep.P @ rep.X, xp - px, atol=1e-13)


def test_invalid_dimension():
    for dim in (0, 1, -3, 2.5):
        with pytest.raises(InvalidDimension):
            build_fock(dim)
    with pytest.raises(InvalidDimension):
        build("grid", 1)
    with pytest.raises(ValueError):
        build("lattice", 4)


def test_matrices_are_read_only():
    rep = build_grid(4)
    with pytest.raises(ValueError):
        rep.X[0, 0] = 1.0


# --- grid -------------------------------------------------------------------


def test_grid_dim2_bases():
    rep = build_grid(2, 1.0, 1.0)
    vecs = momentum_basis(rep).vectors
    cols = {tuple(np.round(c * np.sqrt(2)).real.astype(int)) for c in vecs.T}
    assert cols == {(1, 1), (1, -1)}
    overlaps = np.abs(position_basis(rep).vectors.conj().T @ vecs)
    assert np.allclose(overlaps, S, atol=1e-15)


@pytest.mark.parametrize("dim,spacing", [(4, 1.0), (7, 0.3), (32, 0.125)])
def test_grid_position_eigenvalues_exact(dim, spacing):
    rep = build_grid(dim, 1.0, spacing)
    assert np.array_equal(position_basis(rep).values, np.arange(dim) * spacing)
    assert np.array_equal(np.diag(rep.X).real, np.arange(dim) * spacing)


def test_grid_momentum_spacing():
    assert build_grid(4, 1.0, 1.0).momentum_spacing == pytest.approx(np.pi / 2, abs=1e-15)


@pytest.mark.parametrize("dim", [2, 3, 8, 15, 16])
def test_momentum_columns_match_dft_oracle_and_diagonalise_p(dim):
    rep = build_grid(dim, 1.3, 0.4)
    basis = momentum_basis(rep)
    assert np.allclose(basis.vectors, brute_dft_overlap(dim, 1.3, 0.4), atol=1e-14)
    residual = rep.P @ basis.vectors - basis.vectors * basis.values
    assert np.abs(residual).max() < 1e-12 * max(1.0, np.abs(basis.values).max())
    # Jacobi on P recovers the same spectrum
    values, _ = hermitian_eigen(rep.P)
    assert np.allclose(values, np.sort(basis.values), atol=1e-12 * np.abs(values).max())


def test_translation_by_spacing_is_cyclic_shift():
    rep = build_grid(16, 1.0, 0.5)
    u = translation_unitary(rep, rep.spacing)
    j = np.arange(16)
    fidelity = np.abs(u[(j + 1) % 16, j])
    assert fidelity.min() >= 1 - 1e-10
    phases = u[(j + 1) % 16, j]
    assert np.ptp(np.angle(phases)) < 1e-10  # one global phase


def test_zero_parameters_give_identity():
    for rep in (build_grid(8), build_fock(8)):
        assert np.array_equal(translation_unitary(rep, 0.0), np.eye(8))
        assert np.array_equal(boost_unitary(rep, 0.0), np.eye(8))


def test_boost_by_momentum_spacing_is_diagonal_phase():
    rep = build_grid(12, 0.8, 0.25)
    g = rep.momentum_spacing
    v = boost_unitary(rep, g)
    x = np.arange(12) * rep.spacing
    assert np.allclose(v, np.diag(np.exp(1j * x * g / rep.hbar)), atol=1e-13)


def test_commensurate_steps():
    rep = build_grid(8, 1.0, 0.25)
    assert commensurate_steps(rep, 0.75) == 3
    with pytest.raises(NonCommensurate):
        commensurate_steps(rep, 0.3)


# --- clock-shift ------------------------------------------------------------


def test_clock_dim3_relation():
    rep = build_clock_shift(3)
    w = np.exp(2j * np.pi / 3)
    # oracle: explicit products in Python loops
    vu = np.array(brute_matmul(rep.V.tolist(), rep.U.tolist()))
    uv = np.array(brute_matmul(rep.U.tolist(), rep.V.tolist()))
    assert np.linalg.norm(vu - w * uv) <= 1e-14


def test_clock_dim2_anticommute():
    rep = build_clock_shift(2)
    assert np.allclose(rep.U, [[0, 1], [1, 0]])
    assert np.allclose(rep.V, np.diag([1, -1]), atol=1e-15)
    assert np.allclose(rep.V @ rep.U, -rep.U @ rep.V, atol=1e-15)


@pytest.mark.parametrize("dim", range(2, 13))
def test_clock_cyclicity_and_relation(dim):
    rep = build_clock_shift(dim)
    eye = np.eye(dim)
    assert np.allclose(np.linalg.matrix_power(rep.U, dim), eye, atol=1e-13)
    assert np.allclose(np.linalg.matrix_power(rep.V, dim), eye, atol=1e-13 * dim)
    w = np.exp(2j * np.pi / dim)
    assert np.linalg.norm(rep.V @ rep.U - w * rep.U @ rep.V) <= 1e-13 * dim
    assert not rep.has_xp


# --- states -----------------------------------------------------------------


def test_coherent_ground_state():
    rep = build_fock(10)
    assert np.array_equal(coherent_state(rep, 0), np.eye(10)[0])


@pytest.mark.parametrize("alpha", [1.0, 0.5 - 0.7j, -1.2j])
def test_coherent_position_mean(alpha):
    hbar = 0.6
    rep = build_fock(32, hbar)
    psi = coherent_state(rep, alpha)
    mean = np.vdot(psi, rep.X @ psi).real
    assert abs(mean - np.sqrt(2 * hbar) * np.real(alpha)) < 1e-6
    # ladder-operator oracle: a psi = alpha psi on the kept levels
    a = np.diag(np.sqrt(np.arange(1, 32)), 1)
    assert np.linalg.norm((a @ psi - alpha * psi)[:-1]) < 1e-6


def test_coherent_state_guards():
    rep = build_fock(8)
    with pytest.raises(TruncationWeightTooLarge):
        coherent_state(rep, 1.5)  # |alpha|^2 > dim/4
    with pytest.raises(TruncationWeightTooLarge):
        coherent_state(rep, 1.4)  # leaks into the top levels
    with pytest.raises(ValueError):
        coherent_state(build_grid(8), 0.5)


def test_centered_packet_has_zero_mean_momentum():
    rep = build_grid(128, 1.0, np.sqrt(2 * np.pi / 128))
    psi = gaussian_packet(rep, 0.5 * rep.box_length, 0.0, 1.0)
    assert abs(np.vdot(psi, rep.P @ psi)) < 1e-8
    assert abs(np.linalg.norm(psi) - 1) < 1e-14


def test_packet_carries_requested_momentum():
    rep = build_grid(128, 1.0, np.sqrt(2 * np.pi / 128))
    p0 = 3 * rep.momentum_spacing
    psi = gaussian_packet(rep, 0.5 * rep.box_length, p0, 1.0)
    assert abs(np.vdot(psi, rep.P @ psi).real - p0) < 1e-8


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 40), st.floats(0.1, 5.0), st.floats(0.05, 2.0))
def test_grid_operators_hermitian(dim, hbar, spacing):
    rep = build_grid(dim, hbar, spacing)
    assert np.allclose(rep.P, rep.P.conj().T, atol=1e-14 * np.abs(rep.P).max())
    u = translation_unitary(rep, spacing)
    assert np.allclose(u.conj().T @ u, np.eye(dim), atol=1e-10)
