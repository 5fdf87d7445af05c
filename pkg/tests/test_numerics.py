from hypothesis import given, strategies as st
from numpy.testing import assert_allclose
import numpy as np
import pytest

from focklib.errors import DimensionError, InputError
from focklib.numerics import (
    Tolerances, as_matrix, hermitian_eig, min_norm_solve, spectral_norm, svd
)

from helpers import random_complex, random_hermitian, random_unitary


@pytest.mark.parametrize("H, expected", [
    (np.diag([3.0, 1.0]), [1, 3]),
    ([[0, 1], [1, 0]], [-1, 1]),
    ([[2, 1], [1, 2]], [1, 3]),
])
def test_hermitian_eig_examples(H, expected):
    eigenvalues, _ = hermitian_eig(H)
    assert_allclose(eigenvalues, expected, atol=1e-12)


def test_hermitian_eig_rejects_bad_input():
    with pytest.raises(DimensionError):
        hermitian_eig(np.zeros((2, 3)))
    with pytest.raises(InputError):
        hermitian_eig([[np.nan, 0], [0, 1]])
    with pytest.raises(InputError):
        hermitian_eig([[0, 1], [0, 0]])


@given(st.integers(1, 8), st.integers(0, 2 ** 32 - 1))
def test_hermitian_eig_reconstructs(n, seed):
    H = random_hermitian(np.random.default_rng(seed), n)
    eigenvalues, Q = hermitian_eig(H)
    scale = np.linalg.norm(H, 2)
    assert np.all(np.diff(eigenvalues) >= 0)
    assert np.linalg.norm((Q * eigenvalues) @ Q.conj().T - H, 2) <= 1e-10 * scale
    assert_allclose(Q.conj().T @ Q, np.eye(n), atol=1e-12 * n)


@pytest.mark.parametrize("M, expected", [
    (np.eye(2), [1, 1]),
    (np.diag([0.5, 0.8]), [0.8, 0.5]),
    ([[0, 1], [0, 0]], [1, 0]),
])
def test_svd_examples(M, expected):
    U, sigma, V = svd(M)
    assert_allclose(sigma, expected, atol=1e-14)
    assert_allclose((U[:, :len(sigma)] * sigma) @ V.conj().T, np.asarray(M), atol=1e-12)


def test_spectral_norm_examples():
    assert spectral_norm(np.eye(3)) == pytest.approx(1)
    assert spectral_norm(np.diag([0.5, 0.8])) == pytest.approx(0.8)
    assert spectral_norm(np.zeros((2, 2))) == 0


def test_non_finite_entries_are_rejected():
    with pytest.raises(InputError):
        svd([[np.inf, 0], [0, 1]])
    with pytest.raises(InputError):
        as_matrix([[1, "x"]])


def test_spectral_norm_is_unitarily_invariant(rng):
    for n in range(1, 7):
        M = random_complex(rng, n, n)
        U, V = random_unitary(rng, n), random_unitary(rng, n)
        norm = spectral_norm(M)
        assert spectral_norm(M.conj().T) == pytest.approx(norm, rel=1e-12)
        assert spectral_norm(U @ M @ V) == pytest.approx(norm, rel=1e-10)


@pytest.mark.parametrize("M, y, x, residual", [
    (np.diag([1.0, 0.0]), [2, 0], [2, 0], 0),
    (np.diag([1.0, 0.0]), [0, 3], [0, 0], 3),
    ([[1, 1], [1, 1]], [2, 2], [1, 1], 0),
])
def test_min_norm_solve_examples(M, y, x, residual):
    result = min_norm_solve(M, y)
    assert_allclose(result.x, x, atol=1e-12)
    assert result.residual == pytest.approx(residual, abs=1e-12)


def test_min_norm_solve_dimension_mismatch():
    with pytest.raises(DimensionError):
        min_norm_solve(np.eye(2), [1, 2, 3])


def test_min_norm_solve_is_minimal(rng):
    # ランク落ちの行列を作る。
    B = random_complex(rng, 5, 3)
    M = B @ random_complex(rng, 3, 5)
    y = M @ random_complex(rng, 5)
    x = min_norm_solve(M, y).x
    _, sigma, V = svd(M)
    kernel = V[:, 3:]
    for column in kernel.T:
        moved = x + 0.1 * column
        assert np.linalg.norm(M @ moved - y) <= 1e-8 * np.linalg.norm(y)
        assert np.linalg.norm(moved) > np.linalg.norm(x)


def test_tolerances_are_validated():
    with pytest.raises(InputError):
        Tolerances(psd_tol=0)
    with pytest.raises(InputError):
        Tolerances(rank_tol=1.5)
    assert Tolerances().rank_cutoff(4) == pytest.approx(4 * np.finfo(float).eps * 1e3)
    assert Tolerances(rank_tol=1e-6).rank_cutoff(4) == 1e-6
