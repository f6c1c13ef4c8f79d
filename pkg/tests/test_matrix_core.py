from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dtrig.errors import ConvergenceError, DomainError, ShapeError, SingularMatrixError
from dtrig.matrix_core import (
    as_matrix,
    frobenius_norm,
    identity,
    invert,
    invert_batch,
    is_invertible,
    lu_factor_batch,
    multiply,
    sym_eigen,
    sym_matrix_fn,
    sym_matrix_fns,
    transpose,
)


def triple_loop(a, b):
    n, m, p = len(a), len(b), len(b[0])
    return [[sum(a[i][k] * b[k][j] for k in range(m)) for j in range(p)] for i in range(n)]


def test_multiply_identity_and_j_squared():
    m = np.arange(4.0).reshape(2, 2)
    assert np.array_equal(multiply(identity(2), m), m)
    j = np.array([[0.0, 1.0], [-1.0, 0.0]])
    assert np.array_equal(multiply(j, j), -np.eye(2))


def test_multiply_matches_triple_loop():
    rng = np.random.default_rng(0)
    a, b = rng.normal(size=(3, 3)), rng.normal(size=(3, 3))
    assert np.allclose(multiply(a, b), triple_loop(a.tolist(), b.tolist()), atol=1e-14)


def test_multiply_shape_error():
    with pytest.raises(ShapeError):
        multiply(np.eye(2), np.eye(3))


def test_as_matrix_flat_and_read_only():
    a = as_matrix([1, 2, 3, 4], 2, 2)
    assert a.tolist() == [[1, 2], [3, 4]]
    with pytest.raises(ValueError):
        a[0, 0] = 5
    with pytest.raises(DomainError):
        as_matrix([[math.nan]])
    assert np.array_equal(transpose(a), [[1, 3], [2, 4]])


def test_invert_examples():
    assert np.array_equal(invert(np.eye(4)), np.eye(4))
    assert np.allclose(invert(np.diag([2.0, 0.5])), np.diag([0.5, 2.0]), atol=0)
    with pytest.raises(SingularMatrixError):
        invert(np.zeros((2, 2)))
    assert not is_invertible(np.array([[1.0, 2.0], [2.0, 4.0]]))


def test_lu_reconstructs_permuted_matrix():
    rng = np.random.default_rng(1)
    a = rng.normal(size=(5, 4, 4))
    f = lu_factor_batch(a)
    lower = np.tril(f.lu, -1) + np.eye(4)
    upper = np.triu(f.lu)
    permuted = np.take_along_axis(a, f.perm[:, :, None], axis=1)
    assert np.allclose(lower @ upper, permuted, atol=1e-13)
    assert f.ok.all()


def test_invert_batch_marks_singular_entries():
    stack = np.stack([np.eye(2), np.zeros((2, 2)), np.diag([1.0, 1e-14])])
    inv, ok = invert_batch(stack)
    assert ok.tolist() == [True, False, False]
    assert np.isnan(inv[1]).all()
    # a reference scale larger than the entries makes a small matrix singular
    _, ok = invert_batch(1e-9 * np.eye(2)[None], 1e-6, scale=1.0)
    assert not ok[0]


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_invert_is_two_sided_inverse(n, seed):
    a = np.random.default_rng(seed).normal(size=(n, n)) + 3 * np.eye(n)
    inv = invert(a)
    assert np.linalg.norm(a @ inv - np.eye(n)) < 1e-10
    assert np.linalg.norm(inv @ a - np.eye(n)) < 1e-10


def test_frobenius_examples():
    assert frobenius_norm(np.eye(3)) == pytest.approx(math.sqrt(3), abs=1e-15)
    assert frobenius_norm(np.zeros((2, 2))) == 0.0
    assert frobenius_norm(np.array([[3.0, 4.0], [0.0, 0.0]])) == 5.0


def test_sym_eigen_examples():
    e = sym_eigen(np.diag([3.0, 1.0, 2.0]))
    assert e.eigenvalues.tolist() == [1.0, 2.0, 3.0]
    assert np.array_equal(np.abs(e.eigenvectors), np.eye(3)[:, [1, 2, 0]])
    e = sym_eigen(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert np.allclose(e.eigenvalues, [-1.0, 1.0], atol=1e-15)
    assert np.array_equal(sym_eigen(np.eye(4)).eigenvalues, np.ones(4))


def test_sym_eigen_errors(monkeypatch):
    with pytest.raises(DomainError):
        sym_eigen(np.array([[0.0, 1.0], [0.0, 0.0]]))
    import dtrig.matrix_core as mc

    monkeypatch.setattr(mc, "MAX_SWEEPS", 0)
    with pytest.raises(ConvergenceError):
        mc.sym_eigen(np.array([[1.0, 2.0], [2.0, 1.0]]))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 7), st.integers(0, 2**32 - 1))
def test_sym_eigen_reconstructs(n, seed):
    m = np.random.default_rng(seed).normal(size=(n, n))
    a = m + m.T
    e = sym_eigen(a)
    assert np.linalg.norm(e.reconstruct() - a) <= 1e-12 * max(1.0, np.linalg.norm(a))
    v = e.eigenvectors
    assert np.linalg.norm(v.T @ v - np.eye(n)) < 1e-12
    assert np.all(np.diff(e.eigenvalues) >= 0)


def test_matrix_functions():
    assert np.array_equal(sym_matrix_fn(np.zeros((3, 3)), "cos"), np.eye(3))
    s = sym_matrix_fn(np.diag([math.log(2.0)] * 2), "sinh")
    assert np.allclose(s, 0.75 * np.eye(2), atol=1e-15)
    with pytest.raises(DomainError):
        sym_matrix_fn(np.eye(2), "tan")


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_pythagorean_spectral_identities(n, seed):
    m = np.random.default_rng(seed).normal(size=(n, n))
    a = 0.5 * (m + m.T)
    c, s, ch, sh = sym_matrix_fns(a, ("cos", "sin", "cosh", "sinh"))
    assert np.linalg.norm(c @ c + s @ s - np.eye(n)) < 1e-12
    assert np.linalg.norm(ch @ ch - sh @ sh - np.eye(n)) < 1e-12 * np.linalg.norm(ch @ ch)
