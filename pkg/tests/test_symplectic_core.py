from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import constant_trig
from dtrig import symplectic_core as core
from dtrig.errors import ShapeError, ValidationError
from dtrig.generators import gen_hyp, gen_trig
from dtrig.symplectic_core import BlockSequence, BlockSymplectic

I1, Z1 = np.eye(1), np.zeros((1, 1))


def j_block(n=1):
    return BlockSymplectic(np.zeros((n, n)), np.eye(n), -np.eye(n), np.zeros((n, n)))


def random_symplectic_sequence(n, N, seed):
    """Products of a trig step and a hyperbolic step: symplectic but neither kind."""
    t = gen_trig(n, N, 1.0, seed).block_sequence()
    h = gen_hyp(n, N, 0.7, seed=seed + 1).block_sequence()
    a = t.a @ h.a + t.b @ h.c
    b = t.a @ h.b + t.b @ h.d
    c = t.c @ h.a + t.d @ h.c
    d = t.c @ h.b + t.d @ h.d
    return BlockSequence(a, b, c, d)


def test_is_symplectic_examples():
    ok, res = core.is_symplectic(j_block())
    assert ok and res == 0.0
    assert core.is_symplectic(BlockSymplectic(2 * I1, Z1, Z1, 0.5 * I1))[0]
    assert not core.is_symplectic(BlockSymplectic(2 * I1, Z1, Z1, I1))[0]
    with pytest.raises(ValidationError):
        BlockSymplectic.checked(2 * I1, Z1, Z1, I1)
    BlockSymplectic.checked(2 * I1, Z1, Z1, 0.5 * I1)


def test_block_inverse():
    s = random_symplectic_sequence(3, 0, 4)[0]
    assert np.linalg.norm(s.matrix() @ s.inverse().matrix() - np.eye(6)) < 1e-12


def test_shape_errors():
    with pytest.raises(ShapeError):
        BlockSymplectic(np.eye(2), np.eye(2), np.eye(3), np.eye(2))
    with pytest.raises(ShapeError):
        core.propagate([j_block(2)], np.eye(3), np.eye(3))


def test_propagate_identity_is_constant():
    s = [BlockSymplectic(np.eye(2), np.zeros((2, 2)), np.zeros((2, 2)), np.eye(2))] * 5
    x0, u0 = np.arange(4.0).reshape(2, 2), np.ones((2, 2))
    z = core.propagate(s, x0, u0)
    assert np.array_equal(z.x, np.broadcast_to(x0, z.x.shape))
    assert np.array_equal(z.u, np.broadcast_to(u0, z.u.shape))


def test_propagate_j_has_period_four():
    z = core.propagate([j_block()] * 7, Z1, I1)
    assert z.x[:, 0, 0].tolist() == [0, 1, 0, -1, 0, 1, 0, -1]
    assert z.u[:, 0, 0].tolist() == [1, 0, -1, 0, 1, 0, -1, 0]


def test_restep_is_bitwise():
    s = random_symplectic_sequence(3, 16, 2)
    z = core.propagate(s, np.eye(3), np.zeros((3, 3)))
    assert np.all(core.restep_residuals(s, z) == 0.0)


def test_principal_solution_examples():
    s = random_symplectic_sequence(2, 6, 3)
    z = core.principal_solution(s)
    assert np.array_equal(z.x[0], np.zeros((2, 2))) and np.array_equal(z.u[0], np.eye(2))
    ident = [BlockSymplectic(np.eye(2), np.zeros((2, 2)), np.zeros((2, 2)), np.eye(2))] * 6
    z = core.principal_solution(ident, 3)
    assert np.all(z.x == 0) and np.all(z.u == np.eye(2))


def test_principal_solution_interior_scalar():
    phis = [0.3, -0.2, 0.5, 0.7, -0.4, 0.9, 0.1]
    from dtrig.generators import trig_from_angles

    c = trig_from_angles(phis)
    z = core.principal_solution(c.block_sequence(), 2)
    for k in range(len(phis) + 1):
        lo, hi = (2, k) if k >= 2 else (k, 2)
        total = sum(phis[lo:hi]) * (1 if k >= 2 else -1)
        assert z.x[k, 0, 0] == pytest.approx(math.sin(total), abs=1e-14)
        assert z.u[k, 0, 0] == pytest.approx(math.cos(total), abs=1e-14)


def test_interior_principal_forward_bitwise_and_backward_restep():
    s = random_symplectic_sequence(3, 12, 7)
    k0 = 5
    z = core.principal_solution(s, k0)
    forward = core.propagate(BlockSequence(s.a[k0:], s.b[k0:], s.c[k0:], s.d[k0:]), np.zeros((3, 3)), np.eye(3))
    assert np.array_equal(z.x[k0:], forward.x) and np.array_equal(z.u[k0:], forward.u)
    assert core.restep_residuals(s, z).max() < 1e-12


def test_principal_solutions_all_matches_individual():
    s = random_symplectic_sequence(2, 8, 1)
    xs, us = core.principal_solutions_all(s)
    for l in (0, 3, 9):
        z = core.principal_solution(s, l)
        assert np.allclose(xs[l], z.x, atol=1e-12) and np.allclose(us[l], z.u, atol=1e-12)


def test_wronskian_examples():
    s = random_symplectic_sequence(3, 20, 9)
    zp = core.principal_solution(s)
    zc = core.propagate(s, np.eye(3), np.zeros((3, 3)))
    assert np.array_equal(core.wronskian(zp, zp, 0), np.zeros((3, 3)))
    assert np.array_equal(core.wronskian(zp, zc, 0), -np.eye(3))
    w = core.wronskians(zp, zc)
    assert np.abs(w + np.eye(3)).max() < 1e-12
    assert core.wronskian_drift(zp, zp).max() < 1e-12


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.integers(0, 24), st.integers(0, 2**32 - 1))
def test_wronskian_constant_for_any_solutions(n, N, seed):
    s = random_symplectic_sequence(n, N, seed)
    rng = np.random.default_rng(seed)
    z1 = core.propagate(s, rng.normal(size=(n, n)), rng.normal(size=(n, n)))
    z2 = core.propagate(s, rng.normal(size=(n, n)), rng.normal(size=(n, n)))
    assert core.wronskian_drift(z1, z2, relative=True).max() < 1e-12


def test_check_normalized_conjoined():
    c = gen_trig(3, 10, 1.0, 4)
    s = c.block_sequence()
    zc = core.propagate(s, np.eye(3), np.zeros((3, 3)))
    zp = core.principal_solution(s)
    assert core.check_normalized_conjoined(zc, zp, 1e-12).passed
    assert not core.check_normalized_conjoined(zp, zp, 1e-12).passed
    scalar = constant_trig(0.4, 12).block_sequence()
    rep = core.check_normalized_conjoined(
        core.propagate(scalar, I1, Z1), core.principal_solution(scalar), 1e-12
    )
    assert rep.passed


@pytest.mark.parametrize("kind", ["trig", "hyp", "identity"])
def test_recover_blocks(kind):
    n = 2
    if kind == "trig":
        c = gen_trig(n, 12, 1.0, 3)
        expect = (c.p, c.q, -c.q, c.p)
    elif kind == "hyp":
        c = gen_hyp(n, 12, 1.0, seed=3)
        expect = (c.p, c.q, c.q, c.p)
    else:
        eye = np.broadcast_to(np.eye(n), (13, n, n))
        zero = np.zeros((13, n, n))
        c = BlockSequence(eye, zero, zero, eye)
        expect = (eye, zero, zero, eye)
    s = core.as_block_sequence(c)
    zc = core.propagate(s, np.eye(n), np.zeros((n, n)))
    zp = core.principal_solution(s)
    got = core.recover_block_stacks(zc, zp)
    for mine, ref in zip((got.a, got.b, got.c, got.d), expect):
        assert np.abs(mine - ref).max() <= 1e-10
    blk = core.recover_blocks(zc, zp, 4)
    assert np.allclose(blk.b, expect[1][4], atol=1e-10)
    assert core.core_report(s, zc, zp, 1e-10).passed
