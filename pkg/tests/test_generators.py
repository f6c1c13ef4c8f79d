from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dtrig.errors import DomainError
from dtrig.generators import gen_hyp, gen_trig, hyp_from_steps, random_orthogonal, random_symmetric, trig_from_angles
from dtrig.hyperbolic import validate_hyp
from dtrig.trig import validate_trig


def test_random_symmetric():
    a = random_symmetric(3, 0.7, 42)
    assert np.array_equal(a, a.T)
    assert np.linalg.norm(a) <= 0.7 * (1 + 1e-15)
    assert np.array_equal(a, random_symmetric(3, 0.7, 42))
    with pytest.raises(DomainError):
        random_symmetric(3, 0.0, 1)


def test_random_orthogonal():
    assert abs(random_orthogonal(1, 5)[0, 0]) == 1.0
    for seed in range(20):
        g = random_orthogonal(5, seed)
        assert np.linalg.norm(g.T @ g - np.eye(5)) <= 1e-13
    assert np.array_equal(random_orthogonal(4, 8), random_orthogonal(4, 8))


def test_from_steps_examples():
    c = trig_from_angles(np.zeros((3, 2, 2)))
    assert np.array_equal(c.p, np.broadcast_to(np.eye(2), (3, 2, 2))) and not c.q.any()
    h = hyp_from_steps([math.log(2.0)] * 2)
    assert h.p[0, 0, 0] == 1.25 and h.q[0, 0, 0] == 0.75
    h = hyp_from_steps(np.zeros((2, 2, 2)), [1, -1])
    assert np.array_equal(h.p[0], np.diag([1.0, -1.0])) and validate_hyp(h, 1e-12).passed
    # scalar trig: p = cos(phi), q = sin(phi)
    t = gen_trig(1, 10, 1.0, 3)
    assert np.allclose(t.p ** 2 + t.q ** 2, 1.0, atol=1e-15)


def test_negative_sign_gives_negative_p():
    h = gen_hyp(1, 4, 1.0, [-1], seed=2)
    assert np.all(h.p < 0)
    with pytest.raises(DomainError):
        gen_hyp(2, 4, 1.0, [1, 2], seed=2)
    with pytest.raises(DomainError):
        gen_hyp(2, 4, 1.0, [[1, 1], [0, 1]], seed=2)


def test_determinism():
    a, b = gen_trig(3, 8, 1.0, 99), gen_trig(3, 8, 1.0, 99)
    assert np.array_equal(a.p, b.p) and np.array_equal(a.q, b.q)
    assert not np.array_equal(a.p, gen_trig(3, 8, 1.0, 100).p)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 16), st.integers(0, 6), st.floats(0.01, 2.0), st.integers(0, 2**64 - 1))
def test_generated_trig_is_valid(n, N, amplitude, seed):
    assert validate_trig(gen_trig(n, N, amplitude, seed), 1e-12).passed


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 16), st.integers(0, 6), st.floats(0.01, 1.0), st.integers(0, 2**64 - 1))
def test_generated_hyp_is_valid(n, N, amplitude, seed):
    signs = [(-1.0) ** ((seed >> i) & 1) for i in range(n)]
    assert validate_hyp(gen_hyp(n, N, amplitude, signs, seed), 1e-12).passed
