from __future__ import annotations

import math

import numpy as np
import pytest

from dtrig.generators import gen_hyp, gen_trig, hyp_from_steps, trig_from_angles

LN2 = math.log(2.0)


@pytest.fixture
def trig3():
    return gen_trig(3, 24, 1.0, seed=11)


@pytest.fixture
def hyp2():
    return gen_hyp(2, 20, 1.0, seed=5)


def constant_trig(phi: float, N: int):
    return trig_from_angles([phi] * (N + 1))


def constant_hyp(a: float, N: int, sign: float = 1.0):
    return hyp_from_steps([a] * (N + 1), None if sign > 0 else [-1.0])


def zero_trig(n: int, N: int):
    return trig_from_angles(np.zeros((N + 1, n, n)))


def zero_hyp(n: int, N: int):
    return hyp_from_steps(np.zeros((N + 1, n, n)))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[number])
