"""Seeded construction of valid trigonometric and hyperbolic coefficients.

Trigonometric steps are ``P = G cos(A)``, ``Q = G sin(A)`` with ``A``
symmetric and ``G`` orthogonal; hyperbolic steps are ``P = D cosh(A)``,
``Q = D sinh(A)`` with ``D`` a fixed diagonal of signs.  Both satisfy the
defining conditions by construction.  Every draw comes from one
:class:`~dtrig.rng.SplitMix64` stream per call, in the order ``A_0, G_0,
A_1, G_1, ...`` (trig) or ``A_0, A_1, ...`` (hyperbolic).
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import DomainError
from .hyperbolic import HypCoefficients
from .matrix_core import sym_matrix_fns
from .rng import SplitMix64, make_rng
from .trig import TrigCoefficients


def _check_dims(n: int, N: int | None = None) -> None:
    if int(n) < 1:
        raise DomainError("n must be at least 1")
    if N is not None and int(N) < 0:
        raise DomainError("N must be non-negative")


def random_symmetric(n: int, amplitude: float, seed: int | SplitMix64) -> np.ndarray:
    """Symmetric ``n x n`` matrix with Frobenius norm ``amplitude * u``, ``u`` uniform in (0, 1].

    Entries are standard normals symmetrized as ``(M + M^T) / 2``; the extra
    uniform factor spreads the step sizes instead of pinning every step to the
    same norm.
    """
    _check_dims(n)
    if not amplitude > 0:
        raise DomainError("amplitude must be positive")
    rng = make_rng(seed)
    m = np.array(rng.normals(n * n), dtype=np.float64).reshape(n, n)
    s = 0.5 * (m + m.T)
    norm = float(np.sqrt(np.sum(s * s)))
    scale = amplitude * rng.uniform()
    if norm == 0.0:
        return s
    return s * (scale / norm)


def random_orthogonal(n: int, seed: int | SplitMix64) -> np.ndarray:
    """Orthogonal factor of a Householder QR of a normal sample, with ``diag(R) > 0``."""
    _check_dims(n)
    rng = make_rng(seed)
    m = np.array(rng.normals(n * n), dtype=np.float64).reshape(n, n)
    g, r = np.linalg.qr(m)
    signs = np.where(np.diag(r) < 0, -1.0, 1.0)
    return g * signs


def trig_from_angles(angles: Sequence, rotations: Sequence | None = None) -> TrigCoefficients:
    """``P_k = G_k cos(A_k)``, ``Q_k = G_k sin(A_k)`` from given symmetric ``A_k`` (and ``G_k``).

    Scalars are accepted for ``n = 1``: ``trig_from_angles([phi_0, phi_1])``
    gives ``p_k = cos(phi_k)``, ``q_k = sin(phi_k)``.
    """
    a = np.asarray(angles, dtype=np.float64)
    if a.ndim == 1:
        a = a[:, None, None]
    p = np.empty_like(a)
    q = np.empty_like(a)
    for k, ak in enumerate(a):
        if ak.shape == (1, 1):
            p[k] = np.cos(ak)
            q[k] = np.sin(ak)
        else:
            p[k], q[k] = sym_matrix_fns(ak, ("cos", "sin"))
    if rotations is not None:
        g = np.asarray(rotations, dtype=np.float64).reshape(a.shape)
        p, q = g @ p, g @ q
    return TrigCoefficients(p, q)


def hyp_from_steps(steps: Sequence, sign_diag: Sequence[float] | None = None) -> HypCoefficients:
    """``P_k = D cosh(A_k)``, ``Q_k = D sinh(A_k)`` from given symmetric ``A_k``."""
    a = np.asarray(steps, dtype=np.float64)
    if a.ndim == 1:
        a = a[:, None, None]
    d = _sign_diag(sign_diag, a.shape[1])
    p = np.empty_like(a)
    q = np.empty_like(a)
    for k, ak in enumerate(a):
        if ak.shape == (1, 1):
            p[k] = np.cosh(ak)
            q[k] = np.sinh(ak)
        else:
            p[k], q[k] = sym_matrix_fns(ak, ("cosh", "sinh"))
    return HypCoefficients(d[:, None] * p, d[:, None] * q)


def _sign_diag(sign_diag, n: int) -> np.ndarray:
    if sign_diag is None:
        return np.ones(n)
    d = np.asarray(sign_diag, dtype=np.float64)
    if d.ndim == 2:
        if d.shape != (n, n) or np.any(d - np.diag(np.diag(d))):
            raise DomainError("sign_diag must be an n x n diagonal matrix")
        d = np.diag(d)
    if d.shape != (n,) or not np.all(np.abs(d) == 1.0):
        raise DomainError("sign_diag entries must be +1 or -1")
    return d


def gen_trig(n: int, N: int, amplitude: float = 1.0, seed: int = 0) -> TrigCoefficients:
    _check_dims(n, N)
    rng = SplitMix64(seed)
    p = np.empty((N + 1, n, n))
    q = np.empty_like(p)
    for k in range(N + 1):
        a = random_symmetric(n, amplitude, rng)
        g = random_orthogonal(n, rng)
        cos_a, sin_a = sym_matrix_fns(a, ("cos", "sin"))
        p[k], q[k] = g @ cos_a, g @ sin_a
    return TrigCoefficients(p, q, seed=int(seed), amplitude=float(amplitude))


def gen_hyp(
    n: int,
    N: int,
    amplitude: float = 1.0,
    sign_diag: Sequence[float] | None = None,
    seed: int = 0,
) -> HypCoefficients:
    _check_dims(n, N)
    d = _sign_diag(sign_diag, n)
    rng = SplitMix64(seed)
    p = np.empty((N + 1, n, n))
    q = np.empty_like(p)
    for k in range(N + 1):
        a = random_symmetric(n, amplitude, rng)
        cosh_a, sinh_a = sym_matrix_fns(a, ("cosh", "sinh"))
        p[k], q[k] = d[:, None] * cosh_a, d[:, None] * sinh_a
    return HypCoefficients(p, q, seed=int(seed), amplitude=float(amplitude))
