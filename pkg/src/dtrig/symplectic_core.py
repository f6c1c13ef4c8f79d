"""Discrete symplectic systems ``X_{k+1} = A_k X_k + B_k U_k``, ``U_{k+1} = C_k X_k + D_k U_k``.

Coefficients are held as a :class:`BlockSequence` (four stacks of shape
``(N+1, n, n)``) and solutions as a :class:`Trajectory` (two stacks of shape
``(N+2, n, m)``).  Both are immutable.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import _residuals as R
from .errors import ShapeError, ValidationError
from .matrix_core import as_matrix
from .report import ResidualReport, summarize

DEFAULT_TOL = 1e-10
CHECKED_TOL = 1e-12


class SystemKind(enum.Enum):
    TRIG = "trig"
    HYPERBOLIC = "hyperbolic"
    GENERAL = "symplectic"


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.float64)
    a.setflags(write=False)
    return a


def _stack(values, name: str) -> np.ndarray:
    a = np.array(values, dtype=np.float64)
    if a.ndim != 3 or a.shape[1] != a.shape[2] or a.shape[0] < 1 or a.shape[1] < 1:
        raise ShapeError(f"{name} must be a non-empty stack of square matrices, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ShapeError(f"{name} has non-finite entries")
    return _frozen(a)


@dataclass(frozen=True)
class BlockSymplectic:
    """One step matrix ``S = [[A, B], [C, D]]``."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        blocks = [as_matrix(m) for m in (self.a, self.b, self.c, self.d)]
        n = blocks[0].shape[0]
        for m in blocks:
            if m.shape != (n, n):
                raise ShapeError("all four blocks must be square with equal dimension")
        for name, m in zip("abcd", blocks):
            object.__setattr__(self, name, m)

    @classmethod
    def checked(cls, a, b, c, d, tol: float = CHECKED_TOL) -> "BlockSymplectic":
        s = cls(a, b, c, d)
        ok, res = is_symplectic(s, tol)
        if not ok:
            raise ValidationError(f"blocks are not symplectic (residual {res:.3e} > {tol:g})")
        return s

    @property
    def n(self) -> int:
        return self.a.shape[0]

    def matrix(self) -> np.ndarray:
        return np.block([[self.a, self.b], [self.c, self.d]])

    def inverse(self) -> "BlockSymplectic":
        """``S^{-1} = -J S^T J``; exact for symplectic ``S``."""
        return BlockSymplectic(self.d.T, -self.b.T, -self.c.T, self.a.T)


@dataclass(frozen=True)
class BlockSequence:
    """Coefficients ``S_0 .. S_N`` stored as stacked blocks."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        stacks = [_stack(m, name) for name, m in zip("ABCD", (self.a, self.b, self.c, self.d))]
        if len({s.shape for s in stacks}) != 1:
            raise ShapeError("block stacks must share one shape")
        for name, m in zip("abcd", stacks):
            object.__setattr__(self, name, m)

    @classmethod
    def from_blocks(cls, blocks: Sequence[BlockSymplectic]) -> "BlockSequence":
        if not blocks:
            raise ShapeError("at least one coefficient block is required")
        return cls(
            np.stack([s.a for s in blocks]),
            np.stack([s.b for s in blocks]),
            np.stack([s.c for s in blocks]),
            np.stack([s.d for s in blocks]),
        )

    @property
    def n(self) -> int:
        return self.a.shape[1]

    @property
    def horizon(self) -> int:
        """``N``: steps are indexed ``0..N``."""
        return self.a.shape[0] - 1

    def __len__(self) -> int:
        return self.a.shape[0]

    def __getitem__(self, k: int) -> BlockSymplectic:
        return BlockSymplectic(self.a[k], self.b[k], self.c[k], self.d[k])

    def blocks(self) -> list[BlockSymplectic]:
        return [self[k] for k in range(len(self))]


Coefficients = Union[BlockSequence, Sequence[BlockSymplectic]]


def as_block_sequence(coeffs) -> BlockSequence:
    if isinstance(coeffs, BlockSequence):
        return coeffs
    if hasattr(coeffs, "block_sequence"):
        return coeffs.block_sequence()
    return BlockSequence.from_blocks(list(coeffs))


@dataclass(frozen=True)
class Trajectory:
    """Matrix solution ``(X_k, U_k)``, ``k = 0..N+1``."""

    x: np.ndarray
    u: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.float64)
        u = np.asarray(self.u, dtype=np.float64)
        if x.ndim != 3 or x.shape != u.shape:
            raise ShapeError(f"x and u must be equal-shape stacks, got {x.shape} and {u.shape}")
        object.__setattr__(self, "x", _frozen(x))
        object.__setattr__(self, "u", _frozen(u))

    @property
    def n(self) -> int:
        return self.x.shape[1]

    @property
    def horizon(self) -> int:
        return self.x.shape[0] - 2

    def __len__(self) -> int:
        return self.x.shape[0]

    def norms(self) -> np.ndarray:
        """``||(X_k; U_k)||_F`` for every ``k``."""
        return np.sqrt(np.sum(self.x**2, axis=(1, 2)) + np.sum(self.u**2, axis=(1, 2)))


# --------------------------------------------------------------------------
# symplecticity
# --------------------------------------------------------------------------


def symplectic_residuals(coeffs, relative: bool = False) -> np.ndarray:
    """Per-step max residual over the eight block equalities of ``S^T J S = J``."""
    s = as_block_sequence(coeffs)
    a, b, c, d = s.a, s.b, s.c, s.d
    at, bt, ct, dt = R.tr(a), R.tr(b), R.tr(c), R.tr(d)
    eye = R.eye_like(a)
    zero = np.zeros_like(a)
    pairs = [
        (at @ d, ct @ b, eye),
        (dt @ a, bt @ c, eye),
        (a @ dt, b @ ct, eye),
        (d @ at, c @ bt, eye),
        (at @ c, ct @ a, zero),
        (bt @ d, dt @ b, zero),
        (a @ bt, b @ at, zero),
        (c @ dt, d @ ct, zero),
    ]
    out = [R.residual(p - q, rhs, (p, q, rhs) if relative else None) for p, q, rhs in pairs]
    return R.worst(*out)


def is_symplectic(s: BlockSymplectic, tol: float = DEFAULT_TOL, relative: bool = False) -> tuple[bool, float]:
    """Check ``S^T J S = J`` through its block form; returns ``(ok, residual)``."""
    res = float(symplectic_residuals(BlockSequence.from_blocks([s]), relative)[0])
    return res <= tol, res


# --------------------------------------------------------------------------
# solutions
# --------------------------------------------------------------------------


def _initial(x0, u0, n: int) -> tuple[np.ndarray, np.ndarray]:
    x0 = np.asarray(x0, dtype=np.float64)
    u0 = np.asarray(u0, dtype=np.float64)
    if x0.ndim != 2 or x0.shape != u0.shape or x0.shape[0] != n:
        raise ShapeError(f"initial values must be matching {n}-row matrices, got {x0.shape}, {u0.shape}")
    return x0, u0


def propagate(coeffs: Coefficients, x0, u0) -> Trajectory:
    """Forward solution from ``(X_0, U_0)`` over ``k = 0..N+1``."""
    s = as_block_sequence(coeffs)
    x0, u0 = _initial(x0, u0, s.n)
    steps = len(s)
    x = np.empty((steps + 1,) + x0.shape)
    u = np.empty_like(x)
    x[0], u[0] = x0, u0
    for k in range(steps):
        x[k + 1] = s.a[k] @ x[k] + s.b[k] @ u[k]
        u[k + 1] = s.c[k] @ x[k] + s.d[k] @ u[k]
    return Trajectory(x, u)


def solve_from(coeffs: Coefficients, k0: int, x0, u0) -> Trajectory:
    """Solution with ``(X_{k0}, U_{k0}) = (x0, u0)``; steps backwards through ``S_k^{-1} = -J S_k^T J``."""
    s = as_block_sequence(coeffs)
    steps = len(s)
    if not 0 <= k0 <= steps:
        raise ShapeError(f"k0={k0} outside 0..{steps}")
    x0, u0 = _initial(x0, u0, s.n)
    x = np.empty((steps + 1,) + x0.shape)
    u = np.empty_like(x)
    x[k0], u[k0] = x0, u0
    for k in range(k0, steps):
        x[k + 1] = s.a[k] @ x[k] + s.b[k] @ u[k]
        u[k + 1] = s.c[k] @ x[k] + s.d[k] @ u[k]
    for k in range(k0 - 1, -1, -1):
        x[k] = s.d[k].T @ x[k + 1] - s.b[k].T @ u[k + 1]
        u[k] = -s.c[k].T @ x[k + 1] + s.a[k].T @ u[k + 1]
    return Trajectory(x, u)


def principal_solution(coeffs: Coefficients, k0: int = 0) -> Trajectory:
    """Solution with ``X_{k0} = 0`` and ``U_{k0} = I``."""
    s = as_block_sequence(coeffs)
    return solve_from(s, k0, np.zeros((s.n, s.n)), np.eye(s.n))


def principal_solutions_all(coeffs: Coefficients) -> tuple[np.ndarray, np.ndarray]:
    """Principal solutions at every base point at once.

    Returns ``(X, U)`` of shape ``(N+2, N+2, n, n)`` with ``X[l, k]`` the
    value at ``k`` of the principal solution at ``l``.
    """
    s = as_block_sequence(coeffs)
    steps, n = len(s), s.n
    x = np.empty((steps + 1, steps + 1, n, n))
    u = np.empty_like(x)
    for l in range(steps + 1):
        x[l, l] = 0.0
        u[l, l] = np.eye(n)
    for k in range(steps):
        xs, us = x[: k + 1, k], u[: k + 1, k]
        x[: k + 1, k + 1] = s.a[k] @ xs + s.b[k] @ us
        u[: k + 1, k + 1] = s.c[k] @ xs + s.d[k] @ us
    for k in range(steps - 1, -1, -1):
        xs, us = x[k + 1:, k + 1], u[k + 1:, k + 1]
        x[k + 1:, k] = s.d[k].T @ xs - s.b[k].T @ us
        u[k + 1:, k] = -s.c[k].T @ xs + s.a[k].T @ us
    return x, u


def restep_residuals(coeffs: Coefficients, traj: Trajectory, relative: bool = False) -> np.ndarray:
    """``||S_k z_k - z_{k+1}||`` for ``k = 0..N``."""
    s = as_block_sequence(coeffs)
    if len(traj) != len(s) + 1 or traj.n != s.n:
        raise ShapeError("trajectory does not match the coefficient sequence")
    x, u = traj.x, traj.u
    ax, bu = s.a @ x[:-1], s.b @ u[:-1]
    cx, du = s.c @ x[:-1], s.d @ u[:-1]
    terms_x = (ax, bu, x[1:]) if relative else None
    terms_u = (cx, du, u[1:]) if relative else None
    return R.worst(R.residual(ax + bu, x[1:], terms_x), R.residual(cx + du, u[1:], terms_u))


# --------------------------------------------------------------------------
# Wronskian and normalized conjoined bases
# --------------------------------------------------------------------------


def _same_shape(z1: Trajectory, z2: Trajectory) -> None:
    if z1.x.shape != z2.x.shape:
        raise ShapeError(f"trajectories differ in shape: {z1.x.shape} vs {z2.x.shape}")


def wronskians(z1: Trajectory, z2: Trajectory) -> np.ndarray:
    """``W_k = X_k^T U~_k - U_k^T X~_k`` for every ``k``."""
    _same_shape(z1, z2)
    return R.tr(z1.x) @ z2.u - R.tr(z1.u) @ z2.x


def wronskian(z1: Trajectory, z2: Trajectory, k: int) -> np.ndarray:
    _same_shape(z1, z2)
    if not 0 <= k < len(z1):
        raise ShapeError(f"k={k} outside 0..{len(z1) - 1}")
    return z1.x[k].T @ z2.u[k] - z1.u[k].T @ z2.x[k]


def wronskian_drift(z1: Trajectory, z2: Trajectory, relative: bool = False) -> np.ndarray:
    """``||W_k - W_0||_F`` per ``k``; with ``relative`` divided by ``max(1, ||z1_k|| ||z2_k||)``."""
    w = wronskians(z1, z2)
    drift = R.residual(w, w[0][None])
    if relative:
        drift = drift / np.maximum(1.0, z1.norms() * z2.norms())
    return drift


def normalized_conjoined_residuals(z1: Trajectory, z2: Trajectory, relative: bool = False) -> dict[str, np.ndarray]:
    _same_shape(z1, z2)
    x, u, xt, ut = z1.x, z1.u, z2.x, z2.u
    eye = R.eye_like(x)
    zero = np.zeros_like(x)

    def res(p, q, rhs):
        return R.residual(p - q, rhs, (p, q, rhs) if relative else None)

    eq4 = R.worst(res(R.tr(x) @ ut, R.tr(u) @ xt, eye), res(x @ R.tr(ut), xt @ R.tr(u), eye))
    eq5 = R.worst(res(x @ R.tr(xt), xt @ R.tr(x), zero), res(u @ R.tr(ut), ut @ R.tr(u), zero))
    return {"eq4": eq4, "eq5": eq5}


def check_normalized_conjoined(
    z1: Trajectory, z2: Trajectory, tol: float = DEFAULT_TOL, relative: bool = False
) -> ResidualReport:
    """Per-index check of the normalized-conjoined-basis identities for ``(z1, z2)``."""
    res = normalized_conjoined_residuals(z1, z2, relative)
    return ResidualReport(summarize(key, r, tol) for key, r in res.items())


def recover_block_stacks(z1: Trajectory, z2: Trajectory) -> BlockSequence:
    """Blocks ``A_k .. D_k`` rebuilt from a normalized pair, ``k = 0..N``."""
    _same_shape(z1, z2)
    x, u, xt, ut = z1.x, z1.u, z2.x, z2.u
    a = x[1:] @ R.tr(ut[:-1]) - xt[1:] @ R.tr(u[:-1])
    b = xt[1:] @ R.tr(x[:-1]) - x[1:] @ R.tr(xt[:-1])
    c = u[1:] @ R.tr(ut[:-1]) - ut[1:] @ R.tr(u[:-1])
    d = ut[1:] @ R.tr(x[:-1]) - u[1:] @ R.tr(xt[:-1])
    return BlockSequence(a, b, c, d)


def recover_blocks(z1: Trajectory, z2: Trajectory, k: int) -> BlockSymplectic:
    if not 0 <= k <= z1.horizon:
        raise ShapeError(f"k={k} outside 0..{z1.horizon}")
    return recover_block_stacks(z1, z2)[k]


def block_recovery_residuals(z1: Trajectory, z2: Trajectory, coeffs, relative: bool = False) -> dict[str, np.ndarray]:
    """Residuals of the four block-recovery identities against the generating blocks."""
    s = as_block_sequence(coeffs)
    got = recover_block_stacks(z1, z2)
    x, u, xt, ut = z1.x, z1.u, z2.x, z2.u
    terms = {
        "eq6": (x[1:] @ R.tr(ut[:-1]), xt[1:] @ R.tr(u[:-1])),
        "eq7": (xt[1:] @ R.tr(x[:-1]), x[1:] @ R.tr(xt[:-1])),
        "eq8": (u[1:] @ R.tr(ut[:-1]), ut[1:] @ R.tr(u[:-1])),
        "eq9": (ut[1:] @ R.tr(x[:-1]), u[1:] @ R.tr(xt[:-1])),
    }
    out = {}
    for key, mine, ref in zip(terms, (got.a, got.b, got.c, got.d), (s.a, s.b, s.c, s.d)):
        out[key] = R.residual(mine, ref, terms[key] + (ref,) if relative else None)
    return out


def core_report(coeffs, z1: Trajectory, z2: Trajectory, tol: float = DEFAULT_TOL, relative: bool = False) -> ResidualReport:
    """Normalized-basis identities, block recovery and Wronskian constancy for one basis pair."""
    report = check_normalized_conjoined(z1, z2, tol, relative)
    for key, r in block_recovery_residuals(z1, z2, coeffs, relative).items():
        report.add(summarize(key, r, tol))
    drift = R.worst(
        wronskian_drift(z1, z2, relative),
        wronskian_drift(z1, z1, relative),
        wronskian_drift(z2, z2, relative),
    )
    report.add(summarize("wronskian", drift, tol))
    return report
