"""Dense real matrix kernels.

Matrices are plain ``float64`` :class:`numpy.ndarray` objects.  Values handed
out by the constructors below are finite and marked read-only, so they can be
shared freely.  Many kernels also come in a *batched* flavour that works on a
stack of shape ``(B, n, n)``; the identity suites rely on these to evaluate an
identity at every index ``k`` at once.

The LU factorisation (partial pivoting) and the cyclic Jacobi eigensolver are
implemented here rather than delegated to LAPACK, because the singularity
criterion is defined in terms of the LU pivots themselves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConvergenceError, DomainError, ShapeError, SingularMatrixError

DEFAULT_PIVOT_TOL = 1e-12
DEFAULT_SWEEP_TOL = 1e-14
MAX_SWEEPS = 100

_SCALAR_FUNCTIONS: dict[str, Callable[[float], float]] = {
    "cos": math.cos,
    "sin": math.sin,
    "cosh": math.cosh,
    "sinh": math.sinh,
    "exp": math.exp,
}


def as_matrix(values, n_rows: int | None = None, n_cols: int | None = None) -> np.ndarray:
    """Return a read-only, finite ``float64`` copy of ``values``.

    ``values`` may be a nested sequence, an array, or a flat row-major
    sequence when both ``n_rows`` and ``n_cols`` are given.
    """
    a = np.array(values, dtype=np.float64)
    if n_rows is not None and n_cols is not None:
        if a.size != n_rows * n_cols:
            raise ShapeError(f"expected {n_rows * n_cols} entries, got {a.size}")
        a = a.reshape(n_rows, n_cols)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ShapeError(f"a matrix needs two positive dimensions, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DomainError("matrix entries must be finite")
    a.setflags(write=False)
    return a


def identity(n: int) -> np.ndarray:
    return as_matrix(np.eye(n))


def zeros(n: int, m: int | None = None) -> np.ndarray:
    return as_matrix(np.zeros((n, n if m is None else m)))


def _require_square(a: np.ndarray) -> int:
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ShapeError(f"square matrix required, got shape {a.shape}")
    return a.shape[-1]


def multiply(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product ``a @ b`` with an explicit shape check."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    out = a @ b
    out.setflags(write=False)
    return out


def transpose(a: np.ndarray) -> np.ndarray:
    """Transpose of a matrix, or of every matrix in a stack."""
    return np.swapaxes(a, -1, -2)


def frobenius_norm(a: np.ndarray) -> float:
    """Frobenius norm, squares summed left to right in row-major order."""
    total = 0.0
    for v in np.asarray(a, dtype=np.float64).ravel().tolist():
        total += v * v
    return math.sqrt(total)


def frobenius_norms(stack: np.ndarray) -> np.ndarray:
    """Frobenius norm of each matrix in a ``(..., n, m)`` stack."""
    stack = np.asarray(stack, dtype=np.float64)
    return np.sqrt(np.sum(stack * stack, axis=(-2, -1)))


# --------------------------------------------------------------------------
# LU with partial pivoting
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class LUBatch:
    """Packed LU factors of a stack: ``a[b][perm[b]] = L[b] @ U[b]``.

    ``ok[b]`` is False when some pivot of matrix ``b`` failed the pivot test.
    """

    lu: np.ndarray
    perm: np.ndarray
    ok: np.ndarray
    min_pivot_ratio: np.ndarray


def lu_factor_batch(
    stack: np.ndarray,
    pivot_tol: float = DEFAULT_PIVOT_TOL,
    scale: np.ndarray | float | None = None,
) -> LUBatch:
    """Factor every matrix of ``stack`` with row partial pivoting.

    A matrix is flagged singular when a pivot magnitude falls below
    ``pivot_tol`` times its largest absolute entry.  Passing ``scale`` raises
    that reference magnitude to ``max(max_abs_entry, scale)``, which lets a
    caller measure smallness against a known natural size of the matrix.
    """
    if pivot_tol <= 0:
        raise DomainError("pivot_tol must be positive")
    a = np.array(stack, dtype=np.float64)
    if a.ndim == 2:
        a = a[None]
    n = _require_square(a)
    nb = a.shape[0]
    rows = np.arange(nb)
    perm = np.tile(np.arange(n), (nb, 1))
    ref = np.max(np.abs(a), axis=(1, 2)) if a.size else np.zeros(nb)
    if scale is not None:
        ref = np.maximum(ref, scale)
    thresh = pivot_tol * ref
    ok = ref > 0.0
    ratio = np.full(nb, np.inf)
    for j in range(n):
        p = np.argmax(np.abs(a[:, j:, j]), axis=1) + j
        swap = p != j
        if np.any(swap):
            tmp = a[rows, j].copy()
            a[rows, j] = a[rows, p]
            a[rows, p] = tmp
            tmp = perm[rows, j].copy()
            perm[rows, j] = perm[rows, p]
            perm[rows, p] = tmp
        piv = a[:, j, j]
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.minimum(ratio, np.where(ref > 0, np.abs(piv) / ref, 0.0))
        small = np.abs(piv) < thresh
        ok &= ~small
        if j + 1 < n:
            safe = np.where(small | (piv == 0.0), 1.0, piv)
            mult = a[:, j + 1:, j] / safe[:, None]
            mult[small | (piv == 0.0)] = 0.0
            a[:, j + 1:, j] = mult
            a[:, j + 1:, j + 1:] -= mult[:, :, None] * a[:, j, None, j + 1:]
    return LUBatch(lu=a, perm=perm, ok=ok, min_pivot_ratio=ratio)


def _inverse_from_lu(f: LUBatch) -> np.ndarray:
    lu = f.lu
    nb, n, _ = lu.shape
    # Rows of the permuted identity: P @ I.
    y = np.zeros((nb, n, n))
    y[np.arange(nb)[:, None], np.arange(n)[None, :], f.perm] = 1.0
    for i in range(1, n):
        y[:, i, :] -= np.einsum("bj,bjk->bk", lu[:, i, :i], y[:, :i, :])
    x = np.empty_like(y)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for i in range(n - 1, -1, -1):
            rhs = y[:, i, :]
            if i + 1 < n:
                rhs = rhs - np.einsum("bj,bjk->bk", lu[:, i, i + 1:], x[:, i + 1:, :])
            x[:, i, :] = rhs / lu[:, i, i][:, None]
    x[~f.ok] = np.nan
    return x


def invert_batch(
    stack: np.ndarray,
    pivot_tol: float = DEFAULT_PIVOT_TOL,
    scale: np.ndarray | float | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Invert every matrix in ``stack``.

    Returns ``(inverses, ok)``; entries whose matrix failed the pivot test are
    filled with NaN and have ``ok`` False.
    """
    f = lu_factor_batch(stack, pivot_tol, scale)
    return _inverse_from_lu(f), f.ok


def is_invertible(a: np.ndarray, pivot_tol: float = DEFAULT_PIVOT_TOL) -> bool:
    return bool(lu_factor_batch(np.asarray(a)[None], pivot_tol).ok[0])


def invert(a: np.ndarray, pivot_tol: float = DEFAULT_PIVOT_TOL) -> np.ndarray:
    """Inverse of a square matrix via LU with partial pivoting.

    Raises :class:`SingularMatrixError` when any pivot magnitude is below
    ``pivot_tol`` times the largest absolute entry of ``a``.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise ShapeError(f"matrix expected, got shape {a.shape}")
    _require_square(a)
    f = lu_factor_batch(a[None], pivot_tol)
    if not f.ok[0]:
        raise SingularMatrixError(
            f"matrix is singular at pivot tolerance {pivot_tol:g} "
            f"(smallest pivot ratio {f.min_pivot_ratio[0]:.3e})"
        )
    out = _inverse_from_lu(f)[0]
    out.setflags(write=False)
    return out


# --------------------------------------------------------------------------
# Symmetric eigenproblem
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SymEigen:
    """Eigenvalues in ascending order and matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.T


def _rotate(m: list[list[float]], p: int, q: int, c: float, s: float, rows: bool) -> None:
    if rows:
        rp, rq = m[p], m[q]
        for k in range(len(rp)):
            x, y = rp[k], rq[k]
            rp[k] = c * x - s * y
            rq[k] = s * x + c * y
    else:
        for r in m:
            x, y = r[p], r[q]
            r[p] = c * x - s * y
            r[q] = s * x + c * y


def sym_eigen(a: np.ndarray, sweep_tol: float = DEFAULT_SWEEP_TOL) -> SymEigen:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps continue until every off-diagonal magnitude is below
    ``sweep_tol * ||a||_F``.  At most ``MAX_SWEEPS`` sweeps are made.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise ShapeError(f"matrix expected, got shape {a.shape}")
    n = _require_square(a)
    norm = frobenius_norm(a)
    if np.max(np.abs(a - a.T), initial=0.0) > sweep_tol * max(norm, 1.0):
        raise DomainError("sym_eigen requires a symmetric matrix")
    m = a.tolist()
    for i in range(n):
        for j in range(i):
            m[i][j] = m[j][i]
    v = np.eye(n).tolist()
    thresh = sweep_tol * norm
    for _ in range(MAX_SWEEPS + 1):
        off = max((abs(m[p][q]) for p in range(n) for q in range(p + 1, n)), default=0.0)
        if off < thresh or off == 0.0:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = m[p][q]
                if apq == 0.0:
                    continue
                theta = (m[q][q] - m[p][p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                _rotate(m, p, q, c, s, rows=False)
                _rotate(m, p, q, c, s, rows=True)
                m[p][q] = m[q][p] = 0.0
                _rotate(v, p, q, c, s, rows=False)
    else:
        raise ConvergenceError(f"Jacobi iteration did not converge in {MAX_SWEEPS} sweeps")
    lam = np.array([m[i][i] for i in range(n)])
    order = np.argsort(lam, kind="stable")
    vecs = np.array(v)[:, order]
    lam = lam[order]
    lam.setflags(write=False)
    vecs.setflags(write=False)
    return SymEigen(lam, vecs)


def sym_matrix_fn(a: np.ndarray, fn: str, sweep_tol: float = DEFAULT_SWEEP_TOL) -> np.ndarray:
    """Apply ``fn`` (one of cos, sin, cosh, sinh, exp) to a symmetric matrix spectrally."""
    return sym_matrix_fns(a, (fn,), sweep_tol)[0]


def sym_matrix_fns(a: np.ndarray, fns, sweep_tol: float = DEFAULT_SWEEP_TOL) -> tuple[np.ndarray, ...]:
    """Several spectral functions of one symmetric matrix from a single eigendecomposition."""
    try:
        scalar = [_SCALAR_FUNCTIONS[fn] for fn in fns]
    except KeyError as exc:
        raise DomainError(f"unsupported matrix function {exc.args[0]!r}") from None
    eig = sym_eigen(a, sweep_tol)
    v = eig.eigenvectors
    lam = eig.eigenvalues.tolist()
    results = []
    for f in scalar:
        vals = np.array([f(x) for x in lam])
        out = (v * vals) @ v.T
        out = 0.5 * (out + out.T)
        out.setflags(write=False)
        results.append(out)
    return tuple(results)
