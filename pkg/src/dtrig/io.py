"""On-disk formats: coefficient JSON files and trajectory CSV.

A coefficient file is a JSON object::

    {"kind": "trig" | "hyperbolic" | "symplectic", "n": n, "N": N,
     "P": [[...n*n numbers...], ... N+1 entries], "Q": [...],
     "seed": 7, "amplitude": 1.0}

with ``A, B, C, D`` in place of ``P, Q`` for ``kind = "symplectic"``.  Each
matrix is flattened row-major.  Numbers are written with Python's shortest
round-trip ``repr`` so a reload is bit-exact.
"""

from __future__ import annotations

import csv
import io as _io
import json
from pathlib import Path
from typing import Union

import numpy as np

from .errors import ShapeError
from .hyperbolic import HypCoefficients
from .symplectic_core import BlockSequence, Trajectory
from .trig import TrigCoefficients

KINDS = ("trig", "hyperbolic", "symplectic")
Coefficients = Union[TrigCoefficients, HypCoefficients, BlockSequence]


def _flatten(stack: np.ndarray) -> list[list[float]]:
    return [[float(x) for x in m.ravel()] for m in stack]


def _unflatten(name: str, entries, n: int, N: int) -> np.ndarray:
    if not isinstance(entries, list) or len(entries) != N + 1:
        raise ShapeError(f"{name} must be a list of N+1 = {N + 1} matrices")
    rows = []
    for k, flat in enumerate(entries):
        if not isinstance(flat, list) or len(flat) != n * n:
            raise ShapeError(f"{name}[{k}] must hold n*n = {n * n} numbers")
        if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in flat):
            raise ShapeError(f"{name}[{k}] contains non-numeric entries")
        rows.append(flat)
    out = np.array(rows, dtype=np.float64).reshape(N + 1, n, n)
    if not np.all(np.isfinite(out)):
        raise ShapeError(f"{name} contains non-finite entries")
    return out


def coefficients_to_dict(coeffs: Coefficients) -> dict:
    if isinstance(coeffs, TrigCoefficients):
        kind, blocks = "trig", {"P": coeffs.p, "Q": coeffs.q}
    elif isinstance(coeffs, HypCoefficients):
        kind, blocks = "hyperbolic", {"P": coeffs.p, "Q": coeffs.q}
    elif isinstance(coeffs, BlockSequence):
        kind, blocks = "symplectic", {"A": coeffs.a, "B": coeffs.b, "C": coeffs.c, "D": coeffs.d}
    else:
        raise TypeError(f"cannot serialize {type(coeffs).__name__}")
    d = {"kind": kind, "n": coeffs.n, "N": coeffs.horizon}
    d.update({name: _flatten(stack) for name, stack in blocks.items()})
    seed = getattr(coeffs, "seed", None)
    amplitude = getattr(coeffs, "amplitude", None)
    if seed is not None:
        d["seed"] = int(seed)
    if amplitude is not None:
        d["amplitude"] = float(amplitude)
    return d


def coefficients_from_dict(d: dict) -> Coefficients:
    if not isinstance(d, dict):
        raise ShapeError("coefficient file must hold a JSON object")
    kind = d.get("kind")
    if kind not in KINDS:
        raise ShapeError(f"kind must be one of {', '.join(KINDS)}, got {kind!r}")
    try:
        n, N = int(d["n"]), int(d["N"])
    except (KeyError, TypeError, ValueError):
        raise ShapeError("n and N must be integers") from None
    if n < 1 or N < 0:
        raise ShapeError("need n >= 1 and N >= 0")
    names = ("A", "B", "C", "D") if kind == "symplectic" else ("P", "Q")
    missing = [name for name in names if name not in d]
    if missing:
        raise ShapeError(f"missing blocks: {', '.join(missing)}")
    stacks = [_unflatten(name, d[name], n, N) for name in names]
    if kind == "symplectic":
        return BlockSequence(*stacks)
    seed = d.get("seed")
    amplitude = d.get("amplitude")
    cls = TrigCoefficients if kind == "trig" else HypCoefficients
    return cls(
        stacks[0],
        stacks[1],
        seed=None if seed is None else int(seed),
        amplitude=None if amplitude is None else float(amplitude),
    )


def dumps_coefficients(coeffs: Coefficients) -> str:
    return json.dumps(coefficients_to_dict(coeffs)) + "\n"


def save_coefficients(coeffs: Coefficients, path: str | Path) -> None:
    Path(path).write_text(dumps_coefficients(coeffs), encoding="utf-8")


def load_coefficients(path: str | Path) -> Coefficients:
    """Read and shape-check a coefficient file; validation is left to the caller."""
    with open(path, encoding="utf-8") as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ShapeError(f"{path}: not valid JSON ({exc})") from None
    return coefficients_from_dict(d)


def trajectory_csv(traj: Trajectory) -> str:
    """``k,i,j,X,U`` rows for every index and entry, 17 significant digits."""
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "i", "j", "X", "U"])
    K, n, m = traj.x.shape
    for k in range(K):
        xk, uk = traj.x[k], traj.u[k]
        for i in range(n):
            for j in range(m):
                w.writerow([k, i, j, format(xk[i, j], ".17g"), format(uk[i, j], ".17g")])
    return buf.getvalue()


def read_trajectory_csv(text: str) -> Trajectory:
    rows = list(csv.DictReader(_io.StringIO(text)))
    if not rows:
        raise ShapeError("empty trajectory file")
    K = max(int(r["k"]) for r in rows) + 1
    n = max(int(r["i"]) for r in rows) + 1
    m = max(int(r["j"]) for r in rows) + 1
    x = np.zeros((K, n, m))
    u = np.zeros((K, n, m))
    for r in rows:
        k, i, j = int(r["k"]), int(r["i"]), int(r["j"])
        x[k, i, j] = float(r["X"])
        u[k, i, j] = float(r["U"])
    return Trajectory(x, u)
