"""Residual reports: one record per identity, kept in insertion order."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator

import numpy as np


@dataclass(frozen=True)
class IdentityResult:
    id: str
    max_residual: float
    tolerance: float
    passed: bool
    skipped_indices: tuple[int, ...] = ()
    evaluated: int = 0
    residuals: np.ndarray | None = field(default=None, repr=False, compare=False)

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "skipped_indices": list(self.skipped_indices),
            "evaluated_indices": self.evaluated,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "IdentityResult":
        return cls(
            id=d["id"],
            max_residual=float(d["max_residual"]),
            tolerance=float(d["tolerance"]),
            passed=bool(d["pass"]),
            skipped_indices=tuple(int(k) for k in d.get("skipped_indices", ())),
            evaluated=int(d.get("evaluated_indices", 0)),
        )


def summarize(
    identity: str,
    residuals: Iterable[float] | np.ndarray,
    tol: float,
    evaluated: Iterable[bool] | np.ndarray | None = None,
    indices: Iterable[int] | None = None,
) -> IdentityResult:
    """Collapse per-index residuals into one record.

    ``evaluated`` masks out indices where the identity is not defined; those
    land in ``skipped_indices``.  A NaN at an evaluated index counts as an
    infinite residual.
    """
    r = np.asarray(residuals, dtype=np.float64).ravel()
    mask = np.ones(r.shape, bool) if evaluated is None else np.asarray(evaluated, bool).ravel()
    idx = np.arange(r.size) if indices is None else np.asarray(list(indices), dtype=int)
    used = r[mask]
    if used.size == 0:
        worst = 0.0
    elif np.any(np.isnan(used)):
        worst = float("inf")
    else:
        worst = float(np.max(used))
    return IdentityResult(
        id=identity,
        max_residual=worst,
        tolerance=float(tol),
        passed=worst <= tol,
        skipped_indices=tuple(int(k) for k in idx[~mask]),
        evaluated=int(mask.sum()),
        residuals=np.where(mask, r, np.nan),
    )


class ResidualReport:
    """Ordered map from identity id (``"eq13"``, ``"eq84"``, ...) to its result."""

    def __init__(self, records: Iterable[IdentityResult] = (), meta: dict[str, Any] | None = None):
        self.records: dict[str, IdentityResult] = {}
        self.meta: dict[str, Any] = dict(meta or {})
        for rec in records:
            self.add(rec)

    def add(self, rec: IdentityResult) -> None:
        if rec.id in self.records:
            raise ValueError(f"duplicate identity id {rec.id!r}")
        self.records[rec.id] = rec

    def extend(self, other: "ResidualReport") -> None:
        for rec in other:
            self.add(rec)

    def __iter__(self) -> Iterator[IdentityResult]:
        return iter(self.records.values())

    def __getitem__(self, key: str) -> IdentityResult:
        return self.records[key]

    def __contains__(self, key: str) -> bool:
        return key in self.records

    def __len__(self) -> int:
        return len(self.records)

    def ids(self) -> list[str]:
        return list(self.records)

    @property
    def passed(self) -> bool:
        return all(rec.passed for rec in self)

    def failures(self) -> list[IdentityResult]:
        return [rec for rec in self if not rec.passed]

    def to_dict(self) -> dict[str, Any]:
        return {
            "meta": self.meta,
            "pass": self.passed,
            "identities": [rec.to_dict() for rec in self],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ResidualReport":
        return cls((IdentityResult.from_dict(r) for r in d["identities"]), d.get("meta"))

    def format_lines(self) -> list[str]:
        lines = []
        for rec in self:
            status = "PASS" if rec.passed else "FAIL"
            skipped = f"  skipped={len(rec.skipped_indices)}" if rec.skipped_indices else ""
            lines.append(
                f"{status} {rec.id:<22} max={rec.max_residual:.3e} tol={rec.tolerance:.1e}"
                f" evaluated={rec.evaluated}{skipped}"
            )
        return lines

    def __repr__(self) -> str:
        return f"ResidualReport({len(self)} identities, passed={self.passed})"
