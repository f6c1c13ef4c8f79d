"""Discrete trigonometric systems.

A trigonometric system is the symplectic system with step matrix
``[[P_k, Q_k], [-Q_k, P_k]]`` where ``P^T P + Q^T Q = I = P P^T + Q Q^T`` and
``P^T Q``, ``P Q^T`` are symmetric.  Its principal solution at ``k0`` defines
``Sin_{k;k0}`` (the ``X`` part) and ``Cos_{k;k0}`` (the ``U`` part).

All functions below index ``k`` over ``0..N+1`` and use base point 0 unless
stated otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _residuals as R
from . import symplectic_core as core
from .errors import ShapeError, UndefinedAtIndex, ValidationError
from .matrix_core import DEFAULT_PIVOT_TOL, invert, invert_batch, is_invertible
from .report import ResidualReport, summarize
from .symplectic_core import BlockSequence, Trajectory

VALIDATE_TOL = 1e-10
SUITE_TOL = 1e-10
# Invertibility cut used by the identity suite; see trig_identity_suite.
SUITE_PIVOT_TOL = 1e-6


def _frozen_stack(values, name: str) -> np.ndarray:
    a = np.array(values, dtype=np.float64)
    if a.ndim != 3 or a.shape[1] != a.shape[2] or a.shape[0] < 1 or a.shape[1] < 1:
        raise ShapeError(f"{name} must be a stack of square matrices, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ShapeError(f"{name} has non-finite entries")
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class TrigCoefficients:
    """``P_k, Q_k`` for ``k = 0..N`` as stacks of shape ``(N+1, n, n)``."""

    p: np.ndarray
    q: np.ndarray
    seed: int | None = field(default=None, compare=False)
    amplitude: float | None = field(default=None, compare=False)

    def __post_init__(self):
        p = _frozen_stack(self.p, "P")
        q = _frozen_stack(self.q, "Q")
        if p.shape != q.shape:
            raise ShapeError(f"P and Q differ in shape: {p.shape} vs {q.shape}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def n(self) -> int:
        return self.p.shape[1]

    @property
    def horizon(self) -> int:
        return self.p.shape[0] - 1

    def block_sequence(self) -> BlockSequence:
        return BlockSequence(self.p, self.q, -self.q, self.p)

    def blocks(self):
        return self.block_sequence().blocks()


@dataclass(frozen=True)
class TrigFunctions:
    """``Sin_{k;k0}`` and ``Cos_{k;k0}`` for ``k = 0..N+1``."""

    base_point: int
    sin: np.ndarray
    cos: np.ndarray

    @property
    def n(self) -> int:
        return self.sin.shape[1]

    @property
    def horizon(self) -> int:
        return self.sin.shape[0] - 2

    def as_trajectory(self) -> Trajectory:
        return Trajectory(self.sin, self.cos)


@dataclass(frozen=True)
class PairCombination:
    """Sums and differences of two systems' functions, ``k = 0..N+1``."""

    plus_sin: np.ndarray
    plus_cos: np.ndarray
    minus_sin: np.ndarray
    minus_cos: np.ndarray

    def tan_plus(self, k: int, pivot_tol: float = DEFAULT_PIVOT_TOL) -> np.ndarray:
        return _quotient(self.plus_cos[k], self.plus_sin[k], "Tan+", k, pivot_tol)

    def tan_minus(self, k: int, pivot_tol: float = DEFAULT_PIVOT_TOL) -> np.ndarray:
        return _quotient(self.minus_cos[k], self.minus_sin[k], "Tan-", k, pivot_tol)

    def cotan_plus(self, k: int, pivot_tol: float = DEFAULT_PIVOT_TOL) -> np.ndarray:
        return _quotient(self.plus_sin[k], self.plus_cos[k], "Cotan+", k, pivot_tol)

    def cotan_minus(self, k: int, pivot_tol: float = DEFAULT_PIVOT_TOL) -> np.ndarray:
        return _quotient(self.minus_sin[k], self.minus_cos[k], "Cotan-", k, pivot_tol)


def _quotient(denominator: np.ndarray, numerator: np.ndarray, name: str, k: int, pivot_tol: float) -> np.ndarray:
    """``denominator^{-1} numerator`` or :class:`UndefinedAtIndex`."""
    if not is_invertible(denominator, pivot_tol):
        raise UndefinedAtIndex(name, k)
    return invert(denominator, pivot_tol) @ numerator


# --------------------------------------------------------------------------
# validation and the functions themselves
# --------------------------------------------------------------------------


def validate_trig(coeffs: TrigCoefficients, tol: float = VALIDATE_TOL) -> ResidualReport:
    """Per-step residuals of the defining conditions, symplecticity and self-reciprocity."""
    p, q = coeffs.p, coeffs.q
    pt, qt = R.tr(p), R.tr(q)
    eye = R.eye_like(p)
    zero = np.zeros_like(p)
    eq10 = R.worst(R.residual(pt @ p + qt @ q, eye), R.residual(p @ pt + q @ qt, eye))
    eq11 = R.worst(R.residual(pt @ q - qt @ p, zero), R.residual(p @ qt - q @ pt, zero))
    s = coeffs.block_sequence()
    # J^T S J = [[D, -C], [-B, A]] for S = [[A, B], [C, D]].
    recip = R.worst(R.residual(s.d, s.a), R.residual(-s.c, s.b))
    return ResidualReport(
        [
            summarize("eq10", eq10, tol),
            summarize("eq11", eq11, tol),
            summarize("symplectic", core.symplectic_residuals(s), tol),
            summarize("self_reciprocal", recip, tol),
        ],
        meta={"kind": "trig", "n": coeffs.n, "N": coeffs.horizon},
    )


def ensure_valid(coeffs: TrigCoefficients, tol: float = VALIDATE_TOL) -> None:
    report = validate_trig(coeffs, tol)
    if not report.passed:
        bad = ", ".join(f"{r.id}={r.max_residual:.2e}" for r in report.failures())
        raise ValidationError(f"not a trigonometric system: {bad}", report)


def trig_functions(coeffs: TrigCoefficients, k0: int = 0, validate: bool = True, tol: float = VALIDATE_TOL) -> TrigFunctions:
    """``Sin_{.;k0}`` and ``Cos_{.;k0}``: the principal solution at ``k0``."""
    if validate:
        ensure_valid(coeffs, tol)
    z = core.principal_solution(coeffs.block_sequence(), k0)
    return TrigFunctions(k0, z.x, z.u)


def general_solution(coeffs: TrigCoefficients, x0, u0, funcs: TrigFunctions | None = None) -> Trajectory:
    """Solution through ``(x0, u0)`` at ``k = 0`` assembled from ``Sin`` and ``Cos``.

    ``X_k = Cos_k X_0 + Sin_k U_0`` and ``U_k = -Sin_k X_0 + Cos_k U_0``.
    """
    f = funcs if funcs is not None else trig_functions(coeffs)
    x0 = np.asarray(x0, dtype=np.float64)
    u0 = np.asarray(u0, dtype=np.float64)
    if x0.shape != u0.shape or x0.ndim != 2 or x0.shape[0] != f.n:
        raise ShapeError("initial values must be matching matrices with n rows")
    return Trajectory(f.cos @ x0 + f.sin @ u0, -f.sin @ x0 + f.cos @ u0)


def fundamental_matrix(funcs: TrigFunctions, k: int) -> np.ndarray:
    """``[[Cos_k, Sin_k], [-Sin_k, Cos_k]]``, mapping ``(X_0; U_0)`` to ``(X_k; U_k)``."""
    s, c = funcs.sin[k], funcs.cos[k]
    return np.block([[c, s], [-s, c]])


def rotate_solution(traj: Trajectory) -> Trajectory:
    """``(X, U) -> (U, -X)``; maps solutions of a trigonometric system to solutions."""
    return Trajectory(traj.u, -traj.x)


def shifted_functions(funcs: TrigFunctions, l: int) -> TrigFunctions:
    """``Sin_{.;l}`` and ``Cos_{.;l}`` from the base-point-0 functions."""
    if funcs.base_point != 0:
        raise ValueError("shifted_functions expects functions with base point 0")
    if not 0 <= l < len(funcs.sin):
        raise ShapeError(f"l={l} outside 0..{len(funcs.sin) - 1}")
    s, c = funcs.sin, funcs.cos
    return TrigFunctions(l, s @ c[l].T - c @ s[l].T, c @ c[l].T + s @ s[l].T)


def parity_check(funcs: TrigFunctions, k: int, l: int) -> tuple[float, float]:
    """Residuals of ``Sin_{k;l} + Sin_{l;k}^T`` and ``Cos_{k;l} - Cos_{l;k}^T``."""
    at_l = shifted_functions(funcs, l)
    at_k = shifted_functions(funcs, k)
    r_sin = np.linalg.norm(at_l.sin[k] + at_k.sin[l].T)
    r_cos = np.linalg.norm(at_l.cos[k] - at_k.cos[l].T)
    return float(r_sin), float(r_cos)


def closed_form_inverses(funcs: TrigFunctions, k: int, pivot_tol: float = DEFAULT_PIVOT_TOL):
    """Inverses of ``Cos_k`` and ``Sin_k`` from the transpose formulas; ``None`` where singular."""
    s, c = funcs.sin[k], funcs.cos[k]
    cos_inv = sin_inv = None
    if is_invertible(c, pivot_tol):
        cos_inv = c.T + s.T @ invert(c.T, pivot_tol) @ s.T
    if is_invertible(s, pivot_tol):
        sin_inv = s.T + c.T @ invert(s.T, pivot_tol) @ c.T
    return cos_inv, sin_inv


def tangent(funcs: TrigFunctions, k: int, pivot_tol: float = DEFAULT_PIVOT_TOL) -> np.ndarray:
    """``Tan_k = Cos_k^{-1} Sin_k``."""
    return _quotient(funcs.cos[k], funcs.sin[k], "Tan", k, pivot_tol)


def cotangent(funcs: TrigFunctions, k: int, pivot_tol: float = DEFAULT_PIVOT_TOL) -> np.ndarray:
    """``Cotan_k = Sin_k^{-1} Cos_k``."""
    return _quotient(funcs.sin[k], funcs.cos[k], "Cotan", k, pivot_tol)


# --------------------------------------------------------------------------
# two systems
# --------------------------------------------------------------------------


def _same_shape(f1, f2) -> None:
    if f1.sin.shape != f2.sin.shape:
        raise ShapeError(f"function stacks differ in shape: {f1.sin.shape} vs {f2.sin.shape}")
    if f1.base_point != 0 or f2.base_point != 0:
        raise ValueError("pair combinations need base point 0")


def combine_pair(f1: TrigFunctions, f2: TrigFunctions) -> PairCombination:
    _same_shape(f1, f2)
    s1, c1, s2, c2 = f1.sin, f1.cos, f2.sin, f2.cos
    s1c2, c1s2 = s1 @ R.tr(c2), c1 @ R.tr(s2)
    c1c2, s1s2 = c1 @ R.tr(c2), s1 @ R.tr(s2)
    return PairCombination(s1c2 + c1s2, c1c2 - s1s2, s1c2 - c1s2, c1c2 + s1s2)


def _check_sign(sign: str) -> None:
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")


def _combination_map(p1, q1, p2, q2, x, u, sign: str):
    """One step of the (non-symplectic) recurrence solved by ``Sin^+-, Cos^+-``."""
    p2t, q2t = R.tr(p2), R.tr(q2)
    if sign == "+":
        m1 = x @ p2t + u @ q2t
        m2 = -x @ q2t + u @ p2t
    else:
        m1 = x @ p2t - u @ q2t
        m2 = x @ q2t + u @ p2t
    return p1 @ m1 + q1 @ m2, -q1 @ m1 + p1 @ m2


def combination_system_step(c1: TrigCoefficients, c2: TrigCoefficients, sign: str) -> Trajectory:
    """Evolve the combination recurrence from ``X_0 = 0``, ``U_0 = I``."""
    _check_sign(sign)
    if c1.p.shape != c2.p.shape:
        raise ShapeError("coefficient sets differ in shape")
    n, steps = c1.n, c1.horizon + 1
    x = np.empty((steps + 1, n, n))
    u = np.empty_like(x)
    x[0], u[0] = 0.0, np.eye(n)
    for k in range(steps):
        x[k + 1], u[k + 1] = _combination_map(c1.p[k], c1.q[k], c2.p[k], c2.q[k], x[k], u[k], sign)
    return Trajectory(x, u)


def combination_restep_residuals(c1: TrigCoefficients, c2: TrigCoefficients, sign: str, traj: Trajectory) -> np.ndarray:
    _check_sign(sign)
    xn, un = _combination_map(c1.p, c1.q, c2.p, c2.q, traj.x[:-1], traj.u[:-1], sign)
    return R.worst(R.residual(xn, traj.x[1:]), R.residual(un, traj.u[1:]))


def double_angle(funcs: TrigFunctions) -> Trajectory:
    """``X_k = 2 Sin_k Cos_k^T`` and ``U_k = Cos_k Cos_k^T - Sin_k Sin_k^T``."""
    s, c = funcs.sin, funcs.cos
    return Trajectory(2.0 * s @ R.tr(c), c @ R.tr(c) - s @ R.tr(s))


# --------------------------------------------------------------------------
# identity suite
# --------------------------------------------------------------------------


def default_partner_seed(coeffs) -> int:
    """Seed of the generated partner system: the system's own seed plus one (mod 2**64)."""
    return ((coeffs.seed or 0) + 1) % 2**64


def _partner(coeffs: TrigCoefficients, partner_seed: int, amplitude: float) -> TrigCoefficients:
    from .generators import gen_trig

    return gen_trig(coeffs.n, coeffs.horizon, amplitude, partner_seed)


def trig_identity_suite(
    coeffs: TrigCoefficients,
    tol: float = SUITE_TOL,
    partner: TrigCoefficients | None = None,
    partner_seed: int | None = None,
    partner_amplitude: float = 1.0,
    pivot_tol: float = SUITE_PIVOT_TOL,
    validate: bool = True,
) -> ResidualReport:
    """Evaluate every trigonometric identity at every index.

    Identities that need a second system use ``partner`` or, when absent, a
    system generated from ``partner_seed``.  Identities involving inverses are
    only evaluated at indices where each inverted matrix passes the pivot test
    at ``pivot_tol`` measured against the natural size 1 of these matrices;
    other indices are listed as skipped.  Residuals of those identities are
    relative to the size of their terms, all others are absolute.
    """
    if validate:
        ensure_valid(coeffs)
    generated = partner is None
    if generated:
        if partner_seed is None:
            partner_seed = default_partner_seed(coeffs)
        partner = _partner(coeffs, partner_seed, partner_amplitude)
        if validate:
            ensure_valid(partner)
    elif partner.p.shape != coeffs.p.shape:
        raise ShapeError("partner system must match the system's shape")

    n, N = coeffs.n, coeffs.horizon
    seq = coeffs.block_sequence()
    f1 = trig_functions(coeffs, validate=False)
    f2 = trig_functions(partner, validate=False)
    s, c = f1.sin, f1.cos
    st, ct = R.tr(s), R.tr(c)
    eye = R.eye_like(s)
    zero = np.zeros_like(s)
    steps = np.arange(N + 1)
    p, q = coeffs.p, coeffs.q

    report = ResidualReport(
        meta={
            "kind": "trig",
            "n": n,
            "N": N,
            "tol": tol,
            "pivot_tol": pivot_tol,
            "partner_seed": partner_seed if generated else None,
            "seed": coeffs.seed,
        }
    )

    def add(key, res, mask=None, indices=None):
        report.add(summarize(key, res, tol, mask, indices))

    # Normalized conjoined bases (Cos, -Sin) and (Sin, Cos); block recovery.
    z_cos = core.propagate(seq, np.eye(n), np.zeros((n, n)))
    z_sin = f1.as_trajectory()
    for rec in core.core_report(seq, z_cos, z_sin, tol):
        report.add(rec)

    z_gen = core.propagate(seq, np.eye(n), np.eye(n))
    g = general_solution(coeffs, np.eye(n), np.eye(n), f1)
    add("general_solution", R.worst(R.residual(g.x, z_gen.x), R.residual(g.u, z_gen.u)))
    add("lem3_4", core.restep_residuals(seq, rotate_solution(z_sin)), indices=steps)

    add("eq13", R.worst(R.residual(ct @ c + st @ s, eye), R.residual(c @ ct + s @ st, eye)))
    add("eq14", R.worst(R.residual(ct @ s - st @ c, zero), R.residual(c @ st - s @ ct, zero)))
    add("eq15", R.residual(c[1:] @ ct[:-1] + s[1:] @ st[:-1], p), indices=steps)
    # Printed with Cos_{k+1} Sin_k^T first, that difference equals -Q_k.
    add("eq16", R.residual(c[1:] @ st[:-1] - s[1:] @ ct[:-1], -q), indices=steps)
    fro = np.sum(c * c, axis=(1, 2)) + np.sum(s * s, axis=(1, 2))
    add("eq17", np.abs(fro - n))

    inv_c, ok_c = invert_batch(c, pivot_tol, scale=1.0)
    inv_s, ok_s = invert_batch(s, pivot_tol, scale=1.0)
    with np.errstate(invalid="ignore", over="ignore"):
        lu_ct = R.tr(inv_c)
        lu_st = R.tr(inv_s)
        form_c = ct + st @ lu_ct @ st
        form_s = st + ct @ lu_st @ ct
        add("rem3_10_cos_inv", R.residual(form_c, inv_c, (ct, st @ lu_ct @ st, inv_c)), ok_c)
        add("rem3_10_sin_inv", R.residual(form_s, inv_s, (st, ct @ lu_st @ ct, inv_s)), ok_s)

    # Shifted arguments against independently propagated principal solutions.
    xs_all, us_all = core.principal_solutions_all(seq)  # [l, k]
    sin_kl = s[None, :] @ R.tr(c)[:, None] - c[None, :] @ R.tr(s)[:, None]
    cos_kl = c[None, :] @ R.tr(c)[:, None] + s[None, :] @ R.tr(s)[:, None]
    add("eq18", np.max(R.residual(sin_kl, xs_all), axis=0))
    add("eq19", np.max(R.residual(cos_kl, us_all), axis=0))
    add("eq20", np.max(R.residual(s[None, :], xs_all @ c[:, None] + us_all @ s[:, None]), axis=0))
    add("eq21", np.max(R.residual(c[None, :], us_all @ c[:, None] - xs_all @ s[:, None]), axis=0))
    swapped_x = R.tr(np.swapaxes(xs_all, 0, 1))
    swapped_u = R.tr(np.swapaxes(us_all, 0, 1))
    add("eq22", np.max(R.worst(R.residual(xs_all, -swapped_x), R.residual(us_all, swapped_u)), axis=0))

    # Two systems.
    pair = combine_pair(f1, f2)
    sp, cp, sm, cm = pair.plus_sin, pair.plus_cos, pair.minus_sin, pair.minus_cos
    for sign, ss, cc in (("+", sp, cp), ("-", sm, cm)):
        z = combination_system_step(coeffs, partner, sign)
        key = "thm3_14_plus" if sign == "+" else "thm3_14_minus"
        add(key, R.worst(R.residual(z.x, ss), R.residual(z.u, cc)))
    for key, ss, cc in (("eq28", sp, cp), ("eq29", sm, cm)):
        add(key, R.worst(
            R.residual(ss @ R.tr(ss) + cc @ R.tr(cc), eye),
            R.residual(R.tr(ss) @ ss + R.tr(cc) @ cc, eye),
        ))
    for key, ss, cc in (("eq30", sp, cp), ("eq31", sm, cm)):
        add(key, R.worst(
            R.residual(ss @ R.tr(cc) - cc @ R.tr(ss), zero),
            R.residual(R.tr(ss) @ cc - R.tr(cc) @ ss, zero),
        ))

    dbl = double_angle(f1)
    z_dbl = combination_system_step(coeffs, coeffs, "+")
    add("cor3_16_solution", R.worst(R.residual(z_dbl.x, dbl.x), R.residual(z_dbl.u, dbl.u)))
    add("cor3_16_commute", R.residual(dbl.x @ dbl.u, dbl.u @ dbl.x))

    s1, c1, s2, c2 = s, c, f2.sin, f2.cos
    add("eq32", R.residual(s1 @ R.tr(s2), 0.5 * (cm - cp)))
    add("eq33", R.residual(c1 @ R.tr(c2), 0.5 * (cm + cp)))
    add("eq34", R.residual(s1 @ R.tr(c2), 0.5 * (sm + sp)))

    _tangent_identities(report, tol, pivot_tol, coeffs, f1, f2, pair, inv_c, ok_c, inv_s, ok_s)
    return report


def _tangent_identities(report, tol, pivot_tol, coeffs, f1, f2, pair, inv_c1, ok_c1, inv_s1, ok_s1):
    def add(key, res, mask, indices=None):
        report.add(summarize(key, res, tol, mask, indices))

    s1, c1, s2, c2 = f1.sin, f1.cos, f2.sin, f2.cos
    q = coeffs.q
    eye = R.eye_like(s1)
    steps = np.arange(coeffs.horizon + 1)
    inv_c2, ok_c2 = invert_batch(c2, pivot_tol, scale=1.0)
    inv_s2, ok_s2 = invert_batch(s2, pivot_tol, scale=1.0)
    inv_cp, ok_cp = invert_batch(pair.plus_cos, pivot_tol, scale=1.0)
    inv_sp, ok_sp = invert_batch(pair.plus_sin, pivot_tol, scale=1.0)
    inv_cm, ok_cm = invert_batch(pair.minus_cos, pivot_tol, scale=1.0)
    inv_sm, ok_sm = invert_batch(pair.minus_sin, pivot_tol, scale=1.0)

    with np.errstate(invalid="ignore", over="ignore", divide="ignore"):
        t1, k1 = inv_c1 @ s1, inv_s1 @ c1
        t2, k2 = inv_c2 @ s2, inv_s2 @ c2

        add("eq35", R.residual(t1, R.tr(t1), (t1,)), ok_c1)
        cc = inv_c1 @ R.tr(inv_c1)
        tt = t1 @ t1
        add("eq36", R.residual(cc - tt, eye, (cc, tt, eye)), ok_c1)
        d_t = t1[1:] - t1[:-1]
        rhs = inv_c1[1:] @ q @ R.tr(inv_c1[:-1])
        add("eq37", R.residual(d_t, rhs, (t1[1:], t1[:-1], rhs)), ok_c1[1:] & ok_c1[:-1], steps)

        add("eq38", R.residual(k1, R.tr(k1), (k1,)), ok_s1)
        ss = inv_s1 @ R.tr(inv_s1)
        kk = k1 @ k1
        add("eq39", R.residual(ss - kk, eye, (ss, kk, eye)), ok_s1)
        d_k = k1[1:] - k1[:-1]
        rhs = -inv_s1[1:] @ q @ R.tr(inv_s1[:-1])
        add("eq40", R.residual(d_k, rhs, (k1[1:], k1[:-1], rhs)), ok_s1[1:] & ok_s1[:-1], steps)

        all4 = ok_c1 & ok_c2 & ok_s1 & ok_s2
        lhs = t1 @ (k1 + k2) @ t2
        add("eq41", R.residual(t1 + t2, lhs, (t1, t2, lhs)), all4)
        lhs = t1 @ (k2 - k1) @ t2
        add("eq42", R.residual(t1 - t2, lhs, (t1, t2, lhs)), all4)
        cos_both = ok_c1 & ok_c2
        rhs = inv_c2 @ R.tr(pair.plus_sin) @ R.tr(inv_c1)
        add("eq43", R.residual(t1 + t2, rhs, (t1, t2, rhs)), cos_both)
        rhs = inv_c2 @ R.tr(pair.minus_sin) @ R.tr(inv_c1)
        add("eq44", R.residual(t1 - t2, rhs, (t1, t2, rhs)), cos_both)

        t1t2 = t1 @ t2
        m_plus, ok_mp = invert_batch(eye - t1t2, pivot_tol)
        m_minus, ok_mm = invert_batch(eye + t1t2, pivot_tol)
        tan_p = inv_cp @ pair.plus_sin
        tan_m = inv_cm @ pair.minus_sin
        c2t_inv = R.tr(inv_c2)
        rhs = c2t_inv @ m_plus @ (t1 + t2) @ R.tr(c2)
        add("eq45", R.residual(tan_p, rhs, (tan_p, rhs)), ok_cp & cos_both & ok_mp)
        rhs = c2t_inv @ m_minus @ (t1 - t2) @ R.tr(c2)
        add("eq46", R.residual(tan_m, rhs, (tan_m, rhs)), ok_cm & cos_both & ok_mm)

        lhs = k1 @ (t1 + t2) @ k2
        add("eq47", R.residual(k1 + k2, lhs, (k1, k2, lhs)), all4)
        lhs = k1 @ (t2 - t1) @ k2
        add("eq48", R.residual(k1 - k2, lhs, (k1, k2, lhs)), all4)
        sin_both = ok_s1 & ok_s2
        rhs = inv_s2 @ R.tr(pair.plus_sin) @ R.tr(inv_s1)
        add("eq49", R.residual(k1 + k2, rhs, (k1, k2, rhs)), sin_both)
        rhs = -inv_s2 @ R.tr(pair.minus_sin) @ R.tr(inv_s1)
        add("eq50", R.residual(k1 - k2, rhs, (k1, k2, rhs)), sin_both)

        k_sum, ok_ks = invert_batch(k1 + k2, pivot_tol)
        k_dif, ok_kd = invert_batch(k2 - k1, pivot_tol)
        cot_p = inv_sp @ pair.plus_cos
        cot_m = inv_sm @ pair.minus_cos
        s2t_inv = R.tr(inv_s2)
        k1k2 = k1 @ k2
        rhs = s2t_inv @ k_sum @ (k1k2 - eye) @ R.tr(s2)
        add("eq51", R.residual(cot_p, rhs, (cot_p, rhs)), ok_sp & sin_both & ok_ks)
        rhs = s2t_inv @ k_dif @ (k1k2 + eye) @ R.tr(s2)
        add("eq52", R.residual(cot_m, rhs, (cot_m, rhs)), ok_sm & sin_both & ok_kd)
