"""Discrete hyperbolic systems.

The step matrix is ``[[P_k, Q_k], [Q_k, P_k]]`` with ``P^T P - Q^T Q = I =
P P^T - Q Q^T`` and ``P^T Q``, ``P Q^T`` symmetric.  ``Sinh_{k;k0}`` and
``Cosh_{k;k0}`` are the ``X`` and ``U`` parts of the principal solution at
``k0``.

Solutions grow geometrically, so every residual here is relative: the
Frobenius norm of the difference divided by ``max(1, sum of the norms of the
terms involved)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _residuals as R
from . import symplectic_core as core
from .errors import InternalInconsistencyError, ShapeError, UndefinedAtIndex, ValidationError
from .matrix_core import DEFAULT_PIVOT_TOL, frobenius_norms, invert, invert_batch, is_invertible
from .report import ResidualReport, summarize
from .symplectic_core import BlockSequence, Trajectory
from .trig import _frozen_stack, default_partner_seed

VALIDATE_TOL = 1e-10
SUITE_TOL = 1e-8
# Invertibility cut for Sinh-type matrices in the identity suite, measured
# against max(largest entry, ||Cosh||_F) so that a Sinh that is tiny next to
# its Cosh counts as singular.
SUITE_PIVOT_TOL = 1e-6


@dataclass(frozen=True)
class HypCoefficients:
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
        return BlockSequence(self.p, self.q, self.q, self.p)

    def blocks(self):
        return self.block_sequence().blocks()


@dataclass(frozen=True)
class HypFunctions:
    """``Sinh_{k;k0}`` and ``Cosh_{k;k0}`` for ``k = 0..N+1``."""

    base_point: int
    sinh: np.ndarray
    cosh: np.ndarray

    @property
    def n(self) -> int:
        return self.sinh.shape[1]

    @property
    def horizon(self) -> int:
        return self.sinh.shape[0] - 2

    def as_trajectory(self) -> Trajectory:
        return Trajectory(self.sinh, self.cosh)


@dataclass(frozen=True)
class HypPairCombination:
    plus_sinh: np.ndarray
    plus_cosh: np.ndarray
    minus_sinh: np.ndarray
    minus_cosh: np.ndarray

    def tanh_plus(self, k: int, pivot_tol: float = DEFAULT_PIVOT_TOL) -> np.ndarray:
        return _quotient(self.plus_cosh[k], self.plus_sinh[k], "Tanh+", k, pivot_tol)

    def tanh_minus(self, k: int, pivot_tol: float = DEFAULT_PIVOT_TOL) -> np.ndarray:
        return _quotient(self.minus_cosh[k], self.minus_sinh[k], "Tanh-", k, pivot_tol)

    def cotanh_plus(self, k: int, pivot_tol: float = DEFAULT_PIVOT_TOL) -> np.ndarray:
        return _quotient(self.plus_sinh[k], self.plus_cosh[k], "Cotanh+", k, pivot_tol)

    def cotanh_minus(self, k: int, pivot_tol: float = DEFAULT_PIVOT_TOL) -> np.ndarray:
        return _quotient(self.minus_sinh[k], self.minus_cosh[k], "Cotanh-", k, pivot_tol)


def _quotient(denominator, numerator, name: str, k: int, pivot_tol: float) -> np.ndarray:
    if not is_invertible(denominator, pivot_tol):
        raise UndefinedAtIndex(name, k)
    return invert(denominator, pivot_tol) @ numerator


# --------------------------------------------------------------------------
# validation and the functions themselves
# --------------------------------------------------------------------------


def validate_hyp(coeffs: HypCoefficients, tol: float = VALIDATE_TOL, pivot_tol: float = DEFAULT_PIVOT_TOL) -> ResidualReport:
    """Defining conditions, symplecticity and the consequences that ``P_k`` is invertible,
    ``(P ± Q)^{-1} = P^T ∓ Q^T`` and ``P^{-1} Q`` is symmetric."""
    p, q = coeffs.p, coeffs.q
    pt, qt = R.tr(p), R.tr(q)
    eye = R.eye_like(p)
    zero = np.zeros_like(p)
    eq53 = R.worst(
        R.residual(pt @ p - qt @ q, eye, (pt @ p, qt @ q, eye)),
        R.residual(p @ pt - q @ qt, eye, (p @ pt, q @ qt, eye)),
    )
    eq54 = R.worst(
        R.residual(pt @ q, qt @ p, (pt @ q,)),
        R.residual(p @ qt, q @ pt, (p @ qt,)),
    )
    symp = core.symplectic_residuals(coeffs.block_sequence(), relative=True)
    plus = R.residual((p + q) @ (pt - qt), eye, ((p + q) @ (pt - qt), eye))
    minus = R.residual((p - q) @ (pt + qt), eye, ((p - q) @ (pt + qt), eye))
    inv_p, ok = invert_batch(p, pivot_tol)
    with np.errstate(invalid="ignore"):
        m = inv_p @ q
        sym = np.where(ok, R.residual(m, R.tr(m), (m,)), np.inf)
    return ResidualReport(
        [
            summarize("eq53", eq53, tol),
            summarize("eq54", eq54, tol),
            summarize("symplectic", symp, tol),
            summarize("rem4_1_p_invertible", np.where(ok, 0.0, np.inf), tol),
            summarize("rem4_1_plus_inverse", plus, tol),
            summarize("rem4_1_minus_inverse", minus, tol),
            summarize("rem4_1_symmetric", sym, tol),
        ],
        meta={"kind": "hyperbolic", "n": coeffs.n, "N": coeffs.horizon},
    )


def ensure_valid(coeffs: HypCoefficients, tol: float = VALIDATE_TOL) -> None:
    report = validate_hyp(coeffs, tol)
    if not report.passed:
        bad = ", ".join(f"{r.id}={r.max_residual:.2e}" for r in report.failures())
        raise ValidationError(f"not a hyperbolic system: {bad}", report)


def hyp_functions(coeffs: HypCoefficients, k0: int = 0, validate: bool = True, tol: float = VALIDATE_TOL) -> HypFunctions:
    if validate:
        ensure_valid(coeffs, tol)
    z = core.principal_solution(coeffs.block_sequence(), k0)
    return HypFunctions(k0, z.x, z.u)


def hyp_general_solution(coeffs: HypCoefficients, x0, u0, funcs: HypFunctions | None = None) -> Trajectory:
    """``X_k = Cosh_k X_0 + Sinh_k U_0`` and ``U_k = Sinh_k X_0 + Cosh_k U_0``."""
    f = funcs if funcs is not None else hyp_functions(coeffs)
    x0 = np.asarray(x0, dtype=np.float64)
    u0 = np.asarray(u0, dtype=np.float64)
    if x0.shape != u0.shape or x0.ndim != 2 or x0.shape[0] != f.n:
        raise ShapeError("initial values must be matching matrices with n rows")
    return Trajectory(f.cosh @ x0 + f.sinh @ u0, f.sinh @ x0 + f.cosh @ u0)


def swap_solution(traj: Trajectory) -> Trajectory:
    """``(X, U) -> (U, X)``; maps solutions of a hyperbolic system to solutions."""
    return Trajectory(traj.u, traj.x)


def hyp_shifted_functions(funcs: HypFunctions, l: int) -> HypFunctions:
    if funcs.base_point != 0:
        raise ValueError("hyp_shifted_functions expects functions with base point 0")
    if not 0 <= l < len(funcs.sinh):
        raise ShapeError(f"l={l} outside 0..{len(funcs.sinh) - 1}")
    s, c = funcs.sinh, funcs.cosh
    return HypFunctions(l, s @ c[l].T - c @ s[l].T, c @ c[l].T - s @ s[l].T)


def hyp_parity_check(funcs: HypFunctions, k: int, l: int) -> tuple[float, float]:
    """Relative residuals of ``Sinh_{k;l} + Sinh_{l;k}^T`` and ``Cosh_{k;l} - Cosh_{l;k}^T``."""
    at_l = hyp_shifted_functions(funcs, l)
    at_k = hyp_shifted_functions(funcs, k)
    a, b = at_l.sinh[k], at_k.sinh[l].T
    c, d = at_l.cosh[k], at_k.cosh[l].T
    r_sinh = np.linalg.norm(a + b) / max(1.0, np.linalg.norm(a) + np.linalg.norm(b))
    r_cosh = np.linalg.norm(c - d) / max(1.0, np.linalg.norm(c) + np.linalg.norm(d))
    return float(r_sinh), float(r_cosh)


def _sinh_scale(funcs: HypFunctions, k: int) -> float:
    return float(np.linalg.norm(funcs.cosh[k]))


def hyp_inverses(funcs: HypFunctions, k: int, pivot_tol: float = DEFAULT_PIVOT_TOL):
    """Closed-form inverses of ``Cosh_k`` and (when invertible) ``Sinh_k``."""
    s, c = funcs.sinh[k], funcs.cosh[k]
    if not is_invertible(c, pivot_tol):
        raise InternalInconsistencyError(f"Cosh_{k} failed the pivot test although Cosh is always invertible")
    cosh_inv = c.T - s.T @ invert(c.T, pivot_tol) @ s.T
    sinh_inv = None
    inv_s, ok = invert_batch(s[None], pivot_tol, scale=_sinh_scale(funcs, k))
    if ok[0]:
        sinh_inv = c.T @ inv_s[0].T @ c.T - s.T
    return cosh_inv, sinh_inv


def hyp_tangent(funcs: HypFunctions, k: int, pivot_tol: float = DEFAULT_PIVOT_TOL) -> np.ndarray:
    """``Tanh_k = Cosh_k^{-1} Sinh_k``."""
    c = funcs.cosh[k]
    if not is_invertible(c, pivot_tol):
        raise InternalInconsistencyError(f"Cosh_{k} failed the pivot test although Cosh is always invertible")
    return invert(c, pivot_tol) @ funcs.sinh[k]


def hyp_cotangent(funcs: HypFunctions, k: int, pivot_tol: float = DEFAULT_PIVOT_TOL) -> np.ndarray:
    """``Cotanh_k = Sinh_k^{-1} Cosh_k``; undefined where ``Sinh_k`` is singular."""
    inv_s, ok = invert_batch(funcs.sinh[k][None], pivot_tol, scale=_sinh_scale(funcs, k))
    if not ok[0]:
        raise UndefinedAtIndex("Cotanh", k)
    return inv_s[0] @ funcs.cosh[k]


# --------------------------------------------------------------------------
# two systems
# --------------------------------------------------------------------------


def hyp_combine_pair(f1: HypFunctions, f2: HypFunctions) -> HypPairCombination:
    if f1.sinh.shape != f2.sinh.shape:
        raise ShapeError(f"function stacks differ in shape: {f1.sinh.shape} vs {f2.sinh.shape}")
    if f1.base_point != 0 or f2.base_point != 0:
        raise ValueError("pair combinations need base point 0")
    s1, c1, s2, c2 = f1.sinh, f1.cosh, f2.sinh, f2.cosh
    s1c2, c1s2 = s1 @ R.tr(c2), c1 @ R.tr(s2)
    c1c2, s1s2 = c1 @ R.tr(c2), s1 @ R.tr(s2)
    return HypPairCombination(s1c2 + c1s2, c1c2 + s1s2, s1c2 - c1s2, c1c2 - s1s2)


def _combination_map(p1, q1, p2, q2, x, u, sign: str):
    p2t, q2t = R.tr(p2), R.tr(q2)
    if sign == "+":
        m1 = x @ p2t + u @ q2t
        m2 = x @ q2t + u @ p2t
    else:
        m1 = x @ p2t - u @ q2t
        m2 = -x @ q2t + u @ p2t
    return p1 @ m1 + q1 @ m2, q1 @ m1 + p1 @ m2


def hyp_combination_system_step(c1: HypCoefficients, c2: HypCoefficients, sign: str) -> Trajectory:
    """Evolve the combination recurrence from ``X_0 = 0``, ``U_0 = I``."""
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    if c1.p.shape != c2.p.shape:
        raise ShapeError("coefficient sets differ in shape")
    n, steps = c1.n, c1.horizon + 1
    x = np.empty((steps + 1, n, n))
    u = np.empty_like(x)
    x[0], u[0] = 0.0, np.eye(n)
    for k in range(steps):
        x[k + 1], u[k + 1] = _combination_map(c1.p[k], c1.q[k], c2.p[k], c2.q[k], x[k], u[k], sign)
    return Trajectory(x, u)


def hyp_combination_restep_residuals(c1: HypCoefficients, c2: HypCoefficients, sign: str, traj: Trajectory) -> np.ndarray:
    xn, un = _combination_map(c1.p, c1.q, c2.p, c2.q, traj.x[:-1], traj.u[:-1], sign)
    x1, u1 = traj.x[1:], traj.u[1:]
    return R.worst(R.residual(xn, x1, (xn, x1)), R.residual(un, u1, (un, u1)))


def hyp_double_angle(funcs: HypFunctions) -> Trajectory:
    """``X_k = 2 Sinh_k Cosh_k^T`` and ``U_k = Cosh_k Cosh_k^T + Sinh_k Sinh_k^T``."""
    s, c = funcs.sinh, funcs.cosh
    return Trajectory(2.0 * s @ R.tr(c), c @ R.tr(c) + s @ R.tr(s))


# --------------------------------------------------------------------------
# identity suite
# --------------------------------------------------------------------------


def _close(a, b, *extra):
    """Relative residual of ``a = b`` using both sides (and ``extra``) as the scale."""
    return R.residual(a, b, (a, b) + extra)


def _pair_close(a, b):
    return R.worst(*(_close(x, y) for x, y in zip(a, b)))


def hyp_identity_suite(
    coeffs: HypCoefficients,
    tol: float = SUITE_TOL,
    partner: HypCoefficients | None = None,
    partner_seed: int | None = None,
    partner_amplitude: float = 1.0,
    pivot_tol: float = SUITE_PIVOT_TOL,
    validate: bool = True,
) -> ResidualReport:
    """Evaluate every hyperbolic identity at every index, with relative residuals.

    ``Cosh``-type matrices are always inverted.  ``Sinh``-type matrices and the
    derived sums ``I ± Tanh1 Tanh2``, ``Cotanh1 ± Cotanh2`` are inverted only
    where they pass the pivot test; other indices are listed as skipped.
    """
    from .generators import gen_hyp

    if validate:
        ensure_valid(coeffs)
    generated = partner is None
    if generated:
        if partner_seed is None:
            partner_seed = default_partner_seed(coeffs)
        partner = gen_hyp(coeffs.n, coeffs.horizon, partner_amplitude, seed=partner_seed)
    elif partner.p.shape != coeffs.p.shape:
        raise ShapeError("partner system must match the system's shape")
    elif validate:
        ensure_valid(partner)

    n, N = coeffs.n, coeffs.horizon
    seq = coeffs.block_sequence()
    f1 = hyp_functions(coeffs, validate=False)
    f2 = hyp_functions(partner, validate=False)
    s, c = f1.sinh, f1.cosh
    st, ct = R.tr(s), R.tr(c)
    eye = R.eye_like(s)
    zero = np.zeros_like(s)
    steps = np.arange(N + 1)
    p, q = coeffs.p, coeffs.q

    report = ResidualReport(
        meta={
            "kind": "hyperbolic",
            "n": n,
            "N": N,
            "tol": tol,
            "pivot_tol": pivot_tol,
            "partner_seed": partner_seed if generated else None,
            "seed": coeffs.seed,
            "relative": True,
        }
    )

    def add(key, res, mask=None, indices=None):
        report.add(summarize(key, res, tol, mask, indices))

    z_cosh = core.propagate(seq, np.eye(n), np.zeros((n, n)))
    z_sinh = f1.as_trajectory()
    for rec in core.core_report(seq, z_cosh, z_sinh, tol, relative=True):
        report.add(rec)

    z_gen = core.propagate(seq, np.eye(n), np.eye(n))
    g = hyp_general_solution(coeffs, np.eye(n), np.eye(n), f1)
    add("general_solution", _pair_close((g.x, g.u), (z_gen.x, z_gen.u)))
    add("lem4_4", core.restep_residuals(seq, swap_solution(z_sinh), relative=True), indices=steps)

    add("eq55", R.worst(
        R.residual(ct @ c - st @ s, eye, (ct @ c, st @ s, eye)),
        R.residual(c @ ct - s @ st, eye, (c @ ct, s @ st, eye)),
    ))
    add("eq56", R.worst(_close(ct @ s, st @ c), _close(c @ st, s @ ct)))
    lhs_p = c[1:] @ ct[:-1] - s[1:] @ st[:-1]
    add("step_p", R.residual(lhs_p, p, (c[1:] @ ct[:-1], s[1:] @ st[:-1], p)), indices=steps)
    lhs_q = s[1:] @ ct[:-1] - c[1:] @ st[:-1]
    add("step_q", R.residual(lhs_q, q, (s[1:] @ ct[:-1], c[1:] @ st[:-1], q)), indices=steps)
    fro_c = np.sum(c * c, axis=(1, 2))
    fro_s = np.sum(s * s, axis=(1, 2))
    add("frobenius", np.abs(fro_c - fro_s - n) / np.maximum(1.0, fro_c))

    inv_c, ok_c = invert_batch(c, DEFAULT_PIVOT_TOL)
    if not np.all(ok_c):
        bad = np.flatnonzero(~ok_c).tolist()
        raise InternalInconsistencyError(f"Cosh failed the pivot test at k={bad}")
    s_scale = frobenius_norms(c)
    inv_s, ok_s = invert_batch(s, pivot_tol, scale=s_scale)
    with np.errstate(invalid="ignore", over="ignore"):
        form_c = ct - st @ R.tr(inv_c) @ st
        add("rem4_9_cosh_inv", _close(form_c, inv_c))
        form_s = ct @ R.tr(inv_s) @ ct - st
        add("rem4_9_sinh_inv", _close(form_s, inv_s), ok_s)

    xs_all, us_all = core.principal_solutions_all(seq)  # [l, k]
    sinh_kl = s[None, :] @ R.tr(c)[:, None] - c[None, :] @ R.tr(s)[:, None]
    cosh_kl = c[None, :] @ R.tr(c)[:, None] - s[None, :] @ R.tr(s)[:, None]
    add("eq57", np.max(_close(sinh_kl, xs_all), axis=0))
    add("eq58", np.max(_close(cosh_kl, us_all), axis=0))
    a, b = xs_all @ c[:, None], us_all @ s[:, None]
    add("eq59", np.max(_close(np.broadcast_to(s[None, :], a.shape), a + b, a, b), axis=0))
    a, b = us_all @ c[:, None], xs_all @ s[:, None]
    add("eq60", np.max(_close(np.broadcast_to(c[None, :], a.shape), a + b, a, b), axis=0))
    swapped_x = R.tr(np.swapaxes(xs_all, 0, 1))
    swapped_u = R.tr(np.swapaxes(us_all, 0, 1))
    add("eq61", np.max(R.worst(_close(xs_all, -swapped_x), _close(us_all, swapped_u)), axis=0))

    pair = hyp_combine_pair(f1, f2)
    sp, cp, sm, cm = pair.plus_sinh, pair.plus_cosh, pair.minus_sinh, pair.minus_cosh
    for key, sign, ss, cc in (("thm4_13_plus", "+", sp, cp), ("thm4_13_minus", "-", sm, cm)):
        z = hyp_combination_system_step(coeffs, partner, sign)
        add(key, _pair_close((z.x, z.u), (ss, cc)))
    for key, ss, cc in (("eq67", sp, cp), ("eq68", sm, cm)):
        a1, b1 = cc @ R.tr(cc), ss @ R.tr(ss)
        a2, b2 = R.tr(cc) @ cc, R.tr(ss) @ ss
        add(key, R.worst(R.residual(a1 - b1, eye, (a1, b1, eye)), R.residual(a2 - b2, eye, (a2, b2, eye))))
    for key, ss, cc in (("eq69", sp, cp), ("eq70", sm, cm)):
        add(key, R.worst(_close(ss @ R.tr(cc), cc @ R.tr(ss)), _close(R.tr(ss) @ cc, R.tr(cc) @ ss)))

    dbl = hyp_double_angle(f1)
    z_dbl = hyp_combination_system_step(coeffs, coeffs, "+")
    add("cor4_15_solution", _pair_close((z_dbl.x, z_dbl.u), (dbl.x, dbl.u)))
    add("cor4_15_commute", _close(dbl.x @ dbl.u, dbl.u @ dbl.x))

    s1, c1, s2, c2 = s, c, f2.sinh, f2.cosh
    add("eq71", _close(s1 @ R.tr(s2), 0.5 * (cp - cm), 0.5 * cp, 0.5 * cm))
    add("eq72", _close(c1 @ R.tr(c2), 0.5 * (cp + cm), 0.5 * cp, 0.5 * cm))
    add("eq73", _close(s1 @ R.tr(c2), 0.5 * (sp + sm), 0.5 * sp, 0.5 * sm))

    _tanh_identities(report, tol, pivot_tol, coeffs, f1, f2, pair, inv_c, inv_s, ok_s)
    return report


def _tanh_identities(report, tol, pivot_tol, coeffs, f1, f2, pair, inv_c1, inv_s1, ok_s1):
    def add(key, res, mask=None, indices=None):
        report.add(summarize(key, res, tol, mask, indices))

    s1, c1, s2, c2 = f1.sinh, f1.cosh, f2.sinh, f2.cosh
    q = coeffs.q
    eye = R.eye_like(s1)
    steps = np.arange(coeffs.horizon + 1)
    inv_c2, ok_c2 = invert_batch(c2, DEFAULT_PIVOT_TOL)
    if not np.all(ok_c2):
        raise InternalInconsistencyError("partner Cosh failed the pivot test")
    inv_s2, ok_s2 = invert_batch(s2, pivot_tol, scale=frobenius_norms(c2))
    cp_norm = frobenius_norms(pair.plus_cosh)
    cm_norm = frobenius_norms(pair.minus_cosh)
    inv_cp, ok_cp = invert_batch(pair.plus_cosh, pivot_tol)
    inv_cm, ok_cm = invert_batch(pair.minus_cosh, pivot_tol)
    inv_sp, ok_sp = invert_batch(pair.plus_sinh, pivot_tol, scale=cp_norm)
    inv_sm, ok_sm = invert_batch(pair.minus_sinh, pivot_tol, scale=cm_norm)

    with np.errstate(invalid="ignore", over="ignore", divide="ignore"):
        t1, k1 = inv_c1 @ s1, inv_s1 @ c1
        t2, k2 = inv_c2 @ s2, inv_s2 @ c2

        add("eq74", R.residual(t1, R.tr(t1), (t1,)))
        cc = inv_c1 @ R.tr(inv_c1)
        tt = t1 @ t1
        add("eq75", R.residual(cc + tt, eye, (cc, tt, eye)))
        rhs = inv_c1[1:] @ q @ R.tr(inv_c1[:-1])
        add("eq76", R.residual(t1[1:] - t1[:-1], rhs, (t1[1:], t1[:-1], rhs)), indices=steps)

        add("eq77", R.residual(k1, R.tr(k1), (k1,)), ok_s1)
        ss = inv_s1 @ R.tr(inv_s1)
        kk = k1 @ k1
        add("eq78", R.residual(kk - ss, eye, (kk, ss, eye)), ok_s1)
        rhs = -inv_s1[1:] @ q @ R.tr(inv_s1[:-1])
        add("eq79", R.residual(k1[1:] - k1[:-1], rhs, (k1[1:], k1[:-1], rhs)), ok_s1[1:] & ok_s1[:-1], steps)

        sin_both = ok_s1 & ok_s2
        lhs = t1 @ (k1 + k2) @ t2
        add("eq80", R.residual(t1 + t2, lhs, (t1, t2, lhs)), sin_both)
        lhs = t1 @ (k2 - k1) @ t2
        add("eq81", R.residual(t1 - t2, lhs, (t1, t2, lhs)), sin_both)
        rhs = inv_c2 @ R.tr(pair.plus_sinh) @ R.tr(inv_c1)
        add("eq82", R.residual(t1 + t2, rhs, (t1, t2, rhs)))
        rhs = inv_c2 @ R.tr(pair.minus_sinh) @ R.tr(inv_c1)
        add("eq83", R.residual(t1 - t2, rhs, (t1, t2, rhs)))

        t1t2 = t1 @ t2
        m_plus, ok_mp = invert_batch(eye + t1t2, pivot_tol)
        m_minus, ok_mm = invert_batch(eye - t1t2, pivot_tol)
        tanh_p = inv_cp @ pair.plus_sinh
        tanh_m = inv_cm @ pair.minus_sinh
        c2t_inv = R.tr(inv_c2)
        rhs = c2t_inv @ m_plus @ (t1 + t2) @ R.tr(c2)
        add("eq84", R.residual(tanh_p, rhs, (tanh_p, rhs)), ok_cp & ok_mp)
        rhs = c2t_inv @ m_minus @ (t1 - t2) @ R.tr(c2)
        add("eq85", R.residual(tanh_m, rhs, (tanh_m, rhs)), ok_cm & ok_mm)

        lhs = k1 @ (t1 + t2) @ k2
        add("eq86", R.residual(k1 + k2, lhs, (k1, k2, lhs)), sin_both)
        lhs = k1 @ (t2 - t1) @ k2
        add("eq87", R.residual(k1 - k2, lhs, (k1, k2, lhs)), sin_both)
        rhs = inv_s2 @ R.tr(pair.plus_sinh) @ R.tr(inv_s1)
        add("eq88", R.residual(k1 + k2, rhs, (k1, k2, rhs)), sin_both)
        rhs = -inv_s2 @ R.tr(pair.minus_sinh) @ R.tr(inv_s1)
        add("eq89", R.residual(k1 - k2, rhs, (k1, k2, rhs)), sin_both)

        k_sum, ok_ks = invert_batch(k1 + k2, pivot_tol)
        k_dif, ok_kd = invert_batch(k2 - k1, pivot_tol)
        cot_p = inv_sp @ pair.plus_cosh
        cot_m = inv_sm @ pair.minus_cosh
        s2t_inv = R.tr(inv_s2)
        k1k2 = k1 @ k2
        rhs = s2t_inv @ k_sum @ (k1k2 + eye) @ R.tr(s2)
        add("eq90", R.residual(cot_p, rhs, (cot_p, rhs)), ok_sp & sin_both & ok_ks)
        rhs = s2t_inv @ k_dif @ (k1k2 - eye) @ R.tr(s2)
        add("eq91", R.residual(cot_m, rhs, (cot_m, rhs)), ok_sm & sin_both & ok_kd)
