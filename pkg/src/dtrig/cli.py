"""Command-line front end.

Subcommands::

    generate     write a seeded trigonometric or hyperbolic coefficient file
    simulate     write the principal solution at k0 as CSV (k,i,j,X,U)
    verify       run the identity suite and write a JSON residual report
    scalar-demo  compare the n = 1 recurrence with its closed form

Exit codes: 0 pass, 1 identity failure, 2 validation failure, 3 usage or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import math
import sys
from pathlib import Path

import numpy as np

from . import hyperbolic, io, symplectic_core, trig
from .errors import DtrigError, ShapeError, ValidationError
from .generators import gen_hyp, gen_trig
from .report import ResidualReport, summarize

EXIT_PASS = 0
EXIT_IDENTITY = 1
EXIT_VALIDATION = 2
EXIT_USAGE = 3

KIND_ALIASES = {"trig": "trig", "hyperbolic": "hyperbolic", "hyp": "hyperbolic"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad usage; here usage errors map to 3."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _positive_int(value: str) -> int:
    v = int(value)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _non_negative_int(value: str) -> int:
    v = int(value)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {v}")
    return v


def _positive_float(value: str) -> float:
    v = float(value)
    if not v > 0 or not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"must be a positive number, got {value}")
    return v


def _seed(value: str) -> int:
    v = int(value, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _signs(value: str) -> list[float]:
    try:
        out = [float(x) for x in value.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma-separated +1/-1 entries") from None
    if not all(x in (1.0, -1.0) for x in out):
        raise argparse.ArgumentTypeError("entries must be +1 or -1")
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dtrig", description="Discrete matrix trigonometric and hyperbolic systems.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write a seeded coefficient file")
    g.add_argument("--kind", required=True, choices=sorted(KIND_ALIASES))
    g.add_argument("--n", type=_positive_int, required=True)
    g.add_argument("--N", type=_non_negative_int, required=True)
    g.add_argument("--amplitude", type=_positive_float, default=1.0)
    g.add_argument("--seed", type=_seed, default=0)
    g.add_argument("--sign-diag", type=_signs, default=None, help="hyperbolic only: comma-separated +1/-1")
    g.add_argument("--out", type=Path, default=None, help="output path (default: stdout)")

    s = sub.add_parser("simulate", help="write the principal solution as CSV")
    s.add_argument("coeffs", type=Path)
    s.add_argument("--k0", type=_non_negative_int, default=0)
    s.add_argument("--out", type=Path, default=None)

    v = sub.add_parser("verify", help="run the identity suite")
    v.add_argument("coeffs", type=Path)
    v.add_argument("--tol", type=_positive_float, default=None,
                   help="default 1e-10 absolute (trig) or 1e-8 relative (hyperbolic)")
    v.add_argument("--partner-seed", type=_seed, default=None, help="default: the file's seed plus one")
    v.add_argument("--pivot-tol", type=_positive_float, default=None)
    v.add_argument("--skip-validation", action="store_true",
                   help="run the suite even if the coefficients fail validation")
    v.add_argument("--out", type=Path, default=None, help="JSON report path (default: stdout)")

    d = sub.add_parser("scalar-demo", help="n = 1 recurrence against its closed form")
    d.add_argument("--kind", required=True, choices=sorted(KIND_ALIASES))
    d.add_argument("--steps", type=_positive_int, required=True)
    d.add_argument("--angle", "--a", dest="param", type=float, required=True,
                   help="step angle (trig) or step size a (hyperbolic)")
    d.add_argument("--out", type=Path, default=None)
    return parser


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def _load_valid(path: Path, validate: bool = True):
    """Load a file and run its kind's validator; ValidationError if it fails."""
    coeffs = io.load_coefficients(path)
    if not validate:
        return coeffs
    if isinstance(coeffs, trig.TrigCoefficients):
        report = trig.validate_trig(coeffs)
    elif isinstance(coeffs, hyperbolic.HypCoefficients):
        report = hyperbolic.validate_hyp(coeffs)
    else:
        res = symplectic_core.symplectic_residuals(coeffs, relative=True)
        report = ResidualReport([summarize("symplectic", res, trig.VALIDATE_TOL)], {"kind": "symplectic"})
    if not report.passed:
        raise ValidationError(f"{path}: coefficients failed validation", report)
    return coeffs


def cmd_generate(args) -> int:
    kind = KIND_ALIASES[args.kind]
    if kind == "trig":
        if args.sign_diag is not None:
            raise UsageError("--sign-diag applies to hyperbolic systems only")
        coeffs = gen_trig(args.n, args.N, args.amplitude, args.seed)
    else:
        if args.sign_diag is not None and len(args.sign_diag) != args.n:
            raise UsageError("--sign-diag needs exactly n entries")
        coeffs = gen_hyp(args.n, args.N, args.amplitude, args.sign_diag, args.seed)
    _emit(io.dumps_coefficients(coeffs), args.out)
    return EXIT_PASS


def cmd_simulate(args) -> int:
    coeffs = _load_valid(args.coeffs)
    seq = symplectic_core.as_block_sequence(coeffs)
    if args.k0 > seq.horizon + 1:
        raise UsageError(f"--k0 must lie in 0..{seq.horizon + 1}")
    traj = symplectic_core.principal_solution(seq, args.k0)
    _emit(io.trajectory_csv(traj), args.out)
    return EXIT_PASS


def cmd_verify(args) -> int:
    coeffs = _load_valid(args.coeffs, validate=not args.skip_validation)
    if isinstance(coeffs, trig.TrigCoefficients):
        kw = {} if args.pivot_tol is None else {"pivot_tol": args.pivot_tol}
        tol = trig.SUITE_TOL if args.tol is None else args.tol
        report = trig.trig_identity_suite(coeffs, tol, partner_seed=args.partner_seed, validate=False, **kw)
    elif isinstance(coeffs, hyperbolic.HypCoefficients):
        kw = {} if args.pivot_tol is None else {"pivot_tol": args.pivot_tol}
        tol = hyperbolic.SUITE_TOL if args.tol is None else args.tol
        report = hyperbolic.hyp_identity_suite(coeffs, tol, partner_seed=args.partner_seed, validate=False, **kw)
    else:
        tol = hyperbolic.SUITE_TOL if args.tol is None else args.tol
        n = coeffs.n
        z1 = symplectic_core.propagate(coeffs, np.eye(n), np.zeros((n, n)))
        z2 = symplectic_core.principal_solution(coeffs)
        report = symplectic_core.core_report(coeffs, z1, z2, tol, relative=True)
        report.meta.update({"kind": "symplectic", "n": n, "N": coeffs.horizon, "tol": tol, "relative": True})
    report.meta["source"] = str(args.coeffs)
    _emit(report.to_json(), args.out)
    if args.out is not None:
        for line in report.format_lines():
            print(line)
    failures = report.failures()
    if failures:
        print(f"{len(failures)} of {len(report)} identities failed", file=sys.stderr)
        return EXIT_IDENTITY
    return EXIT_PASS


def scalar_demo_rows(kind: str, steps: int, param: float) -> list[tuple[int, float, float, float]]:
    """``(k, recurrence, closed_form, abs_err)`` for ``k = 0..steps``.

    The trigonometric system uses ``p = cos(angle)``, ``q = sin(angle)`` and
    compares ``Sin_k`` with ``sin(k * angle)``.  The hyperbolic one uses
    ``p = (e^a + e^-a)/2``, ``q = (e^a - e^-a)/2`` and compares ``Sinh_k``
    with ``sinh(k * a)``; for ``a = ln 2`` both coefficients are exact dyadics.
    """
    kind = KIND_ALIASES[kind]
    N = steps - 1
    if kind == "trig":
        p = np.full((N + 1, 1, 1), math.cos(param))
        q = np.full((N + 1, 1, 1), math.sin(param))
        values = trig.trig_functions(trig.TrigCoefficients(p, q), validate=False).sin[:, 0, 0]
        exact = [math.sin(k * param) for k in range(steps + 1)]
    else:
        e = math.exp(param)
        p = np.full((N + 1, 1, 1), (e + 1.0 / e) / 2.0)
        q = np.full((N + 1, 1, 1), (e - 1.0 / e) / 2.0)
        values = hyperbolic.hyp_functions(hyperbolic.HypCoefficients(p, q), validate=False).sinh[:, 0, 0]
        exact = [math.sinh(k * param) for k in range(steps + 1)]
    return [(k, float(values[k]), exact[k], abs(float(values[k]) - exact[k])) for k in range(steps + 1)]


def cmd_scalar_demo(args) -> int:
    if not math.isfinite(args.param):
        raise UsageError("--angle/--a must be finite")
    rows = scalar_demo_rows(args.kind, args.steps, args.param)
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "recurrence", "closed_form", "abs_err"])
    for k, rec, exact, err in rows:
        w.writerow([k, format(rec, ".17g"), format(exact, ".17g"), format(err, ".17g")])
    _emit(buf.getvalue(), args.out)
    print(f"max abs_err = {max(r[3] for r in rows):.3e}", file=sys.stdout if args.out else sys.stderr)
    return EXIT_PASS


COMMANDS = {
    "generate": cmd_generate,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
    "scalar-demo": cmd_scalar_demo,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as exc:
        print(f"validation failed: {exc}", file=sys.stderr)
        if exc.report is not None:
            for line in exc.report.format_lines():
                print(line, file=sys.stderr)
        return EXIT_VALIDATION
    except (OSError, ShapeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DtrigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
