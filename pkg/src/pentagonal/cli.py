"""Command-line front end.

Subcommands: ``bound``, ``arrange``, ``lemma1-check``, ``sharpness``, ``sweep``.

Exit codes: 0 all checks pass, 1 input error, 2 bound violation (or a
failed identity), 3 solver failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import re
import sys
from fractions import Fraction
from typing import Iterable, Sequence

from . import arrangements, bounds, sharpness
from .errors import ConvergenceError, InvalidArgumentError

EXIT_OK, EXIT_INPUT, EXIT_VIOLATION, EXIT_SOLVER = 0, 1, 2, 3

_PI_LITERAL = re.compile(r"^\s*(?:(\d+)\s*\*?\s*)?pi\s*(?:/\s*(\d+))?\s*$", re.IGNORECASE)


def parse_angle(token: str) -> float:
    """Parse ``pi/5``, ``2pi/7``, ``3*pi/10``, ``pi`` or a plain float (radians).

    Multiples of pi are reduced as a fraction first, then converted once.
    """
    m = _PI_LITERAL.match(token)
    if m:
        num = int(m.group(1) or 1)
        den = int(m.group(2) or 1)
        if den == 0:
            raise InvalidArgumentError(f"zero denominator in angle {token!r}")
        frac = Fraction(num, den)
        return math.pi * frac.numerator / frac.denominator
    try:
        return float(token)
    except ValueError:
        raise InvalidArgumentError(f"cannot parse angle {token!r}") from None


def parse_list(text: str, parse=float) -> list[float]:
    try:
        return [parse(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise InvalidArgumentError(f"cannot parse list {text!r}: {exc}") from None


# --- output ----------------------------------------------------------------

def _flat(value):
    if isinstance(value, (list, tuple)):
        return ";".join(repr(v) if isinstance(v, float) else str(v) for v in value)
    if isinstance(value, dict):
        return json.dumps(value, sort_keys=True)
    if value is None:
        return ""
    return value


def _human(value) -> str:
    if isinstance(value, float):
        return f"{value:.15g}"
    if isinstance(value, (list, tuple)):
        return "(" + ", ".join(_human(v) for v in value) + ")"
    if isinstance(value, dict):
        return ", ".join(f"{k}={_human(v)}" for k, v in value.items())
    return str(value)


def write_records(records: Sequence[dict], fmt: str, out) -> None:
    """Write records as json-lines, CSV (header row) or an aligned table."""
    if fmt == "jsonl":
        for rec in records:
            out.write(json.dumps(rec) + "\n")
        return
    columns: list[str] = []
    for rec in records:
        columns.extend(k for k in rec if k not in columns)
    if fmt == "csv":
        writer = csv.DictWriter(out, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for rec in records:
            writer.writerow({k: _flat(rec.get(k)) for k in columns})
        return
    if len(records) == 1:
        width = max(len(k) for k in columns)
        for k in columns:
            out.write(f"{k:<{width}}  {_human(records[0][k])}\n")
        return
    cells = [[_human(rec.get(k, "")) for k in columns] for rec in records]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(columns)]
    out.write("  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip() + "\n")
    for row in cells:
        out.write("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() + "\n")


def _emit(args, records, title: str | None = None) -> None:
    if args.format == "human" and title:
        args.out.write(f"# {title}\n")
    write_records(records, args.format, args.out)


# --- helpers ---------------------------------------------------------------

def _weights(args) -> list[float]:
    if args.weights is None:
        raise InvalidArgumentError("--weights is required")
    w = parse_list(args.weights)
    if args.n is not None and len(w) != args.n:
        raise InvalidArgumentError(f"--n {args.n} but {len(w)} weights were given")
    _check_n(len(w), args.experimental)
    return w


def _check_n(n: int, experimental: bool) -> None:
    if n == 6:
        raise InvalidArgumentError("n=6 is an open case; no bound is available")
    if n in (5, 7):
        return
    if n % 2 == 1 and n >= 9:
        if not experimental:
            raise InvalidArgumentError(f"n={n} is an unproven extrapolation; pass --experimental")
        return
    raise InvalidArgumentError(f"unsupported n={n}; use 5, 7, or odd n >= 9 with --experimental")


def _tol(args, default: float) -> float:
    tol = default if args.tol is None else args.tol
    if not tol > 0:
        raise InvalidArgumentError(f"--tol must be positive, got {tol}")
    return tol


def _is_sorted(w) -> bool:
    return all(x <= y for x, y in zip(w, w[1:]))


# --- commands --------------------------------------------------------------

def cmd_bound(args) -> int:
    w = _weights(args)
    if args.angles is None:
        raise InvalidArgumentError("--angles is required")
    alpha = parse_list(args.angles, parse_angle)
    tol = _tol(args, bounds.DEFAULT_TOL)
    reports = bounds.applicable_checks(w, alpha, tol, experimental=args.experimental)
    rhs_forms = {r.theorem: r.rhs for r in reports}
    records = []
    for r in reports:
        rec = r.as_record()
        rec["input_weights"] = w
        rec["input_angles"] = alpha
        rec["rhs_forms"] = rhs_forms
        rec["seed"] = None
        records.append(rec)
    if args.format == "human":
        keep = ("theorem", "lhs", "rhs", "gap", "tolerance", "holds", "experimental")
        _emit(args, [{k: rec[k] for k in keep} for rec in records], "bound checks")
    else:
        _emit(args, records)
    return EXIT_OK if all(r.holds for r in reports) else EXIT_VIOLATION


def cmd_arrange(args) -> int:
    w = _weights(args)
    if len(w) == 5:
        arrs, k = arrangements.enumerate_arrangements(w), 3
        best, best_value = arrangements.min_phi_arrangement(w)
    elif len(w) == 7:
        arrs, k = arrangements.all_arrangements(w), 4
        best, best_value = arrangements.min_psi_arrangement(w)
    else:
        raise InvalidArgumentError("arrange supports 5 or 7 weights")
    form = "phi" if k == 3 else "psi"
    records = []
    for arr in arrs:
        v = arr.window_sum(k)
        records.append({
            "order": list(arr.order),
            "values": list(arr.values),
            form: v,
            "attains_min": math.isclose(v, best_value, rel_tol=arrangements.TIE_RTOL),
            "selected": arr.order == best.order,
        })
    summary = {
        "minimizer_order": list(best.order),
        "minimizer_values": list(best.values),
        f"{form}_min": best_value,
        "sorted": _is_sorted(w),
    }
    exit_code = EXIT_OK
    if k == 3 and _is_sorted(w):
        s0 = arrangements.sigma0(w)
        phi0 = s0.window_sum(3)
        agrees = math.isclose(phi0, best_value, rel_tol=1e-12, abs_tol=0.0)
        summary.update(sigma0_order=list(s0.order), sigma0_values=list(s0.values),
                       phi_sigma0=phi0, sigma0_agrees=agrees)
        if not agrees:
            exit_code = EXIT_VIOLATION
    if args.format == "human":
        if k == 3 or args.all:
            _emit(args, records, f"{len(records)} arrangements")
        _emit(args, [summary], "minimizer")
    else:
        _emit(args, records + [dict(summary, summary=True)])
    return exit_code


def cmd_lemma1_check(args) -> int:
    w = _weights(args)
    if len(w) != 5:
        raise InvalidArgumentError("lemma1-check needs exactly 5 weights")
    tol = _tol(args, 1e-12)
    rows = arrangements.lemma1_residuals(w)
    records = [{
        "row": r.row,
        "arrangement": list(r.pair[0]),
        "partner": list(r.pair[1]),
        "direct_diff": r.lhs_diff,
        "partner_diff": r.lhs_diff_partner,
        "formula": r.rhs_formula,
        "residual": r.residual,
        "relative_residual": r.relative_residual,
        "ok": r.ok(tol) and r.rhs_formula >= 0,
    } for r in rows]
    _emit(args, records, "phi(arrangement) - phi(sigma0) identities")
    return EXIT_OK if all(rec["ok"] for rec in records) else EXIT_VIOLATION


def cmd_sharpness(args) -> int:
    w = _weights(args)
    tol = _tol(args, bounds.DEFAULT_TOL)
    try:
        report = sharpness.max_cosine_sum(w, tol, seed=args.seed, experimental=args.experimental)
    except ConvergenceError as exc:
        print(f"solver failure: {exc}; {json.dumps(exc.diagnostics)}", file=sys.stderr)
        return EXIT_SOLVER
    _emit(args, [report.as_record()], "maximum of sum a_i cos(alpha_i)")
    if not report.methods_agree:
        print(f"solver failure: lambda route {report.value_lambda!r} vs gradient route "
              f"{report.value_gradient!r}", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK if report.holds else EXIT_VIOLATION


def cmd_sweep(args) -> int:
    if args.n is None:
        raise InvalidArgumentError("--n is required")
    _check_n(args.n, args.experimental)
    tol = _tol(args, bounds.DEFAULT_TOL)
    sink = None
    handle = None
    if args.records:
        handle = open(args.records, "w", encoding="utf-8")

        def sink(recs: Iterable[dict]) -> None:
            for rec in recs:
                handle.write(json.dumps(rec) + "\n")
    try:
        summary = sharpness.monte_carlo_verify(
            args.n, args.samples, args.seed, tol,
            experimental=args.experimental, workers=args.workers, on_records=sink,
        )
    finally:
        if handle is not None:
            handle.close()
    _emit(args, [summary.as_record()], "Monte-Carlo sweep")
    return EXIT_OK if summary.violations == 0 else EXIT_VIOLATION


# --- parser ----------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--n", type=int, default=None, help="number of weights (5, 7, odd >= 9)")
    common.add_argument("--weights", help="comma-separated positive weights")
    common.add_argument("--tol", type=float, default=None,
                        help="tolerance (bounds: absolute, default 1e-9; lemma1-check: relative, default 1e-12)")
    common.add_argument("--format", choices=["human", "jsonl", "csv"], default="human")
    common.add_argument("--experimental", action="store_true",
                        help="allow the unproven odd n >= 9 extrapolation")

    parser = _Parser(prog="pentagonal", description="Weighted cosine-sum bounds on the angle simplex.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bound", parents=[common], help="evaluate every applicable bound")
    p.add_argument("--angles", help="comma-separated angles summing to pi; accepts pi/5-style literals")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("arrange", parents=[common], help="phi (or psi) over all circular arrangements")
    p.add_argument("--all", action="store_true", help="list all 720 arrangements for n=7 in human format")
    p.set_defaults(func=cmd_arrange)

    p = sub.add_parser("lemma1-check", parents=[common], help="check the 12 phi difference identities")
    p.set_defaults(func=cmd_lemma1_check)

    p = sub.add_parser("sharpness", parents=[common], help="maximize the cosine sum over angles")
    p.add_argument("--seed", type=int, default=0, help="seed for gradient-ascent starts")
    p.set_defaults(func=cmd_sharpness)

    p = sub.add_parser(
        "sweep", parents=[common], help="Monte-Carlo search for violations",
        description="Weights are drawn log-uniform on [0.1, 10]; angles uniformly on the "
                    "simplex (pi times Dirichlet(1,...,1)). numpy PCG64 seeded via SeedSequence.",
    )
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--records", help="write one json-lines record per sample to this path")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.out = out if out is not None else sys.stdout
    try:
        return args.func(args)
    except InvalidArgumentError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
