"""Command-line interface.

    fdhydrogen eigenvalue -n 2 --delta 1
    fdhydrogen coeffs -n 3 --delta 1/2
    fdhydrogen verify -n 3 --delta 1 [--grid 40] [--order 25]
    fdhydrogen spectrum --size 400 --delta 1 --states 3 --tol 1e-12
    fdhydrogen isospectral --size 400 --delta 1 (--power 2 | --targets 1,0.5,0.3333)
    fdhydrogen laguerre -n 4 [--delta 1/10]
    fdhydrogen limit -n 2 --deltas 1/10,1/20,1/40

Exit status: 0 when every embedded check passes, 1 when a check fails,
2 on usage or domain errors.  Floats are written with 17 significant digits.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from . import closed_form, isospectral, laguerre, spectra, verify
from .errors import ConditioningError, DomainError
from .exactfield import QuadNumber, quad_to_float

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2

DEFAULT_Z_SAMPLES = (0.5, 1.0, 2.0, 5.0)
DEFAULT_LIMIT_DELTAS = ("1/10", "1/20", "1/40")


# -- output -----------------------------------------------------------------


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def _scalar(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x) or math.isinf(x):
            return "null"
        return format_float(x)
    if isinstance(obj, (Fraction, QuadNumber)):
        obj = str(obj)
    text = str(obj).replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
    return f'"{text}"'


def dumps(obj, indent: int = 0) -> str:
    """JSON with fixed 17-significant-digit floats; key order is preserved."""
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{_scalar(str(k))}: {dumps(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [f"{inner}{dumps(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return _scalar(obj)


def _rows_to_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_float(v) if isinstance(v, (float, np.floating)) else ("" if v is None else v) for v in row])
    return buf.getvalue()


def _rows_to_text(header: list[str], rows: list[list]) -> str:
    cells = [header] + [
        [format_float(v) if isinstance(v, (float, np.floating)) else ("-" if v is None else str(v)) for v in row]
        for row in rows
    ]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    return "\n".join(lines) + "\n"


@dataclass
class Result:
    payload: dict
    header: list
    rows: list
    passed: bool = True


def _number(q: QuadNumber, bits: int):
    return _float_out(quad_to_float(q, bits), bits)


def _float_out(x, bits: int):
    return x if bits == 53 else mpmath.nstr(x, int(bits * math.log10(2)) + 1)


def _exact_entry(q: QuadNumber, bits: int) -> dict:
    return {"exact": str(q), "float": _number(q, bits)}


def _parse_list(text: str) -> list[str]:
    items = [t.strip() for t in text.split(",") if t.strip()]
    if not items:
        raise DomainError(f"empty list {text!r}")
    return items


def _parse_floats(text: str) -> list[float]:
    out = []
    for t in _parse_list(text):
        try:
            out.append(float(Fraction(t)))
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"malformed number {t!r}") from exc
    return out


# -- subcommands ------------------------------------------------------------


def cmd_eigenvalue(args) -> Result:
    lam = closed_form.eigenvalue(args.n, args.delta)
    sol = closed_form.solve(args.n, args.delta)
    payload = {"n": args.n, "delta": str(sol.delta), **_exact_entry(lam, args.precision_bits)}
    if sol.warnings:
        payload["warnings"] = list(sol.warnings)
    return Result(payload, ["n", "delta", "exact", "float"], [[args.n, str(sol.delta), str(lam), payload["float"]]])


def cmd_coeffs(args) -> Result:
    sol = closed_form.solve(args.n, args.delta)
    alphas = closed_form.alpha_factors(sol)
    bits = args.precision_bits
    entries, rows = [], []
    for k, (c, a) in enumerate(zip(sol.coeffs, alphas), start=1):
        entries.append({"k": k, "coefficient": _exact_entry(c, bits), "alpha": _exact_entry(a, bits)})
        rows.append([k, str(c), _number(c, bits), str(a), _number(a, bits)])
    payload = {
        "n": sol.n,
        "delta": str(sol.delta),
        "eigenvalue": _exact_entry(sol.lam, bits),
        "decay_factor": _exact_entry(sol.r, bits),
        "decay_rate": _float_out(closed_form.decay_rate(sol.n, sol.delta, bits), bits),
        "coefficients": entries,
    }
    if sol.warnings:
        payload["warnings"] = list(sol.warnings)
    return Result(payload, ["k", "exact", "float", "alpha_exact", "alpha_float"], rows)


def cmd_verify(args) -> Result:
    sol = closed_form.solve(args.n, args.delta)
    z = _parse_floats(args.z_samples) if args.z_samples else list(DEFAULT_Z_SAMPLES)
    deltas = _parse_list(args.limit_deltas) if args.limit_deltas else list(DEFAULT_LIMIT_DELTAS)
    reports = [
        verify.exact_residual_identity(sol),
        verify.matrix_residual_exact(sol, args.grid),
        verify.infinite_order_residual(sol, args.order, z),
        verify.continuum_limit_order(sol.n, deltas, z),
    ]
    payload = {r.kind: r.to_json() for r in reports}
    rows = [[r.kind, r.n, str(sol.delta) if r.delta is None else str(r.delta), r.passed] for r in reports]
    return Result(payload, ["kind", "n", "delta", "passed"], rows, all(r.passed for r in reports))


def cmd_spectrum(args) -> Result:
    rep = spectra.spectrum_report(args.size, args.delta, args.states, args.tol, eigenvectors=True, atol=args.atol)
    payload = rep.to_json()
    rows = [[s["k"], s["computed"], s["exact_float"], s["abs_error"]] for s in payload["states"]]
    return Result(payload, ["k", "computed", "exact", "abs_error"], rows, rep.passed)


def cmd_isospectral(args) -> Result:
    if args.targets:
        targets = _parse_floats(args.targets)
        B = isospectral.prescribe_spectrum(targets, args.size, args.delta)
        atol = args.atol if args.atol is not None else 1e-6
    else:
        k = args.power
        B = isospectral.matrix_power(isospectral.build_W(args.size, args.delta), k)
        targets = [1.0 / n ** (2 * k) for n in range(1, args.states + 1)]
        atol = args.atol if args.atol is not None else 1e-8
    report = isospectral.spectral_report(B, targets, atol=atol)
    rows = [[r["target"], r["index"], r["computed"], r["abs_error"]] for r in report["matched"]]
    return Result(report, ["target", "index", "computed", "abs_error"], rows, report["passed"])


def cmd_laguerre(args) -> Result:
    if args.delta is None:
        if args.n < 1:
            raise DomainError("n must be >= 1")
        tables = {
            "laguerre": laguerre.laguerre_coeffs(args.n),
            "derivative_laguerre": laguerre.assoc_laguerre1_coeffs(args.n - 1),
            "continuum_reference": laguerre.continuum_reference_poly(args.n),
        }
        payload = {"n": args.n}
        rows = []
        for name, poly in tables.items():
            payload[name] = [{"k": k, "exact": str(c), "float": float(c)} for k, c in enumerate(poly)]
            rows += [[name, k, str(c), float(c)] for k, c in enumerate(poly)]
        return Result(payload, ["polynomial", "k", "exact", "float"], rows)
    q = laguerre.discretised_assoc_laguerre(args.n, args.delta)
    bits = args.precision_bits
    payload = {
        "n": args.n,
        "delta": str(closed_form.as_rational(args.delta)),
        "discretised": [{"k": k, **_exact_entry(c, bits)} for k, c in enumerate(q)],
    }
    rows = [["discretised", k, str(c), _number(c, bits)] for k, c in enumerate(q)]
    return Result(payload, ["polynomial", "k", "exact", "float"], rows)


def cmd_limit(args) -> Result:
    z = _parse_floats(args.z_samples) if args.z_samples else []
    rep = verify.continuum_limit_order(args.n, _parse_list(args.deltas), z)
    data = rep.data
    rows = [[d, e, a] for d, e, a in zip(data["deltas"], data["energy_error"], data["alpha_error"])]
    return Result(rep.to_json(), ["delta", "energy_error", "alpha_error"], rows, rep.passed)


# -- parser -----------------------------------------------------------------


def _positive_float(text: str) -> float:
    try:
        x = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc
    if not x > 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return x


def _rational(text: str) -> str:
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"malformed rational {text!r}; use p/q") from exc
    if value <= 0:
        raise argparse.ArgumentTypeError("delta must be a positive rational")
    return text.strip()


def _precision(text: str) -> int:
    bits = int(text)
    if bits < 53:
        raise argparse.ArgumentTypeError("precision must be >= 53 bits")
    return bits


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--precision-bits", type=_precision, default=53)
    common.add_argument("-o", "--output", default=None, help="write to this file instead of stdout")

    parser = argparse.ArgumentParser(prog="fdhydrogen", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eigenvalue", parents=[common], help="exact eigenvalue -sqrt(1 + delta^2/n^2)")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--delta", type=_rational, required=True)
    p.set_defaults(func=cmd_eigenvalue)

    p = sub.add_parser("coeffs", parents=[common], help="exact polynomial coefficients and alpha factors")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--delta", type=_rational, required=True)
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("verify", parents=[common], help="exact, infinite-order and limit checks")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--delta", type=_rational, required=True)
    p.add_argument("--grid", type=int, default=40, help="grid points for the exact matrix check")
    p.add_argument("--order", type=int, default=25, help="truncation order of the cosh series")
    p.add_argument("--z-samples", default=None, help="comma-separated sample points")
    p.add_argument("--limit-deltas", default=None, help="comma-separated decreasing rationals")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("spectrum", parents=[common], help="bound states of the truncated matrix V")
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--delta", type=_rational, required=True)
    p.add_argument("--states", type=int, default=3)
    p.add_argument("--tol", type=_positive_float, default=1e-12)
    p.add_argument("--atol", type=_positive_float, default=1e-8, help="pass threshold for errors")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("isospectral", parents=[common], help="W^k or f(W) spectra")
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--delta", type=_rational, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--power", type=int)
    group.add_argument("--targets", default=None)
    p.add_argument("--states", type=int, default=3, help="bound states matched for --power")
    p.add_argument("--atol", type=_positive_float, default=None)
    p.set_defaults(func=cmd_isospectral)

    p = sub.add_parser("laguerre", parents=[common], help="continuum or discretised Laguerre coefficients")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--delta", type=_rational, default=None)
    p.set_defaults(func=cmd_laguerre)

    p = sub.add_parser("limit", parents=[common], help="Richardson ratios of the continuum limit")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--deltas", required=True)
    p.add_argument("--z-samples", default=None)
    p.set_defaults(func=cmd_limit)
    for name, subparser in sub.choices.items():
        subparser.set_defaults(parser=subparser)
    return parser


def render(result: Result, fmt: str) -> str:
    if fmt == "json":
        return dumps(result.payload) + "\n"
    if fmt == "csv":
        return _rows_to_csv(result.header, result.rows)
    return _rows_to_text(result.header, result.rows)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        result = args.func(args)
    except (DomainError, ConditioningError, ValueError, TypeError) as exc:
        args.parser.print_usage(sys.stderr)
        print(f"{args.parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render(result, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if result.passed else EXIT_FAILED


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
