"""Command-line entry point: ``linkorders verify`` and ``linkorders tables``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from .characters import AdditiveCharacter, MultiplicativeCharacter, gauss_sum, is_regular_index, regular_indices
from .errors import NotRegularError, SizeCapError, TrivialCharacterError, WindowError
from .fields import field_create
from .representations import cuspidal_character, gl2_ring, inner_product
from .results import Report
from .verification import CASES, RAMIFIED_GRID, default_grid, run_suite, tolerance_override

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
USAGE_ERRORS = (SizeCapError, NotRegularError, TrivialCharacterError, WindowError, ValueError)


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="linkorders", description=__doc__)
    sub = parser.add_subparsers(dest="command")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, help="residue characteristic (default: the case's grid)")
    common.add_argument("--f", type=int, default=1, help="degree of k over F_p")
    common.add_argument("--nu-shift", type=int, default=None, help="index in k of the base additive character")
    common.add_argument("--output", "-o", help="write to this file instead of stdout")

    verify = sub.add_parser("verify", parents=[common], help="run a check suite")
    verify.add_argument("--case", choices=CASES + ("all",), required=True)
    verify.add_argument("--n", type=int, help="level of the stratum (lattice case)")
    verify.add_argument("--e", type=int, choices=(1, 2), help="ramification index (lattice case)")
    verify.add_argument("--theta", type=int, help="index of a regular character of k2^x (level0)")
    verify.add_argument("--b", type=int, help="psi parameter, an index in k2 outside k (unramified)")
    verify.add_argument("--psi-shift", type=int, help="index in k^x of Psi (ramified)")
    verify.add_argument("--samples", type=int, default=20, help="random translates per function")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--tolerance", type=float, help="override every check's tolerance")
    verify.add_argument("--format", choices=("json", "csv", "human"), default="json")
    verify.add_argument("--extended", action="store_true", help="allow q = 4, 5 for the q^6 rings")
    verify.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    verify.add_argument("--timings", action="store_true", help="record elapsed_ms (reports stop being byte-stable)")
    verify.add_argument("--inject-sign-flip", action="store_true", help="negative control: corrupt rho at 1")

    tables = sub.add_parser("tables", parents=[common], help="print Gauss sums or cuspidal characters")
    tables.add_argument("table", choices=("gauss", "character"))
    tables.add_argument("--format", choices=("csv", "human"), default="csv")
    return parser


# --- verify --------------------------------------------------------------------------

def _grid(args) -> list[dict]:
    if args.p is None:
        if args.case == "all":
            raise UsageError("--case all needs --p")
        return default_grid(args.case, args.extended)
    pt = {"p": args.p, "f": args.f}
    for key in ("n", "e", "theta", "b", "psi_shift", "nu_shift"):
        value = getattr(args, key)
        if value is not None:
            pt[key] = value
    return [pt]


def _config(args) -> dict:
    keys = ("case", "p", "f", "n", "e", "theta", "b", "psi_shift", "nu_shift", "samples", "seed",
            "tolerance", "extended", "inject_sign_flip", "format")
    return {k: getattr(args, k) for k in keys}


def _format_report(report: Report, fmt: str, timings: bool) -> str:
    if fmt == "json":
        return json.dumps(report.to_dict(timings), indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "status", "max_abs_error", "tolerance", "params"])
        for c in report.checks:
            w.writerow([c.name, c.status, repr(c.max_abs_error), repr(c.tolerance), json.dumps(c.params)])
        return buf.getvalue()
    lines = [f"suite {report.suite}  seed {report.seed}"]
    for c in report.checks:
        params = " ".join(f"{k}={v}" for k, v in c.params.items())
        lines.append(f"  {c.status.upper():4}  {c.name:32} {params}  err={c.max_abs_error:.3g} tol={c.tolerance:.3g}")
        for k, v in c.details.items():
            lines.append(f"          {k}: {v}")
        if not c.passed and c.witness is not None:
            lines.append(f"          witness: {c.witness}")
    passed = sum(c.passed for c in report.checks)
    lines.append(f"{passed}/{len(report.checks)} checks passed")
    return "\n".join(lines) + "\n"


def cmd_verify(args) -> int:
    grid = _grid(args)
    tolerance = args.tolerance if args.tolerance is not None else tolerance_override()
    report = run_suite(args.case, grid, samples=args.samples, seed=args.seed, tolerance=tolerance,
                       extended=args.extended, inject_sign_flip=args.inject_sign_flip,
                       workers=max(1, args.workers), config=dict(_config(args), grid=grid))
    _emit(_format_report(report, args.format, args.timings), args.output)
    return EXIT_OK if report.passed else EXIT_FAIL


# --- tables ----------------------------------------------------------------------------

def _table_points(args) -> list[tuple[int, int]]:
    if args.p is None:
        return RAMIFIED_GRID if args.table == "gauss" else [(2, 1), (3, 1)]
    return [(args.p, args.f)]


def gauss_rows(p: int, f: int, nu_shift: int = 1) -> list[dict]:
    """One row per character index of k2^x: tau, |tau| and tau(theta) tau(theta^-1, nu^-1)."""
    K = field_create(p, f, 2)
    if not 0 < nu_shift < K.q:
        raise TrivialCharacterError(f"nu shift {nu_shift} must be a nonzero element index of k")
    nu = AdditiveCharacter(K.subfield, nu_shift)
    rows = []
    for j in range(K.order - 1):
        th = MultiplicativeCharacter(K, j)
        tau = gauss_sum(th, nu)
        prod = tau * gauss_sum(th.inverse(), nu.inverse())
        rows.append({
            "q": K.q, "theta_index": j, "nu_shift": nu_shift,
            "re": _r(tau.real), "im": _r(tau.imag), "abs": _r(abs(tau)),
            "regular": is_regular_index(K.q, j), "product": _r(prod.real), "product_im": _r(prod.imag),
        })
    return rows


def character_rows(p: int, f: int) -> list[dict]:
    """Cuspidal characters of GL_2(k) on conjugacy classes, one row per (theta, class)."""
    K = field_create(p, f, 2)
    classes = gl2_ring(p, f).unit_group.conjugacy_classes
    rows = []
    for j in regular_indices(K):
        chi = cuspidal_character(MultiplicativeCharacter(K, j))
        norm = inner_product(chi, chi)
        for c, value in enumerate(chi.class_values):
            rows.append({
                "q": K.q, "theta_index": j, "degree": _r(chi.degree.real), "norm": _r(norm.real),
                "class": c, "class_rep": int(chi.group.codes[classes.reps[c]]),
                "class_size": int(classes.sizes[c]), "re": _r(value.real), "im": _r(value.imag),
            })
    return rows


def _r(x: float) -> float:
    # round away float noise so tables are stable across platforms
    return float(np.round(x, 10)) + 0.0


def _format_rows(rows: list[dict], fmt: str) -> str:
    if not rows:
        return ""
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()
    cols = list(rows[0])
    cells = [[str(r[c]) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    out = ["  ".join(c.rjust(w) for c, w in zip(cols, widths))]
    out += ["  ".join(v.rjust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(out) + "\n"


def cmd_tables(args) -> int:
    rows = []
    for p, f in _table_points(args):
        if args.table == "gauss":
            rows += gauss_rows(p, f, args.nu_shift or 1)
        else:
            rows += character_rows(p, f)
    _emit(_format_rows(rows, args.format), args.output)
    return EXIT_OK


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "verify":
            return cmd_verify(args)
        return cmd_tables(args)
    except UsageError as exc:
        print(f"linkorders: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except USAGE_ERRORS as exc:
        print(f"linkorders: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
