"""Command-line surface: matrices, spectra, fidelities, coefficients,
verification and sweeps, emitted as deterministic JSON or CSV.

Exit codes: 0 success, 1 validation error (usage on stderr), 2 computation
failure (non-convergence, cap exceeded, failed verification).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from . import __version__
from .characters import cycle_types
from .oracle import (
    DEFAULT_CAP,
    DEFAULT_CHECK_CELLS,
    CapExceededError,
    run_checks,
)
from .protocol import (
    lower_bound_fidelity,
    optimal_fidelity,
    optimal_solution,
    sqrt_measurement_fidelity,
    sweep,
)
from .spectral import (
    PowerIterationError,
    closed_form_d2,
    closed_form_full,
    power_iteration,
    spectrum_via_characters,
)
from .telemat import (
    gram_G,
    gram_H,
    incidence_matrix,
    teleportation_matrix,
    to_csv,
    to_json_dict,
)

SWEEP_COLUMNS = (
    "N",
    "d",
    "f_lower",
    "f_sqrt_ent",
    "f_opt",
    "method",
    "radius",
    "iterations",
    "error",
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # route argparse failures to exit code 1
        raise UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(prog="dpbt", description=__doc__, add_help=True)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p: _Parser, dim_required: bool = True) -> None:
        p.add_argument("--ports", "-N", type=int, required=True, help="port count N >= 1")
        p.add_argument("--dim", "-d", type=int, required=dim_required, help="local dimension d >= 2")
        p.add_argument(
            "--format",
            choices=("json", "csv"),
            default=None,
            help="default: json, or inferred from the output extension",
        )
        p.add_argument("-o", "--output", default=None, help="output path (default stdout)")
        p.add_argument("--tol", type=float, default=1e-12)
        p.add_argument("--max-iter", type=int, default=1_000_000)

    p_matrix = sub.add_parser("matrix", help="emit MF/R/G/H matrices")
    common(p_matrix)
    p_matrix.add_argument("--kind", choices=("MF", "R", "G", "H"), default="MF")

    p_spectrum = sub.add_parser("spectrum", help="spectral radius and Perron vector")
    common(p_spectrum)

    p_fid = sub.add_parser("fidelity", help="optimal / entangled / lower-bound fidelities")
    common(p_fid)

    p_povm = sub.add_parser("povm", help="optimal measurement and state coefficients")
    common(p_povm)

    p_verify = sub.add_parser("verify", help="dense-oracle verification report")
    p_verify.add_argument("--oracle", action="store_true", help="run the dense operator checks")
    p_verify.add_argument("--ports", "-N", type=int, default=None)
    p_verify.add_argument("--dim", "-d", type=int, default=None)
    p_verify.add_argument("--tol", type=float, default=1e-8)
    p_verify.add_argument("--format", choices=("json",), default="json")
    p_verify.add_argument("-o", "--output", default=None)

    p_sweep = sub.add_parser("sweep", help="fidelity table over an (N, d) grid")
    p_sweep.add_argument("--ports", required=True, help="inclusive range a:b")
    p_sweep.add_argument("--dims", required=True, help="comma-separated dimensions")
    p_sweep.add_argument(
        "--format",
        choices=("json", "csv"),
        default=None,
        help="default: json, or inferred from the output extension",
    )
    p_sweep.add_argument("-o", "--output", default=None)
    p_sweep.add_argument("--tol", type=float, default=1e-12)
    p_sweep.add_argument("--max-iter", type=int, default=1_000_000)
    p_sweep.add_argument("--jobs", type=int, default=None, help="worker pool size")

    return parser


def _resolve_format(args) -> str:
    if args.format is not None:
        return args.format
    if args.output is not None and args.output.lower().endswith(".csv"):
        return "csv"
    return "json"


def _validate_nd(n: int, d: int) -> None:
    if n < 1:
        raise UsageError(f"--ports must be >= 1, got {n}")
    if d < 2:
        raise UsageError(f"--dim must be >= 2, got {d}")


def _parse_range(text: str) -> list[int]:
    if ":" in text:
        lo, hi = text.split(":", 1)
        try:
            a, b = int(lo), int(hi)
        except ValueError:
            raise UsageError(f"bad range {text!r}; expected a:b") from None
        if a > b:
            raise UsageError(f"empty range {text!r}")
        return list(range(a, b + 1))
    try:
        return [int(text)]
    except ValueError:
        raise UsageError(f"bad ports value {text!r}") from None


def _parse_dims(text: str) -> list[int]:
    try:
        dims = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"bad dims list {text!r}") from None
    if not dims:
        raise UsageError("dims list is empty")
    return dims


def _emit(text: str, path: str | None, out) -> None:
    if path is None:
        out.write(text)
        if not text.endswith("\n"):
            out.write("\n")
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")


def _json(payload: dict) -> str:
    return json.dumps(payload, indent=2)


def _cmd_matrix(args, out) -> int:
    _validate_nd(args.ports, args.dim)
    builders = {
        "MF": teleportation_matrix,
        "R": incidence_matrix,
        "G": gram_G,
        "H": gram_H,
    }
    m = builders[args.kind](args.ports, args.dim)
    if _resolve_format(args) == "csv":
        _emit(to_csv(m), args.output, out)
    else:
        payload = {"version": __version__, **to_json_dict(m)}
        _emit(_json(payload), args.output, out)
    return 0


def _cmd_spectrum(args, out) -> int:
    _validate_nd(args.ports, args.dim)
    n, d = args.ports, args.dim
    if d >= n:
        res = closed_form_full(n)
    else:
        res = power_iteration(teleportation_matrix(n, d), args.tol, args.max_iter)
    payload = {
        "version": __version__,
        "N": n,
        "d": d,
        "radius": res.radius,
        "method": res.method,
        "iterations": res.iterations,
        "residual": res.residual,
        "perron": {mu.label(): res.perron_entry(mu) for mu in res.basis},
    }
    if d == 2:
        payload["eigenvalues"] = closed_form_d2(n)
    if d >= n:
        payload["spectrum_multiplicities"] = {
            str(k): v for k, v in sorted(spectrum_via_characters(n).items(), reverse=True)
        }
        payload["eigenvector_classes"] = [
            {"class": c.label(), "eigenvalue": c.fixed_points} for c in cycle_types(n)
        ]
    _emit(_json(payload), args.output, out)
    return 0


def _cmd_fidelity(args, out) -> int:
    _validate_nd(args.ports, args.dim)
    n, d = args.ports, args.dim
    opt = optimal_fidelity(n, d, tol=args.tol, max_iter=args.max_iter)
    payload = {
        "version": __version__,
        "N": n,
        "d": d,
        "f_opt": opt.fidelity,
        "method": opt.method,
        "radius": opt.radius,
        "iterations": opt.iterations,
        "f_sqrt_ent": sqrt_measurement_fidelity(n, d).fidelity,
        "f_lower": lower_bound_fidelity(n, d).fidelity,
    }
    _emit(_json(payload), args.output, out)
    return 0


def _cmd_povm(args, out) -> int:
    _validate_nd(args.ports, args.dim)
    sol = optimal_solution(args.ports, args.dim, tol=args.tol, max_iter=args.max_iter)
    payload = {
        "version": __version__,
        "N": sol.n,
        "d": sol.d,
        "v": {mu.label(): sol.v[mu] for mu in sol.basis},
        "o_coeffs": {mu.label(): sol.o_coeffs[mu] for mu in sol.basis},
        "c_coeffs": {mu.label(): sol.c_coeffs[mu] for mu in sol.basis},
        "p_coeffs": [
            {"alpha": alpha.label(), "mu": mu.label(), "p": p}
            for (alpha, mu), p in sorted(
                sol.p_coeffs.items(), key=lambda kv: (kv[0][0].rows, kv[0][1].rows)
            )
        ],
    }
    _emit(_json(payload), args.output, out)
    return 0


def _cmd_verify(args, out) -> int:
    if not args.oracle:
        raise UsageError("verify currently requires --oracle")
    cap = DEFAULT_CAP
    env_cap = os.environ.get("PBT_ORACLE_CAP")
    if env_cap is not None:
        try:
            cap = int(env_cap)
        except ValueError:
            raise UsageError(f"PBT_ORACLE_CAP must be an integer, got {env_cap!r}") from None
    if (args.ports is None) != (args.dim is None):
        raise UsageError("give both --ports and --dim, or neither")
    if args.ports is not None:
        _validate_nd(args.ports, args.dim)
        cells = [(args.ports, args.dim)]
    else:
        cells = list(DEFAULT_CHECK_CELLS)
    records = []
    for n, d in cells:
        for res in run_checks(n, d, cap=cap, tol=args.tol):
            records.append(
                {
                    "name": res.name,
                    "N": n,
                    "d": d,
                    "residual": res.residual,
                    "tolerance": res.tolerance,
                    "passed": res.passed,
                }
            )
    all_passed = all(r["passed"] for r in records)
    payload = {
        "version": __version__,
        "cap": cap,
        "checks": records,
        "all_passed": all_passed,
    }
    _emit(_json(payload), args.output, out)
    return 0 if all_passed else 2


def _cmd_sweep(args, out) -> int:
    n_values = _parse_range(args.ports)
    d_values = _parse_dims(args.dims)
    if min(n_values) < 1:
        raise UsageError("--ports values must be >= 1")
    if min(d_values) < 2:
        raise UsageError("--dims values must be >= 2")
    rows = sweep(n_values, d_values, tol=args.tol, max_iter=args.max_iter, jobs=args.jobs)
    if _resolve_format(args) == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(SWEEP_COLUMNS)
        for row in rows:
            writer.writerow([row.get(col, "") for col in SWEEP_COLUMNS])
        _emit(buf.getvalue(), args.output, out)
    else:
        payload = {"version": __version__, "rows": rows}
        _emit(_json(payload), args.output, out)
    return 0


_COMMANDS = {
    "matrix": _cmd_matrix,
    "spectrum": _cmd_spectrum,
    "fidelity": _cmd_fidelity,
    "povm": _cmd_povm,
    "verify": _cmd_verify,
    "sweep": _cmd_sweep,
}


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    """Parse argv, run the command, return the exit code."""
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.verb](args, out)
    except SystemExit as exc:  # argparse --help / --version
        return int(exc.code or 0)
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        err.write(parser.format_usage())
        return 1
    except (PowerIterationError, CapExceededError, ArithmeticError) as exc:
        err.write(f"computation failed: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
