"""Command-line front end.

Exit codes: 0 success (or a verified certificate), 1 refuted certificate,
2 invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from fractions import Fraction
from typing import Any, Callable, Sequence

from . import __version__, canonical
from .oracle import DEFAULT_PRIME, DEFAULT_SEEDS, OracleQuery, check_sfc_known, check_tangent_codim, random_ideal_hf
from .roots import DEFAULT_WIDTH
from .series import DegreeProfile, froberg_coeff, froberg_coeff_unbracketed, froberg_series
from .slicerank import fano_delta, general_slice_rank, root_poly_floor, simultaneous_slice_rank
from .strength import coverage_cell, f_eval, f_eval_series, key_inequality, tail_length
from .symbolic import build_g_A, build_g_B, compute_N, tilde_transform

EXIT_OK, EXIT_REFUTED, EXIT_INPUT = 0, 1, 2


class InputError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational number, got {text!r}")


# -- rendering ----------------------------------------------------------------


def _flatten(obj: Any, prefix: str = "") -> list[tuple[str, Any]]:
    if isinstance(obj, dict):
        out = []
        for k in sorted(obj):
            out += _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
        return out
    if isinstance(obj, list) and any(isinstance(v, (dict, list)) for v in obj):
        out = []
        for i, v in enumerate(obj):
            out += _flatten(v, f"{prefix}[{i}]")
        return out
    if isinstance(obj, list):
        return [(prefix, " ".join(str(v) for v in obj))]
    return [(prefix, obj)]


def _render(data: Any, fmt: str, rows: list[list] | None = None) -> str:
    norm = canonical.normalize(data)
    if fmt == "json":
        return canonical.dumps(data)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if rows is not None:
            writer.writerows(rows)
        else:
            writer.writerow(["key", "value"])
            writer.writerows(_flatten(norm))
        return buf.getvalue().rstrip("\n")
    return "\n".join(f"{k}: {v}" for k, v in _flatten(norm))


# -- commands -----------------------------------------------------------------


def cmd_slice_rank(args) -> tuple[dict, int, list | None]:
    n = args.n
    if n < 1:
        raise InputError("n must be at least 1")
    if args.degrees:
        profile = DegreeProfile(args.degrees)
        return {"n": n, "degrees": list(profile.degrees), "slice_rank": simultaneous_slice_rank(n, profile)}, EXIT_OK, None
    d = args.d
    if d is None or d < 2:
        raise InputError("give --d >= 2 or --degrees")
    out: dict[str, Any] = {"n": n, "d": d, "slice_rank": general_slice_rank(n, d)}
    if d >= 3:
        rb = root_poly_floor(n, d)
        out["defect"] = rb.floor_a
        out["root_upper"] = rb.upper
        out["root_lower"] = rb.lower
        out["w"] = rb.w
        out["fano_delta"] = [{"r": r, "delta": fano_delta(n, d, r)} for r in range(n + 1)]
    return out, EXIT_OK, None


def cmd_f_eval(args) -> tuple[dict, int, list | None]:
    d = args.d
    if d < 4:
        raise InputError("f is defined for d >= 4")
    tail = args.tail if args.tail is not None else [0] * tail_length(d)
    value = f_eval(args.n, d, args.m, tail)
    series_value = f_eval_series(args.n, d, args.m, tail)
    out = {"n": args.n, "d": d, "m": args.m, "ell_tail": tail, "f": value, "f_series": series_value}
    if args.key:
        ki = key_inequality(args.n, d, args.m, tail)
        out["key_inequality"] = {
            "lhs": ki.lhs,
            "rhs": ki.rhs,
            "holds": ki.holds,
            "strict": ki.strict,
            "exceptional": ki.exceptional,
        }
    return out, EXIT_OK, None


def cmd_froberg(args) -> tuple[dict, int, list | None]:
    if args.n < 0 or args.d < 0:
        raise InputError("need n >= 0 and d >= 0")
    profile = DegreeProfile(args.degrees or [])
    series = froberg_series(args.n, profile, args.d)
    out = {
        "n": args.n,
        "degrees": list(profile.degrees),
        "d": args.d,
        "series": list(series.coeffs),
        "bracketed": list(series.bracket().coeffs),
        "coeff": froberg_coeff(args.n, profile, args.d),
        "coeff_unbracketed": froberg_coeff_unbracketed(args.n, profile, args.d),
    }
    return out, EXIT_OK, None


def cmd_symbolic(args) -> tuple[dict, int, list | None]:
    d = args.d
    if d < 4:
        raise InputError("symbolic statements need d >= 4")
    cfg = compute_N(d, args.width)
    polys = {}
    for j in range(3, d // 2 + 1):
        g = build_g_A(d, j)
        polys[f"A{j}"] = {"g": g.canonical(), "tilde": tilde_transform(g).canonical()}
    g = build_g_B(d)
    polys["B"] = {"g": g.canonical(), "tilde": tilde_transform(g).canonical()}
    for st in cfg.statements:
        polys[st.name]["bounding_poly"] = st.poly.canonical()
        polys[st.name]["root"] = None if st.root is None else st.root.as_dict()
    return {"d": d, "w": cfg.w, "M": cfg.M, "statements": polys}, EXIT_OK, None


def cmd_compute_n(args) -> tuple[dict, int, list | None]:
    if args.d < 4:
        raise InputError("thresholds need d >= 4")
    cfg = compute_N(args.d, args.width)
    out = cfg.as_dict()
    out["threshold_checks"] = {
        "N_computed": cfg.threshold_checks(cfg.N_computed),
        **({"N_published": cfg.threshold_checks(cfg.N_published)} if cfg.N_published is not None else {}),
    }
    return out, EXIT_OK, None


def cmd_verify(args) -> tuple[dict, int, list | None]:
    from .verifier import MAX_DEGREE, MIN_DEGREE, iter_case_records, verify_degree, write_csv

    if not MIN_DEGREE <= args.d <= MAX_DEGREE:
        raise InputError(f"verify covers {MIN_DEGREE} <= d <= {MAX_DEGREE}")
    cert = verify_degree(args.d, workers=args.workers, violation_cap=args.violation_cap)
    data = cert.as_dict()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(canonical.dumps(data) + "\n")
    if args.records:
        with open(args.records, "w", encoding="utf-8", newline="") as fh:
            write_csv(args.d, iter_case_records(args.d, cert.config, cert.N_used), fh)
    code = EXIT_OK if cert.verified else EXIT_REFUTED
    summary = {
        "d": cert.d,
        "verdict": cert.verdict,
        "N_used": cert.N_used,
        "M": cert.config.M,
        "plateau_count": cert.plateau_count,
        "case_count": cert.case_count,
        "violation_count": cert.violation_count,
        "exceptional": [[r.n, r.d, r.m, *r.ell_tail] for r in cert.exceptional],
        "duration_seconds": f"{cert.duration_seconds:.3f}",
    }
    return (data if args.format == "json" else summary), code, None


def cmd_oracle(args) -> tuple[dict, int, list | None]:
    if args.mode == "tangent":
        if args.ells is None:
            raise InputError("--mode tangent needs --ells")
        return check_tangent_codim(args.n, args.d, args.ells, args.p, args.seed, args.seeds), EXIT_OK, None
    profile = DegreeProfile(args.degrees or [])
    if args.mode == "sfc":
        return check_sfc_known(args.n, profile, args.d, args.p, args.seed, args.seeds), EXIT_OK, None
    res = random_ideal_hf(OracleQuery(args.n, profile, args.d, args.p, args.seed, args.seeds))
    return {"n": args.n, "degrees": list(profile.degrees), "d": args.d, **res.as_dict()}, EXIT_OK, None


def cmd_coverage(args) -> tuple[dict, int, list | None]:
    if args.max_n < 2 or args.max_d < 2:
        raise InputError("coverage needs max-n >= 2 and max-d >= 2")
    cells = [
        {"n": n, "d": d, "label": coverage_cell(n, d)}
        for n in range(2, args.max_n + 1)
        for d in range(2, args.max_d + 1)
    ]
    rows = [["n", "d", "label"]] + [[c["n"], c["d"], c["label"]] for c in cells]
    return {"max_n": args.max_n, "max_d": args.max_d, "cells": cells}, EXIT_OK, rows


def _coverage_text(data: dict) -> str:
    short = {"red": "R", "green": "G", "blue": "B", "open": "."}
    ds = range(2, data["max_d"] + 1)
    lines = ["n\\d " + " ".join(f"{d:>2}" for d in ds)]
    grid = {(c["n"], c["d"]): c["label"] for c in data["cells"]}
    for n in range(2, data["max_n"] + 1):
        lines.append(f"{n:>3} " + " ".join(f"{short[grid[n, d]]:>2}" for d in ds))
    return "\n".join(lines)


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="strength-verify", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, func: Callable, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--format", choices=("json", "csv", "text"), default="text")
        p.set_defaults(func=func)
        return p

    p = add("slice-rank", cmd_slice_rank, "general (or simultaneous) slice rank")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int)
    p.add_argument("--degrees", type=_int_list, help="comma-separated degrees for a family")

    p = add("f-eval", cmd_f_eval, "codimension function f_{n,d}")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--tail", type=_int_list, help="l_2,...,l_floor(d/2)")
    p.add_argument("--key", action="store_true", help="also compare with f(m - sum(tail), 0)")

    p = add("froberg", cmd_froberg, "bracketed Froberg prediction")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--degrees", type=_int_list, default=[])
    p.add_argument("--d", type=int, required=True)

    for name, func, text in (
        ("symbolic", cmd_symbolic, "statement polynomials and their certified roots"),
        ("compute-n", cmd_compute_n, "thresholds N and case bound M"),
    ):
        p = add(name, func, text)
        p.add_argument("--d", type=int, required=True)
        p.add_argument("--width", type=_fraction, default=DEFAULT_WIDTH)

    p = add("verify", cmd_verify, "exhaustive finite check for one degree")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--workers", type=int, default=None, help="defaults to $STRENGTH_VERIFY_WORKERS or 1")
    p.add_argument("--output", help="write the certificate (canonical JSON) here")
    p.add_argument("--records", help="write every case as CSV here (slow for d >= 8)")
    p.add_argument("--violation-cap", type=int, default=1000)

    p = add("oracle", cmd_oracle, "random-ideal Hilbert function over F_p")
    p.add_argument("--mode", choices=("hf", "tangent", "sfc"), default="hf")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--degrees", type=_int_list, default=[])
    p.add_argument("--ells", type=_int_list, help="l_1,...,l_floor(d/2) for --mode tangent")
    p.add_argument("--p", type=int, default=DEFAULT_PRIME)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--seeds", type=int, default=DEFAULT_SEEDS)

    p = add("coverage", cmd_coverage, "which known result covers each (n, d)")
    p.add_argument("--max-n", type=int, default=8)
    p.add_argument("--max-d", type=int, default=12)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        data, code, rows = args.func(args)
    except (ValueError, ZeroDivisionError) as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.command == "coverage" and args.format == "text":
        print(_coverage_text(data))
    else:
        print(_render(data, args.format, rows))
    return code


if __name__ == "__main__":
    sys.exit(main())
