"""Command-line front end: coefficient listings, error tables, sequences and checks.

Exit codes: 0 when everything requested was produced and proved, 1 when a
check is refuted or a value stays undetermined, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

from .approximations import (
    SEQUENCE_LIMITS,
    TABLE_FORMULAS,
    eval_formula,
    parse_formula,
    parse_sequence,
    predicted_error,
    sequence_value,
)
from .coefficients import FAMILIES, coefficient_series
from .exactmath import format_rational
from .precision import Enclosure, PrecisionConfig
from .verification import SUITES, run_suite

__all__ = ["CliConfig", "UsageError", "parse_range", "load_config", "main"]

FORMATS = ("md", "csv", "json")
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    """Bad flags, ranges or config entries."""


@dataclass(frozen=True)
class CliConfig:
    precision_bits: int = 128
    max_refinements: int = 8
    format: str = "md"
    out: str | None = None
    n_max: int = 1000

    def __post_init__(self):
        if self.precision_bits < 32:
            raise UsageError("--precision must be at least 32")
        if self.max_refinements < 0:
            raise UsageError("--max-refine must be non-negative")
        if self.format not in FORMATS:
            raise UsageError(f"--format must be one of {', '.join(FORMATS)}")
        if self.n_max < 1:
            raise UsageError("--n-max must be positive")

    @property
    def precision(self) -> PrecisionConfig:
        return PrecisionConfig(self.precision_bits, self.max_refinements)


# config-file key -> (CliConfig field, converter)
_CONFIG_KEYS = {
    "precision": ("precision_bits", int),
    "precision_bits": ("precision_bits", int),
    "max_refine": ("max_refinements", int),
    "max_refinements": ("max_refinements", int),
    "format": ("format", str),
    "out": ("out", str),
    "n_max": ("n_max", int),
}


def load_config(path: str | Path) -> dict:
    """Read a flat ``key = value`` file; ``#`` starts a comment."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from exc
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in _CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: expected one of {sorted(_CONFIG_KEYS)} as key=value")
        name, convert = _CONFIG_KEYS[key]
        try:
            values[name] = convert(value.strip())
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: bad value {value.strip()!r}") from exc
    return values


def parse_range(text: str) -> range:
    """Parse ``a:b:step`` (or ``a:b``, or ``a``) into an inclusive range of n >= 1."""
    parts = text.split(":")
    if not 1 <= len(parts) <= 3:
        raise UsageError(f"bad range {text!r}; expected a:b:step")
    try:
        nums = [int(p) for p in parts]
    except ValueError as exc:
        raise UsageError(f"bad range {text!r}; expected integers a:b:step") from exc
    a = nums[0]
    b = nums[1] if len(nums) > 1 else a
    step = nums[2] if len(nums) > 2 else 1
    if a < 1 or b < a or step < 1:
        raise UsageError(f"bad range {text!r}; need 1 <= a <= b and step >= 1")
    return range(a, b + 1, step)


# -- rendering ------------------------------------------------------------------

def _render(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    columns = list(rows[0]) if rows else []
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return buf.getvalue()
    lines = ["| " + " | ".join(columns) + " |", "|" + "---|" * len(columns)]
    lines += ["| " + " | ".join(str(r[c]) for c in columns) + " |" for r in rows]
    return "\n".join(lines) + "\n"


def _emit(text: str, cfg: CliConfig) -> None:
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)


def _bounds(prefix: str, enc: Enclosure, bits: int) -> dict:
    lo, hi = enc.rounded(bits).decimal_strings()
    return {f"{prefix}_lo": lo, f"{prefix}_hi": hi}


# -- commands -------------------------------------------------------------------

def cmd_coeffs(series: str, count: int, cfg: CliConfig) -> int:
    if series not in FAMILIES:
        raise UsageError(f"unknown series {series!r}; expected one of {', '.join(FAMILIES)}")
    if count < 1:
        raise UsageError("count must be >= 1")
    rows = coefficient_series(series, count).to_rows()
    _emit(_render(rows, cfg.format), cfg)
    return EXIT_OK


def cmd_table(formulas: Sequence[str], n_spec: str, cfg: CliConfig) -> int:
    if not formulas:
        raise UsageError("table needs at least one formula")
    names = list(TABLE_FORMULAS) if list(formulas) == ["all"] else list(formulas)
    try:
        fids = [parse_formula(f) for f in names]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    ns = parse_range(n_spec)
    prec = cfg.precision
    rows, status = [], EXIT_OK
    for n in ns:
        for fid in fids:
            report = eval_formula(fid, n, prec)
            row = {"n": n, "formula": str(fid), "truth": format_rational(report.truth)}
            row |= _bounds("approx", report.approx, prec.bits)
            row |= _bounds("error", report.error, prec.bits)
            row["sign"] = report.sign
            if fid.tag in TABLE_FORMULAS:
                ratio = abs(report.error) / predicted_error(fid, n)
                row |= _bounds("ratio", ratio, prec.bits)
            else:
                row |= {"ratio_lo": "", "ratio_hi": ""}
            if report.sign == "undetermined":
                status = EXIT_FAIL
            rows.append(row)
    _emit(_render(rows, cfg.format), cfg)
    return status


def cmd_verify(suites: Sequence[str], cfg: CliConfig) -> int:
    if not suites:
        raise UsageError("verify needs at least one suite name or 'all'")
    names = list(SUITES) if "all" in suites else list(dict.fromkeys(suites))
    unknown = [s for s in names if s not in SUITES]
    if unknown:
        raise UsageError(f"unknown suite(s) {', '.join(unknown)}; expected {', '.join(SUITES)} or all")
    reports = [run_suite(name, cfg.precision, cfg.n_max) for name in names]
    if cfg.format == "json":
        text = json.dumps([r.to_dict() for r in reports], indent=2) + "\n"
    elif cfg.format == "csv":
        rows = [
            {
                "suite": r.suite,
                "label": c.label,
                "status": c.status,
                "witness": json.dumps(c.witness) if c.witness is not None else "",
            }
            for r in reports
            for c in r.checks
        ]
        text = _render(rows, "csv")
    else:
        text = "\n".join(r.to_text() for r in reports) + "\n"
    _emit(text, cfg)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_sequences(which: str, n_spec: str, cfg: CliConfig, limit: bool = False) -> int:
    try:
        name, r = parse_sequence(which)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    ns = parse_range(n_spec)
    prec = cfg.precision
    rows, status = [], EXIT_OK
    for n in ns:
        point = sequence_value(name, n, prec, r=r)
        row = {"n": n, "sequence": point.label}
        row |= _bounds("value", point.value, prec.bits)
        row["determined"] = point.determined
        if limit:
            lim = SEQUENCE_LIMITS.get(name)
            if lim is None:
                row |= {"limit": "", "distance_lo": "", "distance_hi": ""}
            else:
                row["limit"] = format_rational(lim)
                row |= _bounds("distance", Enclosure.exact(lim, point.value.bits) - point.value, prec.bits)
        if not point.determined:
            status = EXIT_FAIL
        rows.append(row)
    _emit(_render(rows, cfg.format), cfg)
    return status


# -- argument parsing -------------------------------------------------------------

def _common_flags() -> argparse.ArgumentParser:
    # SUPPRESS keeps absent flags out of the namespace so config values survive
    p = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    p.add_argument("--precision", type=int, dest="precision_bits", help="working precision in bits (default 128)")
    p.add_argument("--max-refine", type=int, dest="max_refinements", help="precision doublings allowed (default 8)")
    p.add_argument("--format", choices=FORMATS, help="output format (default md)")
    p.add_argument("--out", help="write output to this file instead of stdout")
    p.add_argument("--config", help="flat key=value file; flags override it")
    p.add_argument("--n-max", type=int, dest="n_max", help="upper n for sequence-based suites (default 1000)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = argparse.ArgumentParser(
        prog="harmonic-expansions",
        description="Exact coefficients and certified error bounds for asymptotic expansions of H_n.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", parents=[common], help="exact expansion coefficients")
    p.add_argument("series", choices=FAMILIES)
    p.add_argument("count", type=int)

    p = sub.add_parser("table", parents=[common], help="certified errors of approximation formulas")
    p.add_argument("n_spec", metavar="RANGE", help="a:b:step, inclusive")
    p.add_argument("formulas", nargs="*", metavar="FORMULA", help="formula ids, or 'all' for the four tabulated ones")

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("suites", nargs="*", metavar="SUITE", help=f"one of {', '.join(SUITES)}, or all")

    p = sub.add_parser("sequences", parents=[common], help="certified values of an error sequence")
    p.add_argument("which", help="f, lambda, LambdaL2, d, c, lodgeResidual, rho, delta, DeltaCap or theta(r)")
    p.add_argument("n_spec", metavar="RANGE", help="a:b:step, inclusive")
    p.add_argument("--limit", action="store_true", help="append the limit and the distance to it")
    return parser


def _config_from(args: argparse.Namespace) -> CliConfig:
    values = load_config(args.config) if getattr(args, "config", None) else {}
    for name in ("precision_bits", "max_refinements", "format", "out", "n_max"):
        if hasattr(args, name):
            values[name] = getattr(args, name)
    return replace(CliConfig(), **values)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = _config_from(args)
        if args.command == "coeffs":
            return cmd_coeffs(args.series, args.count, cfg)
        if args.command == "table":
            return cmd_table(args.formulas, args.n_spec, cfg)
        if args.command == "verify":
            return cmd_verify(args.suites, cfg)
        return cmd_sequences(args.which, args.n_spec, cfg, limit=args.limit)
    except UsageError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
