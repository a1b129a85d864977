"""Command-line front end: one subcommand per capability, stable exports.

Exit codes: 0 success, 2 usage errors (bad flags, malformed expressions),
1 computation errors. Errors are written to stderr as a JSON object so
scripts can parse them. Identical configs produce byte-identical output
files regardless of --threads; all numeric output carries 15 significant
digits.

A JSON config file may supply any long-flag value (keys use underscores,
e.g. {"limit": 1000000, "threads": 4}); explicit flags always win.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, fields

from .errors import ExprSyntaxError
from .expr import format_sequence, parse_sequence
from .gaps import gpy_statistics, literature_bounds
from .ratios import check_candidate, gap_bound_report, prime_ratio_scan
from .report import ParsedExpression, SieveSummary, export_report
from .series import reciprocal_prime_sum
from .sieve import primes_upto, write_prime_dump

__all__ = ["RunConfig", "UsageError", "run", "main"]


class UsageError(ValueError):
    """Invalid flag combination; maps to exit code 2."""


@dataclass
class RunConfig:
    """One validated invocation: exactly one command plus its inputs."""

    command: str
    limit: int | None = None
    expression: str | None = None
    r: float | None = None
    epsilon: float = 0.0
    checkpoints: list[int] | None = None
    n_lo: int = 2
    n0: int = 2
    n_max: int = 1 << 16
    segment_size: int | None = None
    threads: int = 1
    output: str | None = None
    format: str = "json"
    dump: str | None = None
    summary: bool = False


_COMMANDS = ("sieve", "gaps", "series", "parse", "star", "scan", "bounds")

_NEEDS_LIMIT = {"sieve", "gaps", "series", "scan"}
_NEEDS_EXPR = {"parse", "star"}
_JSON_ONLY = {"parse", "star"}


def _validate(config: RunConfig) -> None:
    if config.command not in _COMMANDS:
        raise UsageError(f"unknown command {config.command!r}")
    if config.format not in ("csv", "json"):
        raise UsageError(f"format must be csv or json, got {config.format!r}")
    if config.command in _NEEDS_LIMIT and config.limit is None:
        raise UsageError(f"'{config.command}' requires --limit")
    if config.command in _NEEDS_EXPR and not config.expression:
        raise UsageError(f"'{config.command}' requires --expr")
    if config.command in ("star", "scan") and config.r is None:
        raise UsageError(f"'{config.command}' requires --r")
    if config.command in _JSON_ONLY and config.format != "json":
        raise UsageError(f"'{config.command}' supports only --format json")
    if config.threads < 1:
        raise UsageError(f"--threads must be >= 1, got {config.threads}")
    if config.dump is not None and config.command != "sieve":
        raise UsageError("--dump is only valid with 'sieve'")


def run(config: RunConfig) -> int:
    """Execute one command; writes the artifact to --out (default stdout)."""
    _validate(config)
    cmd = config.command

    if cmd == "sieve":
        primes = primes_upto(config.limit, config.segment_size, config.threads)
        if config.dump:
            write_prime_dump(config.dump, config.limit, config.segment_size, config.threads)
        if config.format == "json":
            artifact = SieveSummary(
                limit=config.limit,
                prime_count=int(len(primes)),
                last_prime=int(primes[-1]) if len(primes) else 0,
            )
        else:
            artifact = primes
    elif cmd == "gaps":
        artifact = gpy_statistics(config.limit, config.segment_size, config.threads)
    elif cmd == "series":
        artifact = reciprocal_prime_sum(
            config.limit, config.checkpoints, config.segment_size, config.threads
        )
    elif cmd == "parse":
        ast = parse_sequence(config.expression)
        artifact = ParsedExpression(expression=format_sequence(ast), ast=ast)
    elif cmd == "star":
        ast = parse_sequence(config.expression)
        artifact = check_candidate(ast, config.r, config.n0, config.n_max)
    elif cmd == "scan":
        if config.summary:
            artifact = gap_bound_report(
                config.r, config.epsilon, config.limit, config.n_lo,
                config.segment_size, config.threads,
            )
        else:
            artifact = prime_ratio_scan(
                config.r, config.epsilon, config.limit, config.n_lo,
                config.segment_size, config.threads,
            )
    else:  # bounds
        artifact = literature_bounds()

    data = export_report(artifact, config.format)
    if config.output in (None, "-"):
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        with open(config.output, "wb") as fh:
            fh.write(data)
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad checkpoint list {text!r}: {exc}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaplab",
        description="Prime gaps, divergence trackers, sequence analysis and ratio scans.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", dest="output", default=None,
                        help="output path; '-' or omitted writes to stdout")
    common.add_argument("--format", choices=("csv", "json"), default=None,
                        help="artifact format (default json)")
    common.add_argument("--config", default=None,
                        help="JSON file with default flag values; flags win")

    stream = argparse.ArgumentParser(add_help=False)
    stream.add_argument("--limit", type=int, default=None, help="inclusive prime bound")
    stream.add_argument("--segment-size", type=int, default=None,
                        help="odd numbers per sieve segment (output-invariant)")
    stream.add_argument("--threads", type=int, default=None,
                        help="sieve segments concurrently (output-invariant)")

    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("sieve", parents=[common, stream], help="prime counts and dumps")
    p.add_argument("--dump", default=None, help="also dump primes as little-endian int64")
    sub.add_parser("gaps", parents=[common, stream], help="gap histogram and normalized minima")
    p = sub.add_parser("series", parents=[common, stream],
                       help="reciprocal-prime sums and p_n/(n ln n)")
    p.add_argument("--checkpoints", type=_int_list, default=None,
                   help="comma-separated indices (default: powers of two)")
    p = sub.add_parser("parse", parents=[common], help="parse a sequence formula")
    p.add_argument("--expr", dest="expression", required=True)
    p = sub.add_parser("star", parents=[common], help="two-axis candidate check")
    p.add_argument("--expr", dest="expression", required=True)
    p.add_argument("--r", type=float, required=True, help="target ratio-excess limit")
    p.add_argument("--n0", type=int, default=None, help="first index analyzed (default 2)")
    p.add_argument("--n-max", type=int, default=None, help="last index analyzed (default 2^16)")
    p = sub.add_parser("scan", parents=[common, stream],
                       help="scan primes for p_(n+1)/p_n < 1 + (r+eps)/(n ln n)")
    p.add_argument("--r", type=float, default=None)
    p.add_argument("--epsilon", type=float, default=None, help="explicit stand-in for the vanishing term (default 0)")
    p.add_argument("--n-lo", type=int, default=None, help="first index scanned (default 2)")
    p.add_argument("--summary", action="store_true",
                   help="emit the gap-bound summary instead of the raw scan")
    sub.add_parser("bounds", parents=[common], help="published liminf gap bounds")
    return parser


_DEFAULTS = {f.name: f.default for f in fields(RunConfig)}


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values = {k: v for k, v in vars(args).items() if k != "config"}
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as fh:
            try:
                file_values = json.load(fh)
            except json.JSONDecodeError as exc:
                raise UsageError(f"bad config file {args.config}: {exc}")
        if not isinstance(file_values, dict):
            raise UsageError(f"config file {args.config} must hold a JSON object")
        for key, val in file_values.items():
            key = key.replace("-", "_")
            if key not in _DEFAULTS or key == "command":
                raise UsageError(f"config file {args.config}: unknown key {key!r}")
            # a flag left at its unset state defers to the file
            if values.get(key) is None or (key == "summary" and not values.get(key)):
                values[key] = val
    kwargs = {"command": values["command"]}
    for f in fields(RunConfig):
        if f.name == "command":
            continue
        v = values.get(f.name)
        kwargs[f.name] = _DEFAULTS[f.name] if v is None else v
    return RunConfig(**kwargs)


def _emit_error(exc: BaseException) -> None:
    payload = {"type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, ExprSyntaxError):
        payload["position"] = exc.position
        payload["expected"] = list(exc.expected)
    sys.stderr.write(json.dumps({"error": payload}, sort_keys=True) + "\n")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        return run(config)
    except UsageError as exc:
        _emit_error(exc)
        return 2
    except ExprSyntaxError as exc:
        _emit_error(exc)
        return 2
    except (ValueError, ArithmeticError, OverflowError, TypeError, OSError) as exc:
        _emit_error(exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
