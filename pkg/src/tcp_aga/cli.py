"""Command-line entry point: ``tcp-aga {prioritize,apfd,bench,sweep}``.

Exit status: 0 success, 2 unreadable/malformed input, 3 bad configuration.
Timings go to stderr (or dedicated report fields) so stdout and output files
stay byte-deterministic.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

from tcp_aga.bench import GenSpec, generate, iteration_sweep, run_bench, sweep_csv, synthetic_faults
from tcp_aga.coverage import (
    FORMATS,
    CoverageData,
    FormatError,
    detect_format,
    format_order,
    parse_faults,
    parse_order,
)
from tcp_aga.metrics import apfd
from tcp_aga.prioritizers import ALGORITHMS, DEFAULT_MAX_ITERATIONS, prioritize

PARSE_ERROR = 2
CONFIG_ERROR = 3
SEED_ENV = "TCP_AGA_SEED"


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(CONFIG_ERROR, f"{self.prog}: error: {message}\n")


def _read(path: str) -> bytes:
    try:
        return sys.stdin.buffer.read() if path == "-" else Path(path).read_bytes()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        Path(path).write_text(text, encoding="ascii", newline="\n")


def _seed(args) -> int | None:
    env = os.environ.get(SEED_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"{SEED_ENV}={env!r} is not an integer") from None
    return args.seed


def _check_algorithm(name: str, k: int, flag: str = "--algo") -> None:
    if name not in ALGORITHMS:
        raise ConfigError(f"{flag}: unknown algorithm {name!r} (choose from {', '.join(ALGORITHMS)})")
    if name == "aga" and k < 1:
        raise ConfigError(f"--k: must be >= 1, got {k}")


def parse_gen(text: str, seed: int | None = None) -> GenSpec:
    """``m=100,n=400,density=0.05,seed=1[,shape=layered,k=8]`` -> GenSpec."""
    keys = {"m": "num_tests", "n": "num_elements", "density": "density",
            "shape": "shape", "k": "target_k", "seed": "seed"}
    fields = {}
    for item in filter(None, text.split(",")):
        key, sep, value = item.partition("=")
        if not sep or key not in keys:
            raise ConfigError(f"--gen: bad item {item!r}")
        try:
            fields[keys[key]] = value if key == "shape" else (float(value) if key == "density" else int(value))
        except ValueError:
            raise ConfigError(f"--gen: bad value in {item!r}") from None
    if "num_tests" not in fields or "num_elements" not in fields:
        raise ConfigError("--gen: m and n are required")
    if seed is not None:
        fields["seed"] = seed
    if "target_k" in fields and "shape" not in fields:
        fields["shape"] = "layered"
    try:
        return GenSpec(**fields)
    except ValueError as exc:
        raise ConfigError(f"--gen: {exc}") from None


def _load(args) -> tuple[CoverageData, float]:
    """Coverage from --input or --gen, plus the seconds spent parsing."""
    if getattr(args, "gen", None):
        if args.input:
            raise ConfigError("--input and --gen are mutually exclusive")
        return generate(parse_gen(args.gen, _seed(args))), 0.0
    if not args.input:
        raise ConfigError("--input is required")
    fmt = args.format
    if fmt == "auto":
        try:
            fmt = detect_format(args.input)
        except ValueError as exc:
            raise ConfigError(f"--format: {exc}") from None
    data = _read(args.input)
    start = time.perf_counter()
    cov = FORMATS[fmt](data)
    return cov, time.perf_counter() - start


def cmd_prioritize(args) -> int:
    _check_algorithm(args.algo, args.k)
    cov, _ = _load(args)
    start = time.perf_counter()
    result = prioritize(cov, args.algo, args.k)
    elapsed = time.perf_counter() - start
    _write(args.output, format_order(result.order, args.one_based))
    print(f"iterations={result.num_iterations} elapsed={elapsed:.6f}s", file=sys.stderr)
    return 0


def cmd_apfd(args) -> int:
    faults = parse_faults(_read(args.faults))
    order = parse_order(_read(args.order), faults.num_tests, args.one_based)
    try:
        result = apfd(order, faults)
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    _write(None, f"{result.value:.6f}\n")
    return 0


def cmd_bench(args) -> int:
    names = [a for a in args.algos.split(",") if a]
    for name in names or [""]:
        _check_algorithm(name, args.k, "--algos")
    cov, parse_s = _load(args)
    reports = run_bench(cov, names, args.reps, args.k, parse_seconds=parse_s)
    _write(args.output, "".join(r.to_json() + "\n" for r in reports))
    return 0


def cmd_sweep(args) -> int:
    cov, _ = _load(args)
    faults = None
    if args.faults:
        faults = parse_faults(_read(args.faults), cov.num_tests)
    elif args.num_faults:
        faults = synthetic_faults(cov, args.num_faults, _seed(args) or 0)
    rows = iteration_sweep(cov, faults)
    _write(args.output, sweep_csv(rows))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tcp-aga", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def coverage_flags(p, gen=False):
        p.add_argument("--input", help="coverage file (.covlist or .covmat), '-' for stdin")
        p.add_argument("--format", choices=["auto", "list", "matrix"], default="auto")
        if gen:
            p.add_argument("--gen", help="synthetic instance, e.g. m=100,n=400,density=0.05,seed=1")
            p.add_argument("--seed", type=int, help=f"overrides the --gen seed; ${SEED_ENV} overrides this")
        p.add_argument("--output", help="output path (default stdout)")

    p = sub.add_parser("prioritize", help="write a prioritized order, one test index per line")
    coverage_flags(p)
    p.add_argument("--algo", default="aga", help=f"one of {', '.join(ALGORITHMS)}")
    p.add_argument("--k", type=int, default=DEFAULT_MAX_ITERATIONS, help="iteration cap for aga")
    p.add_argument("--one-based", action="store_true", help="write 1-based indices")
    p.set_defaults(func=cmd_prioritize)

    p = sub.add_parser("apfd", help="score an order file against a fault file")
    p.add_argument("--order", required=True)
    p.add_argument("--faults", required=True)
    p.add_argument("--one-based", action="store_true", help="order file uses 1-based indices")
    p.set_defaults(func=cmd_apfd)

    p = sub.add_parser("bench", help="time algorithms, JSON Lines report")
    coverage_flags(p, gen=True)
    p.add_argument("--algos", default="ga,aga-c,aga", help="comma-separated algorithm names")
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--k", type=int, default=DEFAULT_MAX_ITERATIONS)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("sweep", help="time/APFD for every iteration cap, CSV")
    coverage_flags(p, gen=True)
    p.add_argument("--faults", help="fault file; otherwise --num-faults synthetic faults")
    p.add_argument("--num-faults", type=int, default=0)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if getattr(args, "reps", 1) < 1:
            raise ConfigError("--reps: must be >= 1")
        return args.func(args)
    except ConfigError as exc:
        print(f"tcp-aga: error: {exc}", file=sys.stderr)
        return CONFIG_ERROR
    except (FormatError, ValueError) as exc:
        print(f"tcp-aga: error: {exc}", file=sys.stderr)
        return PARSE_ERROR


if __name__ == "__main__":
    sys.exit(main())
