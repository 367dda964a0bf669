"""Command-line front end: ``price``, ``converge``, ``bench`` and ``verify``."""

from __future__ import annotations

import argparse
import logging
import math
import sys
import time
from dataclasses import dataclass, field

from .american import convergence_curve
from .analytic import OptionKind, OptionSpec
from .bench import default_lane_counts, price_option, run_benchmark
from .errors import DomainError
from .european import Method
from .paths import DEFAULT_CHUNK, default_lanes
from .report import emit_results
from .verify import format_checks, run_checks

__all__ = ["RunConfig", "build_parser", "parse_args", "main"]

_U64_MAX = 2**64 - 1


@dataclass
class RunConfig:
    command: str
    spec: OptionSpec
    method: Method = Method.AMERICAN_UB
    m: int = 10
    m_list: list[int] = field(default_factory=lambda: [1, 2, 5, 10, 20, 50])
    n_paths: int = 2**18
    path_list: list[int] = field(default_factory=lambda: [10_000, 100_000, 1_000_000])
    seed: int = 42
    lanes: int = 1
    lane_list: list[int] = field(default_factory=lambda: [1])
    chunk: int = DEFAULT_CHUNK
    serial: bool = False
    fmt: str | None = None
    out: str | None = None


def _number(lo: float | None = None, lo_open: bool = False, constraint: str = ""):
    def parse(text: str) -> float:
        try:
            value = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expects a number, got {text!r}") from None
        if not math.isfinite(value):
            raise argparse.ArgumentTypeError(f"must be finite, got {text!r}")
        if lo is not None and (value <= lo if lo_open else value < lo):
            raise argparse.ArgumentTypeError(f"must satisfy {constraint}, got {text}")
        return value

    return parse


def _integer(lo: int, hi: int | None = None):
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expects an integer, got {text!r}") from None
        if value < lo or (hi is not None and value > hi):
            upper = f"..{hi}" if hi is not None else " or more"
            raise argparse.ArgumentTypeError(f"must be in range {lo}{upper}, got {text}")
        return value

    return parse


def _int_list(lo: int):
    item = _integer(lo)

    def parse(text: str) -> list[int]:
        parts = [p.strip() for p in text.split(",") if p.strip()]
        if not parts:
            raise argparse.ArgumentTypeError("needs a comma-separated list of integers")
        return [item(p) for p in parts]

    return parse


def _add_spec_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("option")
    g.add_argument("--spot", type=_number(0.0, True, "S0 > 0"), default=100.0, help="spot price S0 > 0 (default 100)")
    g.add_argument("--strike", type=_number(0.0, True, "X > 0"), default=100.0, help="strike X > 0 (default 100)")
    g.add_argument("--rate", type=_number(), default=0.05, help="continuously compounded rate r (default 0.05)")
    g.add_argument("--vol", type=_number(0.0, False, "v >= 0"), default=0.2, help="volatility v >= 0 (default 0.2)")
    g.add_argument("--maturity", type=_number(0.0, False, "T >= 0"), default=1.0, help="maturity T in years >= 0 (default 1)")
    g.add_argument("--kind", choices=[k.value for k in OptionKind], default="call", help="call or put (default call)")


def _add_run_flags(p: argparse.ArgumentParser, paths: bool = True, threads: bool = True) -> None:
    g = p.add_argument_group("run")
    if paths:
        g.add_argument("--paths", type=_integer(2), default=2**18, help="number of paths >= 2 (default 262144)")
    g.add_argument("--seed", type=_integer(0, _U64_MAX), default=42, help="unsigned 64-bit seed (default 42)")
    if threads:
        g.add_argument("--threads", type=_integer(1), default=default_lanes(), help="worker lanes >= 1 (default: hardware threads)")
    g.add_argument("--chunk", type=_integer(1), default=DEFAULT_CHUNK, help=f"paths per chunk >= 1 (default {DEFAULT_CHUNK})")


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("output")
    g.add_argument("--format", choices=["csv", "json"], default=None, help="machine-readable output; a text table when omitted")
    g.add_argument("--out", default=None, help="output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmc-american",
        description="Quasi-Monte Carlo option pricing with a foresight upper bound for American calls.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)
    methods = [m.value for m in Method]

    p = sub.add_parser("price", help="price one option")
    _add_spec_flags(p)
    p.add_argument("--method", choices=methods, default=Method.AMERICAN_UB.value, help="pricing method (default american-ub)")
    p.add_argument("--m", type=_integer(1), default=10, help="exercise points >= 1 for american-ub (default 10)")
    _add_run_flags(p)
    p.add_argument("--serial", action="store_true", help="use the straight-line single-threaded implementation")
    _add_output_flags(p)

    p = sub.add_parser("converge", help="foresight price against the number of exercise points")
    _add_spec_flags(p)
    p.add_argument("--m-list", type=_int_list(1), default=[1, 2, 5, 10, 20, 50], help="comma-separated m values >= 1 (default 1,2,5,10,20,50)")
    _add_run_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("bench", help="serial-vs-parallel scaling sweep")
    _add_spec_flags(p)
    p.add_argument("--method", choices=methods, default=Method.AMERICAN_UB.value, help="pricing method (default american-ub)")
    p.add_argument("--m", type=_integer(1), default=10, help="exercise points >= 1 (default 10)")
    p.add_argument("--path-list", type=_int_list(2), default=[10_000, 100_000, 1_000_000], help="comma-separated path counts >= 2 (default 10000,100000,1000000)")
    p.add_argument("--thread-list", type=_int_list(1), default=default_lane_counts(), help="comma-separated lane counts >= 1; 1 is always added")
    _add_run_flags(p, paths=False, threads=False)
    p.add_argument("--serial", action="store_true", help="add a straight-line serial row (lanes=0) per path count")
    _add_output_flags(p)

    p = sub.add_parser("verify", help="check pricers against the independent oracles")
    _add_spec_flags(p)
    p.add_argument("--paths", type=_integer(2), default=2**16, help="paths for the Monte Carlo checks (default 65536)")
    p.add_argument("--seed", type=_integer(0, _U64_MAX), default=42, help="unsigned 64-bit seed (default 42)")
    p.add_argument("--threads", type=_integer(1), default=default_lanes(), help="worker lanes >= 1")
    return parser


def parse_args(argv: list[str] | None = None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    spec = OptionSpec(ns.spot, ns.strike, ns.rate, ns.vol, ns.maturity, OptionKind(ns.kind))
    cfg = RunConfig(command=ns.command, spec=spec, seed=ns.seed)
    if ns.command in ("price", "bench"):
        cfg.method = Method(ns.method)
        cfg.m = ns.m
        cfg.serial = ns.serial
    if ns.command == "converge":
        cfg.m_list = ns.m_list
    if ns.command == "bench":
        cfg.path_list = ns.path_list
        cfg.lane_list = ns.thread_list
    else:
        cfg.n_paths = ns.paths
        cfg.lanes = ns.threads
    if ns.command != "verify":
        cfg.chunk = ns.chunk
        cfg.fmt = ns.format
        cfg.out = ns.out
    return cfg


def _run(cfg: RunConfig) -> int:
    if cfg.command == "price":
        result = price_option(
            cfg.spec, cfg.method, m=cfg.m, n_paths=cfg.n_paths, seed=cfg.seed,
            lanes=cfg.lanes, chunk=cfg.chunk, serial=cfg.serial,
        )
        emit_results(result, cfg.fmt, cfg.out)
        return 0
    if cfg.command == "converge":
        curve = convergence_curve(cfg.spec, cfg.m_list, cfg.n_paths, cfg.seed, cfg.lanes, cfg.chunk)
        emit_results(curve, cfg.fmt, cfg.out)
        return 0
    if cfg.command == "bench":
        records = run_benchmark(
            cfg.spec, cfg.m, cfg.path_list, cfg.lane_list, cfg.seed,
            method=cfg.method, chunk=cfg.chunk, serial=cfg.serial,
        )
        emit_results(records, cfg.fmt, cfg.out)
        failed = [r for r in records if not r.ok]
        for r in failed:
            print(f"error: n_paths={r.n_paths} lanes={r.lanes}: {r.error}", file=sys.stderr)
        return 1 if failed else 0
    start = time.perf_counter()
    checks = run_checks(cfg.spec, cfg.n_paths, cfg.seed, cfg.lanes)
    sys.stdout.write(format_checks(checks))
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} checks passed in {time.perf_counter() - start:.2f}s")
    return 1 if failed else 0


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = parse_args(argv)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _run(cfg)
    except (DomainError, NotImplementedError, ArithmeticError, MemoryError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
