"""Serial-vs-parallel scaling harness and the shared price dispatcher."""

from __future__ import annotations

import logging
import math
import statistics
import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .american import backward_sweep, price_american
from .analytic import OptionSpec
from .errors import DomainError
from .european import Method, PricingResult, closed_form_price, mc_european_price, summarize
from .paths import DEFAULT_CHUNK, ExerciseSchedule, default_lanes
from .quasi import clear_stream_cache, quasi_stream

__all__ = [
    "SERIAL_LANES",
    "BenchmarkRecord",
    "price_option",
    "price_serial",
    "run_benchmark",
]

log = logging.getLogger(__name__)

# lanes value that marks rows produced by the straight-line implementation
SERIAL_LANES = 0


@dataclass(frozen=True)
class BenchmarkRecord:
    method: Method
    n_paths: int
    m: int
    lanes: int
    chunk: int
    seed: int
    price: float
    std_error: float
    elapsed: float
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def price_option(
    spec: OptionSpec,
    method: Method | str,
    *,
    m: int = 10,
    n_paths: int = 2**18,
    seed: int = 42,
    lanes: int | None = None,
    chunk: int = DEFAULT_CHUNK,
    serial: bool = False,
) -> PricingResult:
    method = Method(method)
    if serial and method is not Method.CLOSED_FORM:
        return price_serial(spec, method, m=m, n_paths=n_paths, seed=seed)
    if method is Method.CLOSED_FORM:
        return closed_form_price(spec)
    if method is Method.EUROPEAN_MC:
        return mc_european_price(spec, n_paths, seed, lanes, chunk)
    return price_american(spec, m, n_paths, seed, lanes, chunk)


def price_serial(
    spec: OptionSpec, method: Method | str, *, m: int = 10, n_paths: int = 2**18, seed: int = 42
) -> PricingResult:
    """One path at a time, no chunking and no worker threads.

    The quasi-normal matrix is drawn in one call; everything after that is a
    plain loop over paths.  Prices match the parallel engine bit for bit.
    """
    method = Method(method)
    if method is Method.CLOSED_FORM:
        return closed_form_price(spec)
    if n_paths < 2:
        raise DomainError(f"n_paths must be >= 2 for a standard error, got {n_paths}")
    start = time.perf_counter()
    values = np.empty(n_paths, dtype=np.float64)

    if method is Method.EUROPEAN_MC:
        if not spec.maturity > 0:
            raise DomainError("Monte Carlo pricing needs maturity > 0")
        z = quasi_stream(1, n_paths, seed).normals()[:, 0]
        t = spec.maturity
        discount = math.exp(-spec.rate * t)
        drift = (spec.rate - 0.5 * spec.volatility**2) * t
        diffusion = spec.volatility * math.sqrt(t)
        sign = 1.0 if spec.is_call else -1.0
        for p in range(n_paths):
            terminal = spec.spot * np.exp(np.float64(drift + diffusion * z[p]))
            values[p] = discount * max(sign * (terminal - spec.strike), 0.0)
        used_m = 0
    else:
        schedule = ExerciseSchedule(m, spec.maturity)
        z = quasi_stream(m, n_paths, seed).normals()
        drift = (spec.rate - 0.5 * spec.volatility**2) * schedule.dt
        diffusion = spec.volatility * math.sqrt(schedule.dt)
        for p in range(n_paths):
            row = spec.spot * np.exp(np.cumsum(drift + diffusion * z[p]))
            values[p] = backward_sweep(row, spec, schedule).values[0]
        used_m = m

    price, std_error = summarize(values, 1)
    elapsed = time.perf_counter() - start
    return PricingResult(price, std_error, n_paths, elapsed, method, seed, used_m, SERIAL_LANES, n_paths)


def _timed(fn, repeats: int) -> tuple[PricingResult, float]:
    fn()  # warm-up, untimed
    times = []
    result = None
    for _ in range(repeats):
        clear_stream_cache()
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return result, statistics.median(times)


def run_benchmark(
    spec: OptionSpec,
    m: int,
    path_counts: Sequence[int],
    lane_counts: Sequence[int],
    seed: int,
    *,
    method: Method | str = Method.AMERICAN_UB,
    chunk: int = DEFAULT_CHUNK,
    serial: bool = False,
    repeats: int = 3,
) -> list[BenchmarkRecord]:
    """Time every (path count, lane count) pair; a lanes = 1 baseline is always included.

    Each configuration gets one untimed warm-up, then ``repeats`` timed runs
    starting from cold permutation tables; the median is reported.  With
    ``serial`` an extra row per path count times :func:`price_serial`, marked
    by ``lanes == SERIAL_LANES``.  A failing configuration becomes a record
    with ``error`` set instead of aborting the sweep.
    """
    if not path_counts or not lane_counts:
        raise DomainError("path_counts and lane_counts must be non-empty")
    if repeats < 1:
        raise DomainError(f"repeats must be >= 1, got {repeats}")
    method = Method(method)
    lanes_list = sorted(set(lane_counts) | {1})
    used_m = m if method is Method.AMERICAN_UB else 0

    records: list[BenchmarkRecord] = []
    for n_paths in path_counts:
        configs = [(lanes, False) for lanes in lanes_list]
        if serial:
            configs.insert(0, (SERIAL_LANES, True))
        for lanes, is_serial in configs:
            label_chunk = n_paths if is_serial else chunk
            try:
                result, elapsed = _timed(
                    lambda: price_option(
                        spec,
                        method,
                        m=m,
                        n_paths=n_paths,
                        seed=seed,
                        lanes=max(lanes, 1),
                        chunk=chunk,
                        serial=is_serial,
                    ),
                    repeats,
                )
                records.append(
                    BenchmarkRecord(
                        method, n_paths, used_m, lanes, label_chunk, seed,
                        result.price, result.std_error, max(elapsed, 1e-9),
                    )
                )
                log.info("n_paths=%d lanes=%d elapsed=%.4fs", n_paths, lanes, elapsed)
            except Exception as exc:  # recorded, the sweep continues
                log.warning("configuration n_paths=%d lanes=%d failed: %s", n_paths, lanes, exc)
                records.append(
                    BenchmarkRecord(
                        method, n_paths, used_m, lanes, label_chunk, seed,
                        math.nan, math.nan, math.nan, error=str(exc),
                    )
                )
    return records


def speedups(records: Sequence[BenchmarkRecord]) -> dict[tuple[int, int], float]:
    """``elapsed(lanes=1) / elapsed(lanes=k)`` keyed by ``(n_paths, k)``."""
    base = {r.n_paths: r.elapsed for r in records if r.ok and r.lanes == 1}
    return {
        (r.n_paths, r.lanes): base[r.n_paths] / r.elapsed
        for r in records
        if r.ok and r.n_paths in base and r.lanes >= 1
    }


def default_lane_counts() -> list[int]:
    top = default_lanes()
    counts = [1]
    while counts[-1] * 2 <= max(top, 4):
        counts.append(counts[-1] * 2)
    return counts
