"""GBM path simulation over an exercise schedule, and the chunked engine.

Work is cut into contiguous chunks of paths whose boundaries depend only on
the chunk size.  Lanes (worker threads) pick chunks up in any order and write
into disjoint slices of a preallocated output, so the lane count can change
the wall-clock time of a run but never a single bit of its result.
"""

from __future__ import annotations

import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .analytic import OptionSpec
from .errors import CapacityError, DomainError
from .quasi import QuasiStream, quasi_stream

__all__ = [
    "DEFAULT_CHUNK",
    "default_lanes",
    "ExerciseSchedule",
    "PathBatch",
    "gbm_step",
    "simulate_rows",
    "simulate_batch",
    "run_chunks",
    "tree_reduce",
]

DEFAULT_CHUNK = 4096
# numpy arrays are indexed by intp; beyond this nothing is addressable
_ADDRESSABLE_BYTES = sys.maxsize


def default_lanes() -> int:
    return os.cpu_count() or 1


@dataclass(frozen=True)
class ExerciseSchedule:
    """``m`` early-exercise dates ``i*T/(m+1)`` followed by expiry ``T``."""

    m: int
    maturity: float
    dt: float = field(init=False)
    times: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise DomainError(f"m must be an integer >= 1, got {self.m}")
        if not (math.isfinite(self.maturity) and self.maturity > 0):
            raise DomainError(f"maturity must be > 0 for a schedule, got {self.maturity}")
        dt = self.maturity / (self.m + 1)
        times = np.empty(self.m + 1, dtype=np.float64)
        times[:-1] = np.arange(1, self.m + 1) * dt
        times[-1] = self.maturity
        times.setflags(write=False)
        object.__setattr__(self, "dt", dt)
        object.__setattr__(self, "times", times)

    @property
    def points(self) -> int:
        """Stored schedule points: the exercise dates plus expiry."""
        return self.m + 1


@dataclass(frozen=True)
class PathBatch:
    """Simulated prices, one row per path, one column per schedule point."""

    prices: np.ndarray
    spec: OptionSpec
    schedule: ExerciseSchedule
    seed: int

    @property
    def n_paths(self) -> int:
        return self.prices.shape[0]


def gbm_step(s_prev: float, dt: float, z: float, r: float, v: float) -> float:
    if not s_prev > 0:
        raise DomainError(f"gbm_step needs s_prev > 0, got {s_prev}")
    if not dt > 0:
        raise DomainError(f"gbm_step needs dt > 0, got {dt}")
    if v < 0:
        raise DomainError(f"gbm_step needs v >= 0, got {v}")
    return s_prev * math.exp((r - 0.5 * v * v) * dt + v * math.sqrt(dt) * z)


def simulate_rows(
    stream: QuasiStream, spec: OptionSpec, dt: float, start: int, stop: int
) -> np.ndarray:
    """Prices for paths ``start:stop``; column ``i`` is ``i + 1`` steps of size ``dt``."""
    z = stream.normals(start, stop)
    drift = (spec.rate - 0.5 * spec.volatility**2) * dt
    diffusion = spec.volatility * math.sqrt(dt)
    log_paths = np.cumsum(drift + diffusion * z, axis=1)
    return spec.spot * np.exp(log_paths)


def run_chunks(
    work: Callable[[int, int], None], n: int, chunk: int = DEFAULT_CHUNK, lanes: int = 1
) -> None:
    """Call ``work(start, stop)`` over fixed chunks of ``range(n)``.

    ``work`` must only write to the rows it is handed.
    """
    if chunk < 1 or lanes < 1:
        raise DomainError(f"chunk and lanes must be >= 1, got chunk={chunk}, lanes={lanes}")
    bounds = [(s, min(s + chunk, n)) for s in range(0, n, chunk)]
    if lanes == 1 or len(bounds) == 1:
        for start, stop in bounds:
            work(start, stop)
        return
    with ThreadPoolExecutor(max_workers=min(lanes, len(bounds))) as pool:
        for future in [pool.submit(work, start, stop) for start, stop in bounds]:
            future.result()


def check_capacity(n_paths: int, columns: int, itemsize: int = 8) -> int:
    required = n_paths * columns * itemsize
    if required > _ADDRESSABLE_BYTES:
        raise CapacityError(
            f"{n_paths} paths x {columns} points needs {required} bytes, "
            f"beyond the {_ADDRESSABLE_BYTES} addressable",
            required,
        )
    return required


def simulate_batch(
    spec: OptionSpec,
    schedule: ExerciseSchedule,
    n_paths: int,
    seed: int,
    lanes: int | None = None,
    chunk: int = DEFAULT_CHUNK,
) -> PathBatch:
    """Simulate ``n_paths`` GBM paths over every schedule point."""
    if n_paths < 1:
        raise DomainError(f"n_paths must be >= 1, got {n_paths}")
    lanes = default_lanes() if lanes is None else lanes
    if lanes < 1:
        raise DomainError(f"lanes must be >= 1, got {lanes}")
    required = check_capacity(n_paths, schedule.points)
    try:
        stream = quasi_stream(schedule.points, n_paths, seed, lanes)
        prices = np.empty((n_paths, schedule.points), dtype=np.float64)
    except MemoryError as exc:
        raise CapacityError(
            f"could not allocate {n_paths} paths x {schedule.points} points "
            f"(about {required} bytes)",
            required,
        ) from exc

    def work(start: int, stop: int) -> None:
        prices[start:stop] = simulate_rows(stream, spec, schedule.dt, start, stop)

    run_chunks(work, n_paths, chunk, lanes)
    prices.setflags(write=False)
    return PathBatch(prices=prices, spec=spec, schedule=schedule, seed=seed)


_PARALLEL_ADD_MIN = 1 << 16


def tree_reduce(values, lanes: int = 1) -> float:
    """Sum by repeated halving: element ``i`` absorbs element ``i + half``.

    An odd leftover is carried to the next round.  The pairing depends only
    on the length of ``values``; lanes split each round's additions into
    disjoint slices, which cannot change any individual sum.
    """
    a = np.array(values, dtype=np.float64).reshape(-1)
    if a.size == 0:
        raise DomainError("tree_reduce needs at least one value")
    if lanes < 1:
        raise DomainError(f"lanes must be >= 1, got {lanes}")
    pool = ThreadPoolExecutor(max_workers=lanes) if lanes > 1 and a.size >= 2 * _PARALLEL_ADD_MIN else None
    try:
        n = a.size
        while n > 1:
            half = n // 2
            if pool is not None and half >= _PARALLEL_ADD_MIN:
                step = -(-half // lanes)
                cuts = [(s, min(s + step, half)) for s in range(0, half, step)]
                futures = [
                    pool.submit(np.add, a[s:e], a[half + s : half + e], out=a[s:e]) for s, e in cuts
                ]
                for f in futures:
                    f.result()
            else:
                np.add(a[:half], a[half : 2 * half], out=a[:half])
            if n % 2:
                a[half] = a[n - 1]
                n = half + 1
            else:
                n = half
    finally:
        if pool is not None:
            pool.shutdown()
    return float(a[0])
