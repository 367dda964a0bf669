"""Foresight upper bound for the American call by backward induction.

Each path is valued as if its whole future were known.  On the last
exercise date the holder compares intrinsic value with the Black-Scholes
value of the remaining interval; on every earlier date, including today,
intrinsic value is compared with the discounted value one date later.  The
pathwise maximum over exercise dates makes the average an upper bound on
the Bermudan (and American) price, and it never falls below the European
price because continuing to the final interval is always one of the choices.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .analytic import OptionSpec, bs_call_array
from .errors import DomainError
from .european import Method, PricingResult, summarize
from .paths import (
    DEFAULT_CHUNK,
    ExerciseSchedule,
    check_capacity,
    default_lanes,
    run_chunks,
    simulate_rows,
)
from .quasi import quasi_stream

__all__ = [
    "SweepTrace",
    "ConvergenceCurve",
    "backward_sweep",
    "sweep_rows",
    "price_american",
    "convergence_curve",
]


def _require_call(spec: OptionSpec) -> None:
    if not spec.is_call:
        raise NotImplementedError(
            "American puts are not implemented: the foresight sweep is defined for calls only"
        )


@dataclass(frozen=True)
class SweepTrace:
    """Option values along one path.

    ``values[0]`` is today's value, ``values[1:m+1]`` the exercise dates and
    ``values[m+1]`` the payoff at expiry.  ``exercise_point`` is the first
    index (0 = today) where intrinsic value strictly beat continuation.
    """

    values: np.ndarray
    exercise_point: int | None

    @property
    def price(self) -> float:
        return float(self.values[0])


def backward_sweep(path: np.ndarray, spec: OptionSpec, schedule: ExerciseSchedule) -> SweepTrace:
    _require_call(spec)
    row = np.asarray(path, dtype=np.float64).reshape(-1)
    m = schedule.m
    if row.size not in (m, m + 1):
        raise DomainError(
            f"path has {row.size} points but the schedule needs {m + 1} (or {m} without expiry)"
        )
    x, dt = spec.strike, schedule.dt
    disc = math.exp(-spec.rate * dt)

    values = np.zeros(m + 2, dtype=np.float64)
    chose_intrinsic = np.zeros(m + 1, dtype=bool)
    if row.size == m + 1:
        values[m + 1] = max(row[m] - x, 0.0)

    last = row[m - 1]
    continuation = bs_call_array(np.array([last]), x, spec.rate, spec.volatility, dt)[0]
    exercise = max(last - x, 0.0)
    values[m] = max(exercise, continuation)
    chose_intrinsic[m] = exercise > continuation
    spots = np.concatenate(([spec.spot], row[: m - 1]))
    for i in range(m - 1, -1, -1):
        exercise = max(spots[i] - x, 0.0)
        continuation = values[i + 1] * disc
        values[i] = max(exercise, continuation)
        chose_intrinsic[i] = exercise > continuation

    hits = np.flatnonzero(chose_intrinsic)
    return SweepTrace(values=values, exercise_point=int(hits[0]) if hits.size else None)


def sweep_rows(prices: np.ndarray, spec: OptionSpec, schedule: ExerciseSchedule) -> np.ndarray:
    """Today's value for each row of ``prices`` (columns are the exercise dates)."""
    m, x, dt = schedule.m, spec.strike, schedule.dt
    disc = math.exp(-spec.rate * dt)
    last = prices[:, m - 1]
    c = np.maximum(np.maximum(last - x, 0.0), bs_call_array(last, x, spec.rate, spec.volatility, dt))
    for i in range(m - 2, -1, -1):
        c = np.maximum(np.maximum(prices[:, i] - x, 0.0), c * disc)
    return np.maximum(max(spec.spot - x, 0.0), c * disc)


def price_american(
    spec: OptionSpec,
    m: int,
    n_paths: int,
    seed: int,
    lanes: int | None = None,
    chunk: int = DEFAULT_CHUNK,
) -> PricingResult:
    """Average foresight value over ``n_paths`` quasi paths with ``m`` exercise dates."""
    _require_call(spec)
    if n_paths < 2:
        raise DomainError(f"n_paths must be >= 2 for a standard error, got {n_paths}")
    schedule = ExerciseSchedule(m, spec.maturity)
    lanes = default_lanes() if lanes is None else lanes
    check_capacity(n_paths, m)
    start = time.perf_counter()

    # expiry is priced in closed form, so only the m exercise dates are simulated;
    # they coincide with the first m columns of simulate_batch
    stream = quasi_stream(m, n_paths, seed, lanes)
    path_values = np.empty(n_paths, dtype=np.float64)

    def work(lo: int, hi: int) -> None:
        rows = simulate_rows(stream, spec, schedule.dt, lo, hi)
        path_values[lo:hi] = sweep_rows(rows, spec, schedule)

    run_chunks(work, n_paths, chunk, lanes)
    price, std_error = summarize(path_values, lanes)
    elapsed = time.perf_counter() - start
    return PricingResult(price, std_error, n_paths, elapsed, Method.AMERICAN_UB, seed, m, lanes, chunk)


@dataclass(frozen=True)
class ConvergenceCurve:
    results: tuple[PricingResult, ...]

    @property
    def rows(self) -> list[tuple[int, float, float]]:
        return [(r.m, r.price, r.std_error) for r in self.results]

    def __len__(self) -> int:
        return len(self.results)


def convergence_curve(
    spec: OptionSpec,
    m_values: Sequence[int],
    n_paths: int,
    seed: int,
    lanes: int | None = None,
    chunk: int = DEFAULT_CHUNK,
) -> ConvergenceCurve:
    """Price the foresight bound once per exercise-point count, sorted by ``m``."""
    if len(m_values) == 0:
        raise DomainError("m_values must not be empty")
    for m in m_values:
        if int(m) != m or m < 1:
            raise DomainError(f"every m must be an integer >= 1, got {m}")
    results = [price_american(spec, int(m), n_paths, seed, lanes, chunk) for m in sorted(m_values)]
    return ConvergenceCurve(tuple(results))
