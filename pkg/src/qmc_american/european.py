"""Quasi-Monte Carlo European pricing and the shared result record."""

from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass

import numpy as np

from .analytic import OptionSpec, bs_price
from .errors import DomainError
from .paths import DEFAULT_CHUNK, default_lanes, run_chunks, simulate_rows, tree_reduce
from .quasi import quasi_stream

__all__ = ["Method", "PricingResult", "summarize", "closed_form_price", "mc_european_price"]


class Method(str, enum.Enum):
    CLOSED_FORM = "closed-form"
    EUROPEAN_MC = "european-mc"
    AMERICAN_UB = "american-ub"


@dataclass(frozen=True)
class PricingResult:
    """One price estimate.

    ``m`` is the exercise-point count (0 where no schedule is involved);
    ``lanes`` and ``chunk`` record the execution layout, which never affects
    ``price`` or ``std_error``.
    """

    price: float
    std_error: float
    n_paths: int
    elapsed: float
    method: Method
    seed: int
    m: int = 0
    lanes: int = 1
    chunk: int = DEFAULT_CHUNK


def summarize(values: np.ndarray, lanes: int = 1) -> tuple[float, float]:
    """Sample mean and standard error of the mean, both via ``tree_reduce``."""
    n = values.size
    mean = tree_reduce(values, lanes) / n
    if n < 2:
        return mean, 0.0
    var = tree_reduce(np.square(values - mean), lanes) / (n - 1)
    return mean, math.sqrt(var / n)


def closed_form_price(spec: OptionSpec) -> PricingResult:
    start = time.perf_counter()
    price = bs_price(spec)
    elapsed = time.perf_counter() - start
    return PricingResult(price, 0.0, 1, elapsed, Method.CLOSED_FORM, 0, lanes=1)


def mc_european_price(
    spec: OptionSpec,
    n_paths: int,
    seed: int,
    lanes: int | None = None,
    chunk: int = DEFAULT_CHUNK,
) -> PricingResult:
    """Discounted mean terminal payoff over ``n_paths`` one-step quasi paths."""
    if n_paths < 2:
        raise DomainError(f"n_paths must be >= 2 for a standard error, got {n_paths}")
    if not spec.maturity > 0:
        raise DomainError("Monte Carlo pricing needs maturity > 0")
    lanes = default_lanes() if lanes is None else lanes
    start = time.perf_counter()

    stream = quasi_stream(1, n_paths, seed, lanes)
    discount = math.exp(-spec.rate * spec.maturity)
    sign = 1.0 if spec.is_call else -1.0
    discounted = np.empty(n_paths, dtype=np.float64)

    def work(lo: int, hi: int) -> None:
        terminal = simulate_rows(stream, spec, spec.maturity, lo, hi)[:, 0]
        discounted[lo:hi] = discount * np.maximum(sign * (terminal - spec.strike), 0.0)

    run_chunks(work, n_paths, chunk, lanes)
    price, std_error = summarize(discounted, lanes)
    elapsed = time.perf_counter() - start
    return PricingResult(price, std_error, n_paths, elapsed, Method.EUROPEAN_MC, seed, 0, lanes, chunk)
