"""Closed-form Black-Scholes pricing, the normal CDF and its Moro inverse.

Everything here is a pure function of its arguments.  ``cnd`` and
``moro_inv_cnd`` accept scalars or numpy arrays and return the same kind.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "OptionKind",
    "OptionSpec",
    "cnd",
    "moro_inv_cnd",
    "bs_price",
    "bs_call_array",
    "intrinsic",
]


class OptionKind(str, enum.Enum):
    CALL = "call"
    PUT = "put"


@dataclass(frozen=True)
class OptionSpec:
    """Contract and market parameters for a single vanilla option.

    ``rate`` is continuously compounded, ``volatility`` annualized and
    ``maturity`` in years.
    """

    spot: float
    strike: float
    rate: float
    volatility: float
    maturity: float
    kind: OptionKind = OptionKind.CALL

    def __post_init__(self):
        for name in ("spot", "strike", "rate", "volatility", "maturity"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
        if self.spot <= 0:
            raise DomainError(f"spot must be > 0, got {self.spot}")
        if self.strike <= 0:
            raise DomainError(f"strike must be > 0, got {self.strike}")
        if self.volatility < 0:
            raise DomainError(f"volatility must be >= 0, got {self.volatility}")
        if self.maturity < 0:
            raise DomainError(f"maturity must be >= 0, got {self.maturity}")
        object.__setattr__(self, "kind", OptionKind(self.kind))

    @property
    def is_call(self) -> bool:
        return self.kind is OptionKind.CALL

    def replace(self, **changes) -> "OptionSpec":
        fields = dict(
            spot=self.spot,
            strike=self.strike,
            rate=self.rate,
            volatility=self.volatility,
            maturity=self.maturity,
            kind=self.kind,
        )
        fields.update(changes)
        return OptionSpec(**fields)


# Hart (1968) double-precision rational approximation, algorithm 5666, in the
# Horner layout given by G. West, "Better approximations to cumulative normal
# functions" (Wilmott, 2005).  Absolute error is at the level of 1e-15.
_HART_NUM = (
    3.52624965998911e-02,
    0.700383064443688,
    6.37396220353165,
    33.912866078383,
    112.079291497871,
    221.213596169931,
    220.206867912376,
)
_HART_DEN = (
    8.83883476483184e-02,
    1.75566716318264,
    16.064177579207,
    86.7807322029461,
    296.564248779674,
    637.333633378831,
    793.826512519948,
    440.413735824752,
)
_HART_SWITCH = 7.07106781186547
_SQRT_2PI = 2.506628274631


def _lower_tail(a: np.ndarray) -> np.ndarray:
    """Phi(-a) for a >= 0."""
    out = np.zeros_like(a)
    e = np.exp(-0.5 * a * a)
    central = a < _HART_SWITCH
    if central.any():
        x = a[central]
        num = np.full_like(x, _HART_NUM[0])
        for c in _HART_NUM[1:]:
            num = num * x + c
        den = np.full_like(x, _HART_DEN[0])
        for c in _HART_DEN[1:]:
            den = den * x + c
        out[central] = e[central] * num / den
    far = ~central & (a <= 37.0)
    if far.any():
        x = a[far]
        b = x + 1.0 / (x + 2.0 / (x + 3.0 / (x + 4.0 / (x + 0.65))))
        out[far] = e[far] / b / _SQRT_2PI
    return out


def cnd(d):
    """Standard normal cumulative distribution function.

    The lower tail is evaluated directly and the upper half is taken as its
    complement, so ``cnd(-d) == 1 - cnd(d)`` holds to rounding.
    """
    arr = np.asarray(d, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise DomainError("cnd requires finite input")
    flat = arr.reshape(-1)
    tail = _lower_tail(np.abs(flat))
    out = np.where(flat > 0, 1.0 - tail, tail).reshape(arr.shape)
    if out.ndim == 0:
        return float(out)
    return out


# Moro (1995), "The full Monte Carlo", Risk 8(2): Beasley-Springer rational
# form for |u - 1/2| < 0.42 and a Chebyshev series in log(-log(r)) for the
# tails.  Coefficients as published there.
_MORO_A = (2.50662823884, -18.61500062529, 41.39119773534, -25.44106049637)
_MORO_B = (-8.47351093090, 23.08336743743, -21.06224101826, 3.13082909833)
_MORO_C = (
    0.3374754822726147,
    0.9761690190917186,
    0.1607979714918209,
    0.0276438810333863,
    0.0038405729373609,
    0.0003951896511919,
    0.0000321767881768,
    0.0000002888167364,
    0.0000003960315187,
)


def moro_inv_cnd(u):
    """Inverse of ``cnd`` by Moro's approximation; ``u`` must lie in (0, 1)."""
    arr = np.asarray(u, dtype=np.float64)
    if not np.all((arr > 0.0) & (arr < 1.0)):
        raise DomainError("moro_inv_cnd requires 0 < u < 1 for every entry")
    flat = arr.reshape(-1)
    y = flat - 0.5
    out = np.empty_like(flat)

    central = np.abs(y) < 0.42
    if central.any():
        yc = y[central]
        r = yc * yc
        a0, a1, a2, a3 = _MORO_A
        b0, b1, b2, b3 = _MORO_B
        num = yc * (((a3 * r + a2) * r + a1) * r + a0)
        den = (((b3 * r + b2) * r + b1) * r + b0) * r + 1.0
        out[central] = num / den

    tails = ~central
    if tails.any():
        yt = y[tails]
        r = np.where(yt < 0, flat[tails], 1.0 - flat[tails])
        s = np.log(-np.log(r))
        t = np.full_like(s, _MORO_C[-1])
        for c in _MORO_C[-2::-1]:
            t = t * s + c
        out[tails] = np.where(yt < 0, -t, t)

    out = out.reshape(arr.shape)
    if out.ndim == 0:
        return float(out)
    return out


def intrinsic(spot, strike: float, kind: OptionKind = OptionKind.CALL):
    if OptionKind(kind) is OptionKind.CALL:
        return np.maximum(np.subtract(spot, strike), 0.0)
    return np.maximum(np.subtract(strike, spot), 0.0)


def bs_price(spec: OptionSpec) -> float:
    """Black-Scholes value of a European call or put.

    Zero maturity returns intrinsic value; zero volatility returns the
    discounted payoff on the deterministic forward.
    """
    if not isinstance(spec, OptionSpec):
        raise DomainError("bs_price expects an OptionSpec")
    s, x, r, v, t = spec.spot, spec.strike, spec.rate, spec.volatility, spec.maturity
    sign = 1.0 if spec.is_call else -1.0

    if t == 0.0:
        return max(sign * (s - x), 0.0)
    discount = math.exp(-r * t)
    if v == 0.0:
        return max(sign * (s * math.exp(r * t) - x), 0.0) * discount

    vol_sqrt_t = v * math.sqrt(t)
    d1 = (math.log(s / x) + (r + 0.5 * v * v) * t) / vol_sqrt_t
    d2 = d1 - vol_sqrt_t
    if spec.is_call:
        value = s * cnd(d1) - x * discount * cnd(d2)
    else:
        value = x * discount * cnd(-d2) - s * cnd(-d1)
    return max(value, 0.0)


def bs_call_array(spot: np.ndarray, strike: float, rate: float, volatility: float, tau: float) -> np.ndarray:
    """Vectorized Black-Scholes call over an array of spots, ``tau > 0``."""
    spot = np.asarray(spot, dtype=np.float64)
    discount = math.exp(-rate * tau)
    if volatility == 0.0:
        return np.maximum(spot * math.exp(rate * tau) - strike, 0.0) * discount
    vol_sqrt_t = volatility * math.sqrt(tau)
    d1 = (np.log(spot / strike) + (rate + 0.5 * volatility * volatility) * tau) / vol_sqrt_t
    d2 = d1 - vol_sqrt_t
    return np.maximum(spot * cnd(d1) - strike * discount * cnd(d2), 0.0)
