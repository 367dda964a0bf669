"""Independent reference prices used only for verification.

Nothing in the pricing path imports this module.  The normal density is
written out here with ``math.exp`` so the quadrature never touches the
package's own CDF approximation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate, optimize

from .analytic import OptionSpec
from .errors import DomainError, NumericError

__all__ = [
    "TreeConfig",
    "crr_price",
    "normal_pdf",
    "normal_cdf_quadrature",
    "inverse_cdf_bisection",
    "discounted_expectation",
    "bs_quadrature",
]

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
_Z_RANGE = 10.0
_QUAD_TOL = 1e-6


@dataclass(frozen=True)
class TreeConfig:
    steps: int
    spec: OptionSpec

    def __post_init__(self):
        if int(self.steps) != self.steps or self.steps < 1:
            raise DomainError(f"steps must be an integer >= 1, got {self.steps}")
        if not self.spec.maturity > 0:
            raise DomainError("a binomial tree needs maturity > 0")


def crr_price(config: TreeConfig, american: bool) -> float:
    """Cox-Ross-Rubinstein recombining tree."""
    spec, n = config.spec, config.steps
    s0, x, r, v, t = spec.spot, spec.strike, spec.rate, spec.volatility, spec.maturity
    sign = 1.0 if spec.is_call else -1.0
    dt = t / n
    disc = math.exp(-r * dt)

    if v == 0.0:
        # u = d = 1 leaves the probability undefined; the tree is one path
        # growing at the riskless rate
        k = np.arange(n + 1)
        spots = s0 * np.exp(r * dt * k)
        payoff = np.maximum(sign * (spots - x), 0.0) * np.exp(-r * dt * k)
        return float(payoff.max() if american else payoff[-1])

    u = math.exp(v * math.sqrt(dt))
    d = 1.0 / u
    p = (math.exp(r * dt) - d) / (u - d)
    if not 0.0 <= p <= 1.0:
        raise DomainError(
            f"risk-neutral probability {p:.6g} outside [0, 1] for rate={r}, "
            f"volatility={v}, steps={n} (dt={dt:.6g}); use more steps"
        )

    ups = np.arange(n + 1)
    values = np.maximum(sign * (s0 * np.exp(v * math.sqrt(dt) * (2 * ups - n)) - x), 0.0)
    for i in range(n - 1, -1, -1):
        values = disc * (p * values[1 : i + 2] + (1.0 - p) * values[: i + 1])
        if american:
            j = np.arange(i + 1)
            spots = s0 * np.exp(v * math.sqrt(dt) * (2 * j - i))
            values = np.maximum(values, sign * (spots - x))
    return float(values[0])


def normal_pdf(z: float) -> float:
    return _INV_SQRT_2PI * math.exp(-0.5 * z * z)


def normal_cdf_quadrature(d: float) -> float:
    if d <= 0:
        value, err = integrate.quad(normal_pdf, -math.inf, d, epsabs=1e-14, epsrel=1e-13)
    else:
        half, err = integrate.quad(normal_pdf, 0.0, d, epsabs=1e-14, epsrel=1e-13)
        value = 0.5 + half
    if err > 1e-10:
        raise NumericError(f"normal CDF quadrature at {d} reached only {err:.2e}")
    return value


def inverse_cdf_bisection(u: float, tol: float = 1e-12) -> float:
    if not 0.0 < u < 1.0:
        raise DomainError(f"u must lie in (0, 1), got {u}")
    return optimize.bisect(lambda z: normal_cdf_quadrature(z) - u, -40.0, 40.0, xtol=tol)


def discounted_expectation(
    spec: OptionSpec, payoff: Callable[[float], float], kink: float | None = None
) -> float:
    """``exp(-rT) E[payoff(S_T)]`` under the lognormal terminal law.

    Integrated in the standard-normal variable over +-10 deviations, split at
    the terminal price ``kink`` where the payoff has a corner.
    """
    s0, r, v, t = spec.spot, spec.rate, spec.volatility, spec.maturity
    if not (t > 0 and v > 0):
        raise DomainError("quadrature needs maturity > 0 and volatility > 0")
    drift = (r - 0.5 * v * v) * t
    scale = v * math.sqrt(t)

    def integrand(z: float) -> float:
        return payoff(s0 * math.exp(drift + scale * z)) * normal_pdf(z)

    cuts = [-_Z_RANGE, _Z_RANGE]
    if kink is not None and kink > 0:
        z_kink = (math.log(kink / s0) - drift) / scale
        if -_Z_RANGE < z_kink < _Z_RANGE:
            cuts.insert(1, z_kink)

    total = 0.0
    achieved = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        value, err = integrate.quad(integrand, a, b, epsabs=1e-10, epsrel=1e-12, limit=200)
        total += value
        achieved += err
    if achieved > _QUAD_TOL:
        raise NumericError(f"quadrature did not converge: achieved {achieved:.2e} > {_QUAD_TOL}")
    return math.exp(-r * t) * total


def bs_quadrature(spec: OptionSpec) -> float:
    x = spec.strike
    if spec.is_call:
        return discounted_expectation(spec, lambda s: max(s - x, 0.0), kink=x)
    return discounted_expectation(spec, lambda s: max(x - s, 0.0), kink=x)
