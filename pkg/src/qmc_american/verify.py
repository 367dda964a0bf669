"""Oracle-agreement checks behind the ``verify`` subcommand."""

from __future__ import annotations

import numpy as np
from dataclasses import dataclass
from typing import Callable

from .american import price_american
from .analytic import OptionKind, OptionSpec, bs_price, cnd, moro_inv_cnd
from .european import mc_european_price
from .oracles import TreeConfig, bs_quadrature, crr_price

__all__ = ["Check", "run_checks", "format_checks"]


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    tolerance: float
    passed: bool


def _check(name: str, value: float, tolerance: float, ok: Callable[[float], bool] | None = None) -> Check:
    passed = ok(value) if ok is not None else abs(value) <= tolerance
    return Check(name, float(value), tolerance, bool(passed))


def run_checks(spec: OptionSpec, n_paths: int = 2**16, seed: int = 42, lanes: int = 1) -> list[Check]:
    call = spec.replace(kind=OptionKind.CALL)
    put = spec.replace(kind=OptionKind.PUT)
    c, p = bs_price(call), bs_price(put)
    checks = [
        _check("closed-form call vs quadrature", c - bs_quadrature(call), 1e-5),
        _check("closed-form put vs quadrature", p - bs_quadrature(put), 1e-5),
        _check(
            "put-call parity (relative)",
            (c - p - (spec.spot - spec.strike * np.exp(-spec.rate * spec.maturity)))
            / max(spec.spot, spec.strike),
            1e-10,
        ),
    ]
    grid = np.linspace(0.001, 0.999, 1000)
    checks.append(_check("cnd(moro_inv_cnd(u)) - u, max over grid", np.max(np.abs(cnd(moro_inv_cnd(grid)) - grid)), 1e-6))

    crr_euro = crr_price(TreeConfig(2048, call), american=False)
    crr_amer = crr_price(TreeConfig(2048, call), american=True)
    checks.append(_check("CRR European call (2048 steps) vs closed form", crr_euro - c, 2e-3))
    checks.append(_check("CRR American call - CRR European call", crr_amer - crr_euro, 2e-3))

    mc = mc_european_price(call, n_paths, seed, lanes)
    checks.append(
        _check(
            "QMC European call vs closed form, in std errors",
            (mc.price - c) / mc.std_error if mc.std_error > 0 else 0.0,
            3.0,
        )
    )
    for m in (1, 10):
        am = price_american(call, m, n_paths, seed, lanes)
        slack = (am.price - max(c, crr_amer)) / am.std_error if am.std_error > 0 else am.price - c
        checks.append(
            _check(
                f"American upper bound (m={m}) minus max(European, CRR American), in std errors",
                slack,
                -3.0,
                ok=lambda v: v >= -3.0,
            )
        )
    return checks


def format_checks(checks: list[Check]) -> str:
    width = max(len(ch.name) for ch in checks)
    lines = [f"{'check'.ljust(width)}  {'value':>14}  {'tolerance':>10}  result"]
    for ch in checks:
        lines.append(
            f"{ch.name.ljust(width)}  {ch.value:14.6g}  {ch.tolerance:10.3g}  {'PASS' if ch.passed else 'FAIL'}"
        )
    return "\n".join(lines) + "\n"
