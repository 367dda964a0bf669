"""Quasi-Monte Carlo pricing of American calls by a foresight upper bound."""

from .american import ConvergenceCurve, SweepTrace, backward_sweep, convergence_curve, price_american
from .analytic import OptionKind, OptionSpec, bs_price, cnd, moro_inv_cnd
from .errors import CapacityError, DomainError, NumericError
from .european import Method, PricingResult, mc_european_price
from .paths import ExerciseSchedule, PathBatch, gbm_step, simulate_batch, tree_reduce
from .quasi import QuasiStream, lcg_permute, to_normal, uniform_matrix

__all__ = [
    "CapacityError",
    "ConvergenceCurve",
    "DomainError",
    "ExerciseSchedule",
    "Method",
    "NumericError",
    "OptionKind",
    "OptionSpec",
    "PathBatch",
    "PricingResult",
    "QuasiStream",
    "SweepTrace",
    "backward_sweep",
    "bs_price",
    "cnd",
    "convergence_curve",
    "gbm_step",
    "lcg_permute",
    "mc_european_price",
    "moro_inv_cnd",
    "price_american",
    "simulate_batch",
    "to_normal",
    "tree_reduce",
    "uniform_matrix",
]

__version__ = "0.1.0"
