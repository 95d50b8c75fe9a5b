"""Exact gap and summand statistics of generalized Zeckendorf decompositions."""

from .asymptotics import (
    AsymptoticConstants,
    check_positivity,
    clt_diagnostics,
    compute_constants,
    double_factorial_check,
    fit_linear_asymptote,
    inequality_sweep,
    is_trivial,
    ks_distance,
    moments_direct,
    moments_recursive,
)
from .engine import Distribution, NegativeEntryError, RowTable, distribution, evolve, omega_ratio_series
from .pipeline import run, validate_table
from .plrs import PLRS, PLRSError, SequenceTable, build_plrs, dominant_root, growth_ratio_check, sequence
from .tables import CoefficientTable, HypothesisError, binomial_table, build_gap_table, build_summand_table
from .zeckendorf import (
    ALL,
    SIGMA,
    BudgetExceeded,
    Decomposition,
    GapProfile,
    Oracle,
    decompose,
    enumerate_interval,
    gap_profile,
    interval_partition,
    is_legal,
)

__version__ = "0.1.0"
