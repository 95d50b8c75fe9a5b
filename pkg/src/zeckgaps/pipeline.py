"""Glue between the oracle, the coefficient tables and the engine."""

from __future__ import annotations

from dataclasses import dataclass, field

from .engine import ORACLE, RowTable, evolve
from .plrs import PLRS, sequence
from .tables import CoefficientTable, table_for
from .zeckendorf import DEFAULT_BUDGET, SIGMA, Mode, Oracle


def seed_window(table: CoefficientTable) -> range:
    """The ``i0`` consecutive rows starting at ``n0`` used to start evolution."""
    return range(table.n0, table.n0 + table.i0)


def oracle_seeds(plrs: PLRS, table: CoefficientTable, budget: int = DEFAULT_BUDGET) -> RowTable:
    window = seed_window(table)
    oracle = Oracle(plrs, window[-1], budget)
    mode: Mode = SIGMA if table.kind == "summands" else int(table.g)
    return RowTable.from_rows({n: oracle.row(mode, n) for n in window}, ORACLE)


def run(plrs: PLRS, mode: Mode, n_target: int, budget: int = DEFAULT_BUDGET) -> tuple[CoefficientTable, RowTable]:
    """Build the table for ``mode`` and evolve oracle seeds up to ``n_target``."""
    table = table_for(plrs, mode)
    seeds = oracle_seeds(plrs, table, budget)
    return table, evolve(table, seeds, n_target)


@dataclass
class ValidationReport:
    label: str
    checked: list[int] = field(default_factory=list)
    mismatches: list[tuple[int, int, int, int]] = field(default_factory=list)  # (n, k, oracle, recurrence)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def validate_table(table: CoefficientTable, plrs: PLRS, depth: int, budget: int = DEFAULT_BUDGET) -> ValidationReport:
    """Compare recurrence rows against brute-force rows for ``n0 <= n <= depth``, every k."""
    oracle = Oracle(plrs, depth, budget)
    mode: Mode = SIGMA if table.kind == "summands" else int(table.g)
    seeds = RowTable.from_rows({n: oracle.row(mode, n) for n in seed_window(table)}, ORACLE)
    rows = evolve(table, seeds, depth)
    report = ValidationReport(table.label or table.kind)
    for n in range(table.n0, depth + 1):
        expected = oracle.row(mode, n)
        got = list(rows.row(n))
        report.checked.append(n)
        for k in range(max(len(expected), len(got))):
            e = expected[k] if k < len(expected) else 0
            r = got[k] if k < len(got) else 0
            if e != r:
                report.mismatches.append((n, k, e, r))
    return report


def max_oracle_depth(plrs: PLRS, width: int) -> int:
    """Largest n with ``G_{n+1} - G_n <= width``."""
    n = 1
    while True:
        seq = sequence(plrs, n + 2)
        if seq.G(n + 2) - seq.G(n + 1) > width:
            return n
        n += 1
