"""Exact evolution of two-dimensional recurrences over rows of integer counts."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import IO, Iterable, Mapping, Sequence

import numpy as np

from .plrs import RatioConvergence, ratio_convergence
from .tables import CoefficientTable

ORACLE = "oracle"
EVOLVED = "evolved"
SEED = "seed"


class NegativeEntryError(ArithmeticError):
    """An evolved count came out negative: bad seeds or a bad table."""


def _trim(row: Sequence[int]) -> list[int]:
    row = [int(x) for x in row]
    while row and row[-1] == 0:
        row.pop()
    return row


@dataclass(frozen=True)
class RowTable:
    """Rows ``p_{n,0..k_max}`` keyed by ``n``; missing rows and entries are zero."""

    rows: Mapping[int, tuple[int, ...]]
    provenance: Mapping[int, str] = field(default_factory=dict)

    @classmethod
    def from_rows(cls, rows: Mapping[int, Sequence[int]], provenance: str = ORACLE) -> "RowTable":
        rows = {int(n): tuple(_trim(r)) for n, r in sorted(rows.items())}
        return cls(rows, {n: provenance for n in rows})

    def row(self, n: int) -> tuple[int, ...]:
        return self.rows.get(n, ())

    def omega(self, n: int) -> int:
        return sum(self.rows.get(n, ()))

    @property
    def ns(self) -> list[int]:
        return sorted(self.rows)

    @property
    def seed_range(self) -> tuple[int, int]:
        seeds = [n for n in self.ns if self.provenance.get(n) != EVOLVED]
        return (min(seeds), max(seeds) + 1) if seeds else (0, 0)

    def __contains__(self, n: int) -> bool:
        return n in self.rows

    def to_jsonl(self, fh: IO[str]) -> None:
        for n in self.ns:
            rec = {"n": n, "provenance": self.provenance.get(n, ORACLE), "row": [str(x) for x in self.rows[n]]}
            fh.write(json.dumps(rec) + "\n")

    @classmethod
    def from_jsonl(cls, lines: Iterable[str]) -> "RowTable":
        rows, prov = {}, {}
        for line in lines:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            n = int(rec["n"])
            rows[n] = tuple(int(x) for x in rec["row"])
            prov[n] = rec.get("provenance", ORACLE)
        return cls(dict(sorted(rows.items())), prov)


def evolve(table: CoefficientTable, seeds: RowTable, n_target: int) -> RowTable:
    """Extend ``seeds`` up to ``n_target`` with the table's recurrence.

    Evolution starts right after the last seed row; the ``i0`` rows below it
    must be present.
    """
    start = max(seeds.ns) + 1
    needed = range(start - table.i0, start)
    missing = [n for n in needed if n not in seeds]
    if missing:
        raise ValueError(f"seeds lack rows {missing} needed to evolve from n={start}")
    terms = table.terms()
    rows: dict[int, np.ndarray] = {n: np.array(r, dtype=object) for n, r in seeds.rows.items()}
    prov = dict(seeds.provenance)
    for n in range(start, n_target + 1):
        width = max((len(rows.get(n - i, ())) + j for i, j, _ in terms), default=0)
        out = np.zeros(width, dtype=object)
        for i, j, v in terms:
            prev = rows.get(n - i)
            if prev is None or len(prev) == 0:
                continue
            out[j : j + len(prev)] += v * prev
        row = _trim(out.tolist())
        if any(x < 0 for x in row):
            k = next(k for k, x in enumerate(row) if x < 0)
            raise NegativeEntryError(f"p[{n},{k}] = {row[k]} < 0 for table {table.label or table.kind}")
        rows[n] = np.array(row, dtype=object)
        prov[n] = EVOLVED
    out_rows = {n: tuple(int(x) for x in r) for n, r in sorted(rows.items())}
    return RowTable(out_rows, prov)


@dataclass(frozen=True)
class Distribution:
    n: int
    probs: tuple[float, ...]
    counts: tuple[int, ...]

    @property
    def omega(self) -> int:
        return sum(self.counts)


def distribution(rows: RowTable, n: int) -> Distribution:
    if n not in rows:
        raise KeyError(f"row {n} not present")
    counts = rows.row(n)
    total = sum(counts)
    if total == 0:
        raise ZeroDivisionError(f"row {n} is empty (Omega_n = 0)")
    # int / int true division is correctly rounded for arbitrarily large operands.
    return Distribution(n, tuple(p / total for p in counts), tuple(counts))


def omega_ratio_series(rows: RowTable, lambda1: float) -> RatioConvergence:
    """``|Omega_{n-1}/Omega_n - 1/lambda1|`` over consecutive stored rows."""
    ns = [n for n in rows.ns if n - 1 in rows and rows.omega(n) > 0]
    if len(ns) < 20:
        raise ValueError("need at least 20 consecutive rows")
    errs = [abs(rows.omega(n - 1) / rows.omega(n) - 1.0 / lambda1) for n in ns]
    return ratio_convergence(ns, errs)
