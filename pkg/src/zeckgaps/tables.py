"""Coefficient tables ``t_{i,j}`` of the two-dimensional count recurrences.

A table encodes ``p_{n,k} = sum_{i,j} t_{i,j} p_{n-i,k-j}``. Gap tables come in
three shapes (gap size 0, 1, and at least 2); the summand table has unit
entries on a staircase of shifts.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field

from .plrs import PLRS, positive_root

GAP_SIZE_CAP = 16


class HypothesisError(ValueError):
    """The recurrence does not satisfy the hypotheses a table construction needs."""


@dataclass(frozen=True)
class CoefficientTable:
    kind: str  # "gap", "summands" or "custom"
    i0: int
    j0: int
    t: dict[tuple[int, int], int]
    n0: int
    k0: int = 0
    g: int | None = None
    d: tuple[int, ...] = ()
    c_star: tuple[int, ...] = ()
    label: str = field(default="", compare=False)

    @property
    def hat_t(self) -> tuple[int, ...]:
        """Lag marginals ``sum_j t_{i,j}`` for ``i = 1..i0``."""
        out = [0] * self.i0
        for (i, _), v in self.t.items():
            out[i - 1] += v
        return tuple(out)

    def terms(self) -> list[tuple[int, int, int]]:
        return sorted((i, j, v) for (i, j), v in self.t.items())

    @property
    def mode(self):
        return "sigma" if self.kind == "summands" else self.g

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == "gap":
            out["g"] = self.g
        out.update(i0=self.i0, j0=self.j0, t=[list(x) for x in self.terms()])
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _collect(entries: dict[tuple[int, int], int]) -> dict[tuple[int, int], int]:
    return {key: v for key, v in sorted(entries.items()) if v != 0}


def build_gap_table(plrs: PLRS, g: int, g_max: int = GAP_SIZE_CAP) -> CoefficientTable:
    if not plrs.all_positive:
        raise HypothesisError("gap recurrence requires all c_i > 0")
    if g < 0:
        raise ValueError("gap size must be non-negative")
    if g > g_max:
        raise ValueError(f"gap size {g} above cap {g_max}")
    c, L = plrs.coeffs, plrs.L
    d = plrs.prefix_sums
    c_star = c[:-1] + (c[-1] - 1,)
    t: dict[tuple[int, int], int] = defaultdict(int)

    def diff2(lag: int, shift: int, weight: int) -> None:
        # weight * ((p[lag, k-shift] - p[lag, k-shift+1]) - (p[lag+1, k-shift] - p[lag+1, k-shift+1]))
        t[lag, shift] += weight
        t[lag, shift - 1] -= weight
        t[lag + 1, shift] -= weight
        t[lag + 1, shift - 1] += weight

    if g == 0:
        for i in range(1, L + 1):
            base = d[i - 1] - (i - 1)
            for j in range(1, c[i - 1]):
                t[i, base + j - 1] += 1
            t[i, base] += 1
        i0 = L
    elif g == 1:
        t[1, 0] += 1
        for i in range(1, L + 1):
            t[i, i - 1] += c[i - 1] - 1
            if i >= 2:
                t[i, i - 2] += 1
            diff2(i, i, c[i - 1] - 1)
        i0 = L + 1
    else:
        for i in range(1, L + 1):
            t[i, 0] += c[i - 1]
            diff2(i + g - 1, 1, c_star[i - 1])
        i0 = L + g
    return CoefficientTable(
        kind="gap",
        i0=i0,
        j0=d[L],
        t=_collect(t),
        n0=L + g,
        k0=d[L],
        g=g,
        d=d,
        c_star=c_star,
        label=f"plrs={plrs} g={g}",
    )


def build_summand_table(plrs: PLRS) -> CoefficientTable:
    d = plrs.prefix_sums
    t = {(i, j): 1 for i in range(1, plrs.L + 1) for j in range(d[i - 1], d[i])}
    return CoefficientTable(
        kind="summands",
        i0=plrs.L,
        j0=d[-1] - 1,
        t=_collect(t),
        n0=plrs.L,
        k0=d[-1],
        d=d,
        c_star=plrs.coeffs[:-1] + (plrs.coeffs[-1] - 1,),
        label=f"plrs={plrs} sigma",
    )


def binomial_table() -> CoefficientTable:
    """``p_{n,k} = p_{n-1,k} + p_{n-1,k-1}``; Pascal's triangle."""
    return CoefficientTable(kind="custom", i0=1, j0=1, t={(1, 0): 1, (1, 1): 1}, n0=1, label="binomial")


def table_root(table: CoefficientTable) -> float:
    """Largest root of ``x^i0 - sum hat_t_i x^(i0-i)``."""
    hat = table.hat_t
    if any(h < 0 for h in hat):
        raise HypothesisError("lag marginals must be non-negative")
    return positive_root(hat)


def table_for(plrs: PLRS, mode) -> CoefficientTable:
    """Summand table for ``"sigma"``, gap table for an integer gap size."""
    if mode == "sigma":
        return build_summand_table(plrs)
    return build_gap_table(plrs, int(mode))
