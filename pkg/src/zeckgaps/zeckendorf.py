"""Legal decompositions, gap statistics and the brute-force interval oracle."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .plrs import PLRS, SequenceTable, sequence, sequence_until

SIGMA = "sigma"
ALL = "all"
DEFAULT_BUDGET = 10**7

Mode = Union[int, str]


class BudgetExceeded(RuntimeError):
    """The requested interval is larger than the enumeration budget."""


@dataclass(frozen=True)
class Decomposition:
    """Digits ``a_1..a_N`` of ``M = sum a_i G_{N+1-i}``."""

    digits: tuple[int, ...]

    @property
    def N(self) -> int:
        return len(self.digits)

    @property
    def summand_indices(self) -> tuple[int, ...]:
        out: list[int] = []
        for pos, a in enumerate(self.digits):
            out.extend([self.N - pos] * a)
        return tuple(out)

    @property
    def num_summands(self) -> int:
        return sum(self.digits)

    def value(self, seq: SequenceTable) -> int:
        return sum(a * seq.G(self.N - pos) for pos, a in enumerate(self.digits))


def decompose(M: int, plrs: PLRS) -> Decomposition:
    """Legal decomposition of ``M``, built left to right.

    Each digit is the largest value that fits in the remainder and respects
    the cap imposed by the current block: ``c_{s+1}`` while the digits so far
    match ``c_1..c_s``, and ``c_L - 1`` in the last slot of a block.
    """
    if M < 1:
        raise ValueError("M must be ≥ 1")
    seq = sequence_until(plrs, M)
    terms, c, L = seq.terms, plrs.coeffs, plrs.L
    N = max(n for n in range(1, len(terms) + 1) if terms[n - 1] <= M)
    digits = []
    rest, s = M, 0
    for n in range(N, 0, -1):
        cap = c[s] if s + 1 < L else c[s] - 1
        a = min(cap, rest // terms[n - 1])
        digits.append(a)
        rest -= a * terms[n - 1]
        s = s + 1 if a == c[s] else 0
    if rest:
        raise ArithmeticError(f"no legal decomposition found for {M}")
    return Decomposition(tuple(digits))


def _legal_tail(digits: Sequence[int], coeffs: Sequence[int]) -> bool:
    L = len(coeffs)
    pos, N = 0, len(digits)
    while pos < N:
        s = 0
        while s < L and pos + s < N and digits[pos + s] == coeffs[s]:
            s += 1
        if pos + s == N and s < L:
            return True  # a proper prefix of (c_1, ..., c_L)
        if s == L or digits[pos + s] > coeffs[s]:
            return False
        # a_s < c_s: any zeros that follow are absorbed by the next block.
        pos += s + 1
    return True


def is_legal(digits: Sequence[int], plrs: PLRS) -> bool:
    if len(digits) == 0:
        return True
    if digits[0] <= 0 or any(a < 0 for a in digits):
        return False
    return _legal_tail(digits, plrs.coeffs)


@dataclass(frozen=True)
class GapProfile:
    gap_counts: dict[int, int]
    total_summands: int

    def count(self, g: int) -> int:
        return self.gap_counts.get(g, 0)


def gap_profile(d: Decomposition) -> GapProfile:
    idx = d.summand_indices
    gaps = Counter(a - b for a, b in zip(idx, idx[1:]))
    return GapProfile(dict(sorted(gaps.items())), len(idx))


@dataclass(frozen=True)
class IntervalPartition:
    n: int
    keys: tuple[tuple[int, int], ...]
    bounds: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.keys)


def interval_partition(plrs: PLRS, n: int) -> IntervalPartition:
    """Split ``[G_n, G_{n+1})`` by the leading block ``H_{n,i} + j G_{n-i}``."""
    if n <= plrs.L:
        raise ValueError("interval partition needs n > L")
    seq = sequence(plrs, n + 1)
    c = plrs.coeffs
    keys, bounds = [], []
    H = 0
    for i in range(plrs.L):
        if i > 0:
            H += c[i - 1] * seq.G(n + 1 - i)
        for j in range(c[i]):
            if (i, j) == (0, 0):
                continue
            lo = H + j * seq.G(n - i)
            keys.append((i, j))
            bounds.append((lo, lo + seq.G(n - i)))
    return IntervalPartition(n, tuple(keys), tuple(bounds))


class Oracle:
    """Brute-force gap and summand tallies over ``[G_n, G_{n+1})`` for ``n <= n_max``.

    Every integer is decomposed with the same digit-by-digit rule as
    :func:`decompose`, run on numpy arrays a chunk of integers at a time.
    """

    chunk = 1 << 16

    def __init__(self, plrs: PLRS, n_max: int, budget: int = DEFAULT_BUDGET):
        seq = sequence(plrs, n_max + 1)
        width = seq.G(n_max + 1) - seq.G(n_max)
        if width > budget:
            raise BudgetExceeded(
                f"[G_{n_max}, G_{n_max + 1}) holds {width} integers, budget is {budget}"
            )
        self.plrs = plrs
        self.n_max = n_max
        self.seq = seq
        c = np.array(plrs.coeffs, dtype=np.int64)
        self._coeffs = c
        self._caps = np.where(np.arange(plrs.L) + 1 < plrs.L, c, c - 1)
        self._rows: dict[int, dict[Mode, list[int]]] = {}

    def _tally_block(self, lo: int, hi: int, N: int, hists: dict[Mode, np.ndarray]) -> None:
        """Add the statistics of every M in ``[lo, hi)`` (all with top index N) to ``hists``."""
        G = self.seq.terms
        M = np.arange(lo, hi, dtype=np.int64)
        size = len(M)
        rest = M.copy()
        state = np.zeros(size, dtype=np.int64)
        last = np.zeros(size, dtype=np.int64)
        summands = np.zeros(size, dtype=np.int64)
        gaps = np.zeros((N + 1, size), dtype=np.int32)
        cols = np.arange(size)
        for n in range(N, 0, -1):
            a = np.minimum(self._caps[state], rest // G[n - 1])
            rest -= a * G[n - 1]
            state = np.where(a == self._coeffs[state], state + 1, 0)
            used = a > 0
            summands += a
            gaps[0] += np.where(used, a - 1, 0)
            joined = used & (last > 0)
            gaps[last[joined] - n, cols[joined]] += 1
            last = np.where(used, n, last)
        if rest.any():
            raise ArithmeticError("digit loop left a remainder")
        for mode in hists:
            values = summands if mode == SIGMA else gaps[mode] if mode <= N else np.zeros(size, dtype=np.int64)
            counts = np.bincount(values)
            h = hists[mode]
            if len(counts) > len(h):
                h = hists[mode] = np.concatenate([h, np.zeros(len(counts) - len(h), dtype=np.int64)])
            h[: len(counts)] += counts

    def _histograms(self, lo: int, hi: int, modes) -> dict[Mode, list[int]]:
        hists: dict[Mode, np.ndarray] = {m: np.zeros(1, dtype=np.int64) for m in modes}
        if lo == 0:
            for h in hists.values():
                h[0] += 1  # the empty decomposition of 0
            lo = 1
        G = self.seq.terms
        for N in range(1, len(G)):
            a, b = max(lo, G[N - 1]), min(hi, G[N])
            for start in range(a, b, self.chunk):
                self._tally_block(start, min(start + self.chunk, b), N, hists)
        out = {}
        for mode, h in hists.items():
            row = [int(x) for x in h]
            while row and row[-1] == 0:
                row.pop()
            out[mode] = row
        return out

    def rows_at(self, n: int) -> dict[Mode, list[int]]:
        """Rows for ``SIGMA`` and every gap size ``0..n`` at once."""
        if not 1 <= n <= self.n_max:
            raise ValueError(f"n={n} outside oracle range 1..{self.n_max}")
        if n not in self._rows:
            modes: list[Mode] = [SIGMA, *range(n + 1)]
            self._rows[n] = self._histograms(self.seq.G(n), self.seq.G(n + 1), modes)
        return self._rows[n]

    def row(self, mode: Mode, n: int) -> list[int]:
        """Exact ``p_{n,k}`` for ``k = 0..k_max``: tallies over ``[G_n, G_{n+1})``."""
        rows = self.rows_at(n)
        if mode in rows:
            return rows[mode]
        return [sum(rows[SIGMA])]  # gaps wider than n never occur

    def range_row(self, mode: Mode, lo: int, hi: int) -> list[int]:
        """Tallies over an arbitrary range ``[lo, hi)`` inside ``[0, G_{n_max+1})``."""
        if hi > self.seq.G(self.n_max + 1) or lo < 0:
            raise ValueError("range outside the oracle")
        return self._histograms(lo, hi, [mode])[mode]

    def cumulative(self, mode: Mode, n: int, include_zero: bool = False) -> list[int]:
        """Tallies over ``[1, G_n)``, or ``[0, G_n)`` with ``include_zero``."""
        return self.range_row(mode, 0 if include_zero else 1, self.seq.G(n))


@dataclass(frozen=True)
class IntervalCounts:
    plrs: PLRS
    n: int
    rows: dict[Mode, list[int]]
    sigma: list[int]

    def to_json(self, mode: Mode) -> str:
        return row_json(self.plrs, mode, self.n, self.rows[mode] if mode != SIGMA else self.sigma)


def enumerate_interval(plrs: PLRS, n: int, g: Mode = ALL, budget: int = DEFAULT_BUDGET) -> IntervalCounts:
    """Brute-force rows over ``[G_n, G_{n+1})`` for one gap size, ``SIGMA``, or ``ALL``."""
    oracle = Oracle(plrs, n, budget)
    sigma = oracle.row(SIGMA, n)
    if g == ALL:
        modes: list[Mode] = list(range(n))
    elif g == SIGMA:
        modes = []
    else:
        modes = [int(g)]
    rows: dict[Mode, list[int]] = {m: oracle.row(m, n) for m in modes}
    return IntervalCounts(plrs, n, rows, sigma)


def row_json(plrs: PLRS, mode: Mode, n: int, row: Sequence[int]) -> str:
    return json.dumps(
        {"plrs": list(plrs.coeffs), "g": mode, "n": n, "row": [str(x) for x in row]}
    )
