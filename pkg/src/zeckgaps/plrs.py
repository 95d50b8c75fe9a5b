"""Positive linear recurrence sequences: validation, exact terms, dominant root."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

ROOT_TOLERANCE = 1e-12


class PLRSError(ValueError):
    """Raised for coefficient lists that do not define a valid PLRS."""


@dataclass(frozen=True)
class PLRS:
    coeffs: tuple[int, ...]

    @property
    def L(self) -> int:
        return len(self.coeffs)

    @property
    def all_positive(self) -> bool:
        return all(c >= 1 for c in self.coeffs)

    @property
    def prefix_sums(self) -> tuple[int, ...]:
        """``(d_0, d_1, ..., d_L)`` with ``d_0 = 0``."""
        out = [0]
        for c in self.coeffs:
            out.append(out[-1] + c)
        return tuple(out)

    def __str__(self) -> str:
        return ",".join(str(c) for c in self.coeffs)

    @classmethod
    def parse(cls, text: str) -> "PLRS":
        """Parse the comma-separated form used on the command line (``"1,1"``)."""
        try:
            coeffs = [int(tok) for tok in text.replace(" ", "").split(",") if tok != ""]
        except ValueError as exc:
            raise PLRSError(f"cannot parse coefficients {text!r}") from exc
        return build_plrs(coeffs)


def build_plrs(coeffs: Iterable[int]) -> PLRS:
    coeffs = tuple(int(c) for c in coeffs)
    if not coeffs:
        raise PLRSError("coefficient list must be non-empty")
    if any(c < 0 for c in coeffs):
        raise PLRSError("coefficients must be non-negative")
    if coeffs[0] < 1:
        raise PLRSError("c_1 must be ≥ 1")
    if coeffs[-1] < 1:
        raise PLRSError("c_L must be ≥ 1")
    if coeffs == (1,):
        # G_n = 1 for every n: not increasing, no root above 1.
        raise PLRSError("the recurrence (1) is constant; a single coefficient must be ≥ 2")
    return PLRS(coeffs)


@dataclass(frozen=True)
class SequenceTable:
    """Exact terms ``G_1..G_N``; indexing via :meth:`G` is 1-based."""

    terms: tuple[int, ...]

    def G(self, n: int) -> int:
        if n < 1:
            raise IndexError(f"G_{n} is undefined (sequences start at G_1)")
        return self.terms[n - 1]

    def __len__(self) -> int:
        return len(self.terms)


def _next_term(coeffs: Sequence[int], terms: Sequence[int]) -> int:
    n = len(terms) + 1
    L = len(coeffs)
    if n <= L:
        return sum(coeffs[i] * terms[n - 2 - i] for i in range(n - 1)) + 1
    return sum(coeffs[i] * terms[n - 2 - i] for i in range(L))


def sequence(plrs: PLRS, n_max: int) -> SequenceTable:
    if n_max < 1:
        raise ValueError("n_max must be ≥ 1")
    terms: list[int] = []
    for _ in range(n_max):
        terms.append(_next_term(plrs.coeffs, terms))
    return SequenceTable(tuple(terms))


def sequence_until(plrs: PLRS, bound: int) -> SequenceTable:
    """Shortest table whose last term exceeds ``bound``."""
    terms: list[int] = []
    while not terms or terms[-1] <= bound:
        terms.append(_next_term(plrs.coeffs, terms))
    return SequenceTable(tuple(terms))


def char_poly(marginals: Sequence[float], x: float) -> float:
    """``x^d - sum_i m_i x^(d-i)`` evaluated by Horner's rule."""
    acc = 1.0
    for m in marginals:
        acc = acc * x - m
    return acc


def char_poly_derivative(marginals: Sequence[float], x: float) -> float:
    d = len(marginals)
    poly = [1.0] + [-float(m) for m in marginals]
    acc = 0.0
    for k, a in enumerate(poly[:-1]):
        acc = acc * x + a * (d - k)
    return acc


def positive_root(marginals: Sequence[float], lo: float = 0.0, hi: float | None = None) -> float:
    """Unique positive root of ``x^d - sum m_i x^(d-i)`` for non-negative ``m_i``.

    Bisection down to a 1e-13 bracket followed by three Newton steps.
    """
    if any(m < 0 for m in marginals) or not any(marginals):
        raise ValueError("marginals must be non-negative and not all zero")
    if hi is None:
        hi = 1.0 + float(sum(marginals))
    f_lo = char_poly(marginals, lo)
    if f_lo > 0 or char_poly(marginals, hi) < 0:
        raise ArithmeticError("root is not bracketed")
    for _ in range(400):
        if hi - lo <= 1e-13:
            break
        mid = 0.5 * (lo + hi)
        if char_poly(marginals, mid) < 0:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for _ in range(3):
        slope = char_poly_derivative(marginals, x)
        if slope == 0:
            break
        x -= char_poly(marginals, x) / slope
    return x


@dataclass(frozen=True)
class SpectralData:
    lambda1: float
    binet_a1: float
    residual: float


def dominant_root(plrs: PLRS, binet_terms: int = 200) -> SpectralData:
    """Dominant root of the characteristic polynomial plus a Binet-coefficient estimate."""
    lam = positive_root(plrs.coeffs, lo=1.0)
    residual = abs(char_poly(plrs.coeffs, lam))
    if residual > ROOT_TOLERANCE * max(1.0, lam ** plrs.L):
        raise ArithmeticError(f"root residual {residual:.3e} above tolerance")
    seq = sequence(plrs, binet_terms)
    n = len(seq)
    # G_n / lambda^n without overflowing: divide in log space.
    a1 = math.exp(math.log(seq.G(n)) - n * math.log(lam))
    return SpectralData(lambda1=lam, binet_a1=a1, residual=residual)


@dataclass(frozen=True)
class RatioConvergence:
    """Error series ``e_n`` of a ratio against its limit, with a geometric decay fit."""

    ns: tuple[int, ...]
    errors: tuple[float, ...]
    decay_rate: float
    decaying: bool
    noise_floor: float = field(default=1e-14)

    def error_at(self, n: int) -> float:
        return self.errors[self.ns.index(n)]


def ratio_convergence(ns: Sequence[int], errors: Sequence[float], noise_floor: float = 1e-14) -> RatioConvergence:
    """Fit ``e_n ~ C r^n`` over the entries above the float noise floor.

    ``decaying`` asks for r < 1 and for the envelope over the later half of the
    fitted range to sit below the envelope over the earlier half; individual
    errors may oscillate when subdominant roots are complex.
    """
    ns = tuple(int(n) for n in ns)
    errors = tuple(float(e) for e in errors)
    idx = [k for k, e in enumerate(errors) if e > noise_floor]
    if len(idx) < 4:
        # Everything already at float resolution.
        return RatioConvergence(ns, errors, 0.0, True, noise_floor)
    xs = np.array([ns[k] for k in idx], dtype=float)
    ys = np.log(np.array([errors[k] for k in idx]))
    slope = float(np.polyfit(xs, ys, 1)[0])
    rate = math.exp(slope)
    half = len(idx) // 2
    early = max(errors[k] for k in idx[:half])
    late = max(errors[k] for k in idx[half:])
    return RatioConvergence(ns, errors, rate, rate < 1.0 and late < early, noise_floor)


def growth_ratio_check(seq: SequenceTable, lambda1: float) -> RatioConvergence:
    """Convergence of ``G_{n-1}/G_n`` to ``1/lambda1``."""
    if len(seq) < 20:
        raise ValueError("need at least 20 terms")
    ns = range(2, len(seq) + 1)
    errs = [abs(seq.G(n - 1) / seq.G(n) - 1.0 / lambda1) for n in ns]
    return ratio_convergence(ns, errs)
