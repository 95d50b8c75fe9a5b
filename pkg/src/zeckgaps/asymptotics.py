"""Limit constants, exact and recursive moments, and CLT diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .engine import EVOLVED, Distribution, RowTable, distribution
from .plrs import PLRS, char_poly, ratio_convergence
from .tables import CoefficientTable, build_gap_table

ROOT_CHECK = 1e-10


@dataclass(frozen=True)
class AsymptoticConstants:
    lambda1: float
    c_mu: float
    c_sigma: float
    c_mu_star: float
    c_sigma_star: float
    denominator: float
    trivial: bool = False
    fitted_d_mu: float = math.nan
    fitted_d_sigma: float = math.nan
    fitted_gamma_mu: float = math.nan
    fitted_gamma_sigma: float = math.nan

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def compute_constants(table: CoefficientTable, lambda1: float) -> AsymptoticConstants:
    """Linear-growth constants of the mean and variance for a table."""
    hat = table.hat_t
    residual = abs(char_poly(hat, lambda1))
    if residual > ROOT_CHECK * max(1.0, lambda1**table.i0):
        raise ValueError(f"lambda1={lambda1} is not a root of the table polynomial (|T|={residual:.3e})")
    terms = table.terms()
    denom = sum(v * i / lambda1**i for i, _, v in terms)
    if not denom > 0:
        raise ArithmeticError("non-positive denominator")
    mu_star = sum(v * j / lambda1**i for i, j, v in terms)
    c_mu = mu_star / denom
    sigma_star = sum(v / lambda1**i * (j - c_mu * i) ** 2 for i, j, v in terms)
    return AsymptoticConstants(
        lambda1=lambda1,
        c_mu=c_mu,
        c_sigma=sigma_star / denom,
        c_mu_star=mu_star,
        c_sigma_star=sigma_star,
        denominator=denom,
    )


def is_trivial(plrs: PLRS, g: int) -> bool:
    """Whether ``k_g(M) = 0`` for every M, by case analysis on the coefficients."""
    c = plrs.coeffs
    if g == 0:
        return all(x == 1 for x in c[:-1]) and c[-1] in (1, 2)
    if g == 1:
        return c == (1, 1)
    return False


def check_positivity(plrs: PLRS, g: int, lambda1: float | None = None) -> AsymptoticConstants:
    """Triviality flag plus the numerators obtained by substituting into the gap recurrence."""
    from .plrs import dominant_root

    if lambda1 is None:
        lambda1 = dominant_root(plrs).lambda1
    consts = compute_constants(build_gap_table(plrs, g), lambda1)
    return replace(consts, trivial=is_trivial(plrs, g))


# --- moments ---------------------------------------------------------------


@dataclass(frozen=True)
class MomentRow:
    n: int
    mean: float
    central: tuple[float, ...]  # central[m] = E[(X - mean)^m]
    mode: str
    ks: float | None = None

    @property
    def var(self) -> float:
        return self.central[2]

    def standardized(self, m: int) -> float:
        return self.central[m] / self.var ** (m / 2)


def _exact_central(counts: Sequence[int], m_max: int) -> tuple[float, list[float]]:
    omega = sum(counts)
    s1 = sum(k * p for k, p in enumerate(counts))
    centred = [(k * omega - s1, p) for k, p in enumerate(counts) if p]
    out = []
    for m in range(m_max + 1):
        num = sum(p * x**m for x, p in centred)
        out.append(num / omega ** (m + 1))
    return s1 / omega, out


def ks_distance(dist: Distribution) -> float:
    """Sup distance between the standardized lattice CDF and N(0, 1).

    The CDF value after atom k is compared with the normal CDF at the upper
    edge ``k + 1/2`` of that atom's unit cell.
    """
    mean, central = _exact_central(dist.counts, 2)
    sd = math.sqrt(central[2])
    if sd == 0:
        raise ValueError("degenerate distribution")
    omega = dist.omega
    cum, worst = 0, 0.0
    for k, p in enumerate(dist.counts):
        cum += p
        z = (k + 0.5 - mean) / sd
        worst = max(worst, abs(cum / omega - 0.5 * math.erfc(-z / math.sqrt(2))))
    return worst


def moments_direct(dist: Distribution, m_max: int, with_ks: bool = False) -> MomentRow:
    mean, central = _exact_central(dist.counts, m_max)
    ks = ks_distance(dist) if with_ks and central[2] > 0 else None
    return MomentRow(dist.n, mean, tuple(central), "direct", ks)


@dataclass
class MomentSeries:
    rows: dict[int, MomentRow] = field(default_factory=dict)

    def __getitem__(self, n: int) -> MomentRow:
        return self.rows[n]

    @property
    def ns(self) -> list[int]:
        return sorted(self.rows)

    def series(self, attr: str, m: int | None = None) -> tuple[list[int], list[float]]:
        ns = self.ns
        if attr == "central":
            return ns, [self.rows[n].central[m] for n in ns]
        return ns, [getattr(self.rows[n], attr) for n in ns]


def moments_recursive(table: CoefficientTable, rows: RowTable, m_max: int, n_target: int) -> MomentSeries:
    """Central moments propagated through the recurrence from directly computed seed moments.

    Row counts enter only through ``Omega_n``; the mean follows the weighted
    recursion and each central moment is a binomial convolution of the lagged
    moments shifted by ``j + mu_{n-i} - mu_n``.
    """
    evolved = [n for n in rows.ns if rows.provenance.get(n) == EVOLVED]
    start = min(evolved) if evolved else max(rows.ns) + 1
    series = MomentSeries()
    for n in range(start - table.i0, start):
        series.rows[n] = moments_direct(distribution(rows, n), m_max)
    terms = table.terms()
    omega = {n: rows.omega(n) for n in range(start - table.i0, n_target + 1)}
    for n in range(start, n_target + 1):
        if omega[n] == 0:
            raise ZeroDivisionError(f"Omega_{n} = 0")
        w = [(i, j, v * omega[n - i] / omega[n]) for i, j, v in terms if omega[n - i]]
        lagged = {i: series.rows[n - i] for i, _, _ in w}
        mu = sum(wt * (lagged[i].mean + j) for i, j, wt in w)
        central = []
        for m in range(m_max + 1):
            acc = 0.0
            for i, j, wt in w:
                shift = j + lagged[i].mean - mu
                prev = lagged[i].central
                acc += wt * sum(comb(m, l) * shift**l * prev[m - l] for l in range(m + 1))
            central.append(acc)
        series.rows[n] = MomentRow(n, mu, tuple(central), "recursive")
    return series


def moments_direct_series(rows: RowTable, m_max: int, ns: Iterable[int] | None = None, with_ks: bool = False) -> MomentSeries:
    series = MomentSeries()
    for n in ns if ns is not None else rows.ns:
        series.rows[n] = moments_direct(distribution(rows, n), m_max, with_ks=with_ks)
    return series


# --- fits --------------------------------------------------------------------


@dataclass(frozen=True)
class LinearFit:
    slope: float
    intercept: float
    max_residual: float
    decay_rate: float
    decaying: bool


def fit_linear_asymptote(ns: Sequence[int], values: Sequence[float], window: tuple[int, int]) -> LinearFit:
    """Least-squares line over ``window`` (inclusive) and a decay estimate of the correction.

    The correction term is read off the second differences, which cancel the
    linear part exactly and shrink at the same geometric rate as the correction.
    """
    lo, hi = window
    if hi - lo + 1 < 10:
        raise ValueError("window must hold at least 10 points")
    lookup = dict(zip(ns, values))
    xs = np.arange(lo, hi + 1)
    ys = np.array([lookup[int(n)] for n in xs], dtype=float)
    slope, intercept = np.polyfit(xs.astype(float), ys, 1)
    resid = ys - (slope * xs + intercept)
    diffs = np.abs(ys[2:] - 2 * ys[1:-1] + ys[:-2])
    floor = 1e-13 * max(1.0, float(np.max(np.abs(ys))))
    conv = ratio_convergence(xs[2:], list(diffs), noise_floor=floor)
    return LinearFit(float(slope), float(intercept), float(np.max(np.abs(resid))), conv.decay_rate, conv.decaying)


def fit_constants(consts: AsymptoticConstants, series: MomentSeries, window: tuple[int, int]) -> AsymptoticConstants:
    """Fill in the fitted offsets and decay rates from a moment series."""
    ns, means = series.series("mean")
    _, variances = series.series("central", 2)
    fm = fit_linear_asymptote(ns, means, window)
    fv = fit_linear_asymptote(ns, variances, window)
    return replace(
        consts,
        fitted_d_mu=fm.intercept,
        fitted_d_sigma=fv.intercept,
        fitted_gamma_mu=fm.decay_rate,
        fitted_gamma_sigma=fv.decay_rate,
    )


def double_factorial(n: int) -> int:
    return math.prod(range(n, 0, -2)) if n > 0 else 1


@dataclass(frozen=True)
class LeadingCoefficient:
    m: int
    fitted: float
    expected: float
    rel_error: float
    ok: bool


def double_factorial_check(
    series: MomentSeries,
    c_sigma: float,
    ms: Iterable[int] = (1, 2, 3),
    window: tuple[int, int] = (200, 400),
    rel_tol: float = 0.02,
) -> list[LeadingCoefficient]:
    """Leading coefficient of the degree-m growth of the 2m-th central moment vs ``(2m-1)!! C_sigma^m``."""
    lo, hi = window
    out = []
    for m in ms:
        xs = np.arange(lo, hi + 1, dtype=float)
        ys = np.array([series[int(n)].central[2 * m] for n in xs])
        poly = np.polynomial.Polynomial.fit(xs, ys, m).convert()
        fitted = float(poly.coef[-1])
        expected = double_factorial(2 * m - 1) * c_sigma**m
        rel = abs(fitted - expected) / abs(expected)
        out.append(LeadingCoefficient(m, fitted, expected, rel, rel <= rel_tol))
    return out


@dataclass(frozen=True)
class CltRow:
    n: int
    mean: float
    var: float
    standardized: dict[int, float]
    deviation: dict[int, float]
    ks: float | None


def clt_diagnostics(series: MomentSeries, m_max: int, rows: RowTable | None = None, ns: Iterable[int] | None = None) -> list[CltRow]:
    """Standardized moments against the normal moments, and the KS distance.

    KS values missing from the series are computed from ``rows`` when given.
    """
    if m_max % 2:
        raise ValueError("m_max must be even")
    out = []
    for n in ns if ns is not None else series.ns:
        r = series[n]
        if not r.var > 0:
            raise ValueError(f"variance at n={n} is not positive")
        std = {m: r.standardized(m) for m in range(1, m_max + 1)}
        dev = {m: std[m] - (double_factorial(m - 1) if m % 2 == 0 else 0) for m in std}
        ks = r.ks
        if ks is None and rows is not None:
            ks = ks_distance(distribution(rows, n))
        out.append(CltRow(n, r.mean, r.var, std, dev, ks))
    return out


def inequality_sweep() -> tuple[float, tuple[float, int, float, int]]:
    """Minimum of ``x^y (zw)^2 + x(1 - 2z(w+y-1)) - (1 - 2z(w+y))`` over a fixed grid."""
    x = np.arange(1.0, 10.0 + 1e-9, 0.25)
    y = np.arange(2, 9)
    z = np.round(np.arange(0.0, 5.0 + 1e-9, 0.05), 10)
    w = np.arange(1, 9)
    X, Y, Z, W = np.meshgrid(x, y, z, w, indexing="ij")
    vals = X**Y * (Z * W) ** 2 + (X * (1 - 2 * Z * (W + Y - 1)) - (1 - 2 * Z * (W + Y)))
    k = np.unravel_index(np.argmin(vals), vals.shape)
    return float(vals[k]), (float(X[k]), int(Y[k]), float(Z[k]), int(W[k]))
