"""Acceptance suite: one PASS/FAIL line per criterion, printed in the terminal summary."""

import math

import pytest

from zeckgaps import build_plrs, dominant_root, sequence
from zeckgaps.asymptotics import (
    check_positivity,
    compute_constants,
    double_factorial_check,
    fit_linear_asymptote,
    inequality_sweep,
    ks_distance,
    moments_direct,
    moments_direct_series,
    moments_recursive,
)
from zeckgaps.engine import ORACLE, RowTable, distribution, evolve
from zeckgaps.pipeline import max_oracle_depth, run, seed_window
from zeckgaps.plrs import char_poly
from zeckgaps.tables import binomial_table, table_for
from zeckgaps.zeckendorf import SIGMA, Oracle

from .conftest import MODES, SUITE, record

PHI = (1 + math.sqrt(5)) / 2
FIB = build_plrs([1, 1])


def _label(coeffs, mode):
    return f"({','.join(map(str, coeffs))}) {mode if mode == SIGMA else f'g={mode}'}"


def test_oracle_equivalence():
    details, ok = [], True
    for coeffs in SUITE:
        p = build_plrs(coeffs)
        depth = max_oracle_depth(p, 10**6)
        oracle = Oracle(p, depth, budget=10**6)
        for mode in MODES:
            table = table_for(p, mode)
            seeds = RowTable.from_rows({n: oracle.row(mode, n) for n in seed_window(table)}, ORACLE)
            rows = evolve(table, seeds, depth)
            bad = [n for n in range(table.n0, depth + 1) if list(rows.row(n)) != oracle.row(mode, n)]
            ok &= not bad
            if bad:
                details.append(f"{_label(coeffs, mode)} differs at n={bad[:3]}")
        details.append(f"({','.join(map(str, coeffs))}) n<= {depth}")
    assert record("oracle equivalence", ok, "; ".join(details))


def test_row_sum_conservation():
    bad = []
    for coeffs in SUITE:
        p = build_plrs(coeffs)
        seq = sequence(p, 501)
        for mode in MODES:
            _, rows = run(p, mode, 500)
            bad += [(coeffs, mode, n) for n in rows.ns if rows.omega(n) != seq.G(n + 1) - seq.G(n)]
    assert record("row-sum conservation", not bad, f"{len(SUITE) * len(MODES)} tables to n=500, {len(bad)} bad rows")


def test_binomial_calibration():
    rows = evolve(binomial_table(), RowTable.from_rows({1: [1, 1]}), 1000)
    pascal = all(list(rows.row(n)) == [math.comb(n, k) for k in range(n + 1)] for n in range(1, 201))
    c = compute_constants(binomial_table(), 2.0)
    consts = abs(c.c_mu - 0.5) <= 1e-12 and abs(c.c_sigma - 0.25) <= 1e-12
    r = moments_direct(distribution(rows, 1000), 2)
    mean_err = abs(r.mean - 500) / 500
    var_err = abs(r.var - 250) / 250
    ok = pascal and consts and mean_err <= 1e-9 and var_err <= 1e-9
    assert record(
        "binomial calibration",
        ok,
        f"pascal to 200 {pascal}; C_mu={c.c_mu!r} C_sigma={c.c_sigma!r}; n=1000 rel err mean {mean_err:.1e} var {var_err:.1e}",
    )


def test_lekkerkerker_slopes():
    _, rows = run(FIB, SIGMA, 400)
    series = moments_direct_series(rows, 2, range(100, 401))
    ns, means = series.series("mean")
    _, var = series.series("central", 2)
    mean_slope = fit_linear_asymptote(ns, means, (100, 400)).slope
    var_slope = fit_linear_asymptote(ns, var, (100, 400)).slope
    dm = abs(mean_slope - 1 / (PHI + 2))
    dv = abs(var_slope - 1 / (5 * math.sqrt(5)))
    ok = dm <= 1e-8 and dv <= 1e-6
    assert record("Fibonacci summand slopes", ok, f"mean slope {mean_slope:.10f} (err {dm:.1e}), variance slope {var_slope:.10f} (err {dv:.1e})")


def test_moment_recursion_fidelity():
    worst, bad = 0.0, []
    for coeffs in SUITE:
        p = build_plrs(coeffs)
        for mode in MODES:
            table, rows = run(p, mode, 200)
            rec = moments_recursive(table, rows, 6, 200)
            for n in rec.ns:
                d = moments_direct(distribution(rows, n), 6)
                for m in range(7):
                    ref = d.central[m]
                    dev = abs(rec[n].central[m] - ref)
                    if abs(ref) < 1e-3:
                        fine = dev <= 1e-12
                    else:
                        fine = dev <= 1e-9 * abs(ref)
                        worst = max(worst, dev / abs(ref))
                    if not fine:
                        bad.append((coeffs, mode, n, m))
    assert record("moment recursion vs direct", not bad, f"m<=6, n<=200, worst relative deviation {worst:.1e}, {len(bad)} violations")


@pytest.mark.parametrize("mode", [SIGMA, 2])
def test_double_factorial_law(mode):
    table, rows = run(FIB, mode, 400)
    consts = compute_constants(table, PHI)
    series = moments_recursive(table, rows, 4, 400)
    (m2,) = double_factorial_check(series, consts.c_sigma, ms=(2,), window=(200, 400))
    assert record(
        f"double factorial, Fibonacci {_label((1, 1), mode)}",
        m2.ok,
        f"leading coefficient {m2.fitted:.6g} vs 3 C_sigma^2 = {m2.expected:.6g} (rel err {m2.rel_error:.2%})",
    )


def test_gaussian_convergence():
    table, rows = run(FIB, 2, 500)
    series = moments_recursive(table, rows, 4, 500)
    r = series[500]
    m3, m4 = r.standardized(3), r.standardized(4)
    ks500 = ks_distance(distribution(rows, 500))
    ks100 = ks_distance(distribution(rows, 100))
    parts = {
        "|m3|<=0.05": abs(m3) <= 0.05,
        "|m4-3|<=0.05": abs(m4 - 3) <= 0.05,
        "KS<=0.02": ks500 <= 0.02,
        "KS(500)<KS(100)": ks500 < ks100,
    }
    failed = [k for k, v in parts.items() if not v]
    detail = f"n=500 m3={m3:.4f} m4={m4:.4f} KS={ks500:.5f} KS(100)={ks100:.5f}"
    if failed:
        detail += f"; not met: {', '.join(failed)}"
    assert record("Gaussian convergence, Fibonacci g=2", not failed, detail)


def test_triviality_and_positivity():
    expected_trivial = {((1, 1), 0), ((1, 1), 1), ((1, 1, 1), 0), ((1, 2), 0)}
    bad, found = [], []
    for coeffs in SUITE:
        p = build_plrs(coeffs)
        oracle = Oracle(p, max_oracle_depth(p, 10**5))
        for g in range(4):
            c = check_positivity(p, g)
            single_mass = all(len(oracle.row(g, n)) <= 1 for n in range(1, oracle.n_max + 1))
            if c.trivial:
                found.append(_label(coeffs, g))
            if c.trivial != single_mass or c.trivial != ((coeffs, g) in expected_trivial):
                bad.append(_label(coeffs, g))
            elif not c.trivial and not (c.c_mu > 0 and c.c_sigma > 0):
                bad.append(_label(coeffs, g) + " non-positive")
    assert record("triviality and positivity", not bad, f"trivial: {', '.join(found)}; disagreements: {bad or 'none'}")


def test_spectral_checks():
    worst_t, worst_ratio = 0.0, 0.0
    for coeffs in SUITE:
        p = build_plrs(coeffs)
        lam = dominant_root(p).lambda1
        worst_t = max(worst_t, abs(char_poly(p.coeffs, lam)))
        for mode in MODES:
            _, rows = run(p, mode, 200)
            worst_ratio = max(worst_ratio, abs(rows.omega(199) / rows.omega(200) - 1 / lam))
    ok = worst_t <= 1e-12 and worst_ratio <= 1e-8
    assert record("spectral checks", ok, f"max |T(lambda1)| {worst_t:.1e}, max Omega-ratio error at n=200 {worst_ratio:.1e}")


def test_inequality_sweep():
    low, where = inequality_sweep()
    assert record("inequality sweep", low >= -1e-9, f"minimum {low!r} at (x, y, z, w) = {where}")
