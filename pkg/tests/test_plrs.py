import math

import pytest
from hypothesis import given, strategies as st

from zeckgaps import PLRSError, build_plrs, dominant_root, growth_ratio_check, sequence
from zeckgaps.plrs import PLRS, char_poly_derivative, char_poly

PHI = (1 + math.sqrt(5)) / 2

coeff_lists = st.lists(st.integers(0, 4), min_size=1, max_size=5).filter(
    lambda c: c[0] >= 1 and c[-1] >= 1 and c != [1]
)


def test_build_flags():
    fib = build_plrs([1, 1])
    assert fib.L == 2 and fib.all_positive
    assert not build_plrs([1, 0, 1]).all_positive


@pytest.mark.parametrize("bad", [[0, 1], [1, 0], [1, -1, 1], [], [1]])
def test_build_rejects(bad):
    with pytest.raises(PLRSError):
        build_plrs(bad)


def test_parse():
    assert PLRS.parse("2, 1,1").coeffs == (2, 1, 1)
    with pytest.raises(PLRSError, match="c_1"):
        PLRS.parse("0,1")


@pytest.mark.parametrize(
    "coeffs, n, expected",
    [
        ((1, 1), 6, [1, 2, 3, 5, 8, 13]),
        ((1, 1, 1), 6, [1, 2, 4, 7, 13, 24]),
        ((2, 1), 4, [1, 3, 7, 17]),
        ((10,), 5, [1, 10, 100, 1000, 10000]),
    ],
)
def test_sequence_values(coeffs, n, expected):
    assert list(sequence(build_plrs(coeffs), n).terms) == expected


@given(coeff_lists, st.integers(1, 40))
def test_sequence_invariants(coeffs, n):
    seq = sequence(build_plrs(coeffs), n)
    L = len(coeffs)
    assert seq.G(1) == 1
    for m in range(2, n + 1):
        if m <= L:
            assert seq.G(m) == sum(coeffs[i] * seq.G(m - 1 - i) for i in range(m - 1)) + 1
        else:
            assert seq.G(m) == sum(coeffs[i] * seq.G(m - 1 - i) for i in range(L))
        assert seq.G(m) > seq.G(m - 1)


def test_fibonacci_interval_width():
    seq = sequence(build_plrs([1, 1]), 30)
    for n in range(2, 30):
        assert seq.G(n + 1) - seq.G(n) == seq.G(n - 1)


@pytest.mark.parametrize(
    "coeffs, root",
    [((1, 1), PHI), ((10,), 10.0), ((1, 1, 1), 1.839286755214161)],
)
def test_dominant_root(coeffs, root):
    sd = dominant_root(build_plrs(coeffs))
    assert sd.lambda1 == pytest.approx(root, abs=1e-12)
    assert sd.residual <= 1e-12
    assert sd.binet_a1 > 0


@given(coeff_lists)
def test_root_is_simple_and_dominant(coeffs):
    sd = dominant_root(build_plrs(coeffs))
    assert sd.lambda1 > 1
    assert abs(char_poly_derivative(coeffs, sd.lambda1)) > 1e-9
    assert abs(char_poly(coeffs, sd.lambda1)) <= 1e-9 * sd.lambda1 ** len(coeffs)


def test_binet_coefficient_fibonacci():
    # G_n = F_{n+1} in the usual indexing, so G_n / phi^n -> phi / sqrt(5).
    assert dominant_root(build_plrs([1, 1])).binet_a1 == pytest.approx(PHI / math.sqrt(5), rel=1e-12)


def test_growth_ratio_fibonacci():
    seq = sequence(build_plrs([1, 1]), 40)
    rep = growth_ratio_check(seq, PHI)
    assert rep.error_at(40) < 1e-15
    assert rep.decaying


def test_growth_ratio_base10_exact():
    rep = growth_ratio_check(sequence(build_plrs([10]), 25), 10.0)
    assert max(rep.errors) <= 1e-15


def test_growth_ratio_tribonacci():
    p = build_plrs([1, 1, 1])
    rep = growth_ratio_check(sequence(p, 40), dominant_root(p).lambda1)
    assert rep.error_at(40) <= 1e-9
    assert rep.decaying and rep.decay_rate < 1


def test_growth_ratio_needs_terms():
    with pytest.raises(ValueError):
        growth_ratio_check(sequence(build_plrs([1, 1]), 10), PHI)


def test_normalized_terms_settle():
    p = build_plrs([1, 1, 1])
    lam = dominant_root(p).lambda1
    seq = sequence(p, 80)
    scaled = [seq.G(n) / lam**n for n in range(1, 81)]
    steps = [abs(b - a) for a, b in zip(scaled, scaled[1:])]
    # Envelope over successive blocks of 10 shrinks from n = 20 until float resolution.
    blocks = [max(steps[k : k + 10]) for k in range(0, 40, 10)]
    assert all(b2 < b1 for b1, b2 in zip(blocks, blocks[1:]))
    assert max(steps[40:]) < 1e-15
