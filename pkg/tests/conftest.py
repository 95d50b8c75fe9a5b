import itertools
from functools import lru_cache

import pytest

from zeckgaps import build_plrs, is_legal, sequence

SUITE = [(1, 1), (1, 1, 1), (2, 1), (1, 2), (2, 1, 1)]
MODES = ["sigma", 0, 1, 2, 3]


@lru_cache(maxsize=None)
def legal_strings(coeffs: tuple[int, ...], n_max: int) -> dict[int, list[tuple[int, ...]]]:
    """Every legal digit string of length <= n_max, keyed by its value.

    Built by exhaustive product over digits 0..max(c), so it shares nothing with
    the greedy decomposition.
    """
    plrs = build_plrs(coeffs)
    seq = sequence(plrs, n_max)
    top = max(coeffs)
    out: dict[int, list[tuple[int, ...]]] = {}
    for N in range(1, n_max + 1):
        for digits in itertools.product(range(top + 1), repeat=N):
            if digits[0] == 0 or not is_legal(digits, plrs):
                continue
            value = sum(a * seq.G(N - i) for i, a in enumerate(digits))
            out.setdefault(value, []).append(digits)
    return out


@pytest.fixture(params=SUITE, ids=lambda c: ",".join(map(str, c)))
def suite_plrs(request):
    return build_plrs(request.param)


ACCEPTANCE: list[str] = []


def record(name: str, ok: bool, detail: str) -> bool:
    line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
    ACCEPTANCE.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
