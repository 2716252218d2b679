import numpy as np
import pytest

from zigzag.lattice import LatticeParams

#: three parameter pairs (lam, alpha2) per regime
REGIME_SETS = {
    "hyperbolic": [(0.0, 1.0), (0.5, 0.6), (1.0, 1.0)],
    "trigonometric": [(2.0, 0.5), (3.0, 0.2), (1.5, 0.5)],
    "critical": [(1.0, 0.5), (2.0, 1.0), (0.6, 0.3)],
}
ALL_REGIME_SETS = [
    pytest.param(lam, a2, id=f"{kind}-lam{lam}-a2{a2}")
    for kind, pairs in REGIME_SETS.items()
    for lam, a2 in pairs
]

BASELINE = LatticeParams(2.0, 0.1, 0.5, 10, 200)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_VERDICTS = pytest.StashKey[list]()


@pytest.fixture
def verdict(request):
    """Record one acceptance line, print it, and fail the test if it did not pass."""

    def record(number, title, ok, detail):
        line = f"criterion {number:>2} [{'PASS' if ok else 'FAIL'}] {title}: {detail}"
        print(line)
        request.config.stash.setdefault(_VERDICTS, []).append((number, line))
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_VERDICTS, [])
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
