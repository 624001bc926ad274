import importlib

import pytest

from orderlab import _pykernels

try:
    from orderlab import _kernels
except ImportError:  # extension not built
    _kernels = None

_USERS = ("orderlab.arith", "orderlab.order", "orderlab.structure", "orderlab.experiments.scans")


@pytest.fixture(params=["cython", "python"])
def backend(request, monkeypatch):
    """Route every library module through one kernel implementation."""
    if request.param == "cython":
        if _kernels is None:
            pytest.skip("compiled kernels not built")
        mod = _kernels
    else:
        mod = _pykernels
    for name in _USERS:
        monkeypatch.setattr(importlib.import_module(name), "kernels", mod)
    return mod


def brute_order(a, n):
    """Least d >= 1 with a^d = 1 mod n by repeated multiplication."""
    x, d = a % n, 1
    while x != 1 % n:
        x = x * a % n
        d += 1
    return d


def brute_period(a, n, start=64):
    """Eventual period of a^k mod n, measured after the pre-period."""
    ref = pow(a, start, n)
    x, d = ref * a % n, 1
    while x != ref:
        x = x * a % n
        d += 1
    return d


def primes_upto(n):
    return [p for p in range(2, n + 1) if all(p % q for q in range(2, int(p**0.5) + 1))]


# Acceptance lines, printed once at the end of the run.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
