import os
from fractions import Fraction

import gmpy2
import pytest

from hermite_sobolev.real import GUARD_BITS, working_precision

os.environ.setdefault("HYPOTHESIS_STORAGE_DIRECTORY", "/tmp/hypothesis-hermite-sobolev")

BITS = 256

ACCEPTANCE_LINES: list[str] = []


def record_acceptance(line: str) -> None:
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


def real(value, bits: int = BITS):
    with working_precision(bits + GUARD_BITS):
        if isinstance(value, Fraction):
            return gmpy2.mpfr(gmpy2.mpq(value.numerator, value.denominator))
        return gmpy2.mpfr(value)


def rel(a, b, bits: int = BITS):
    """Relative difference computed with guard bits."""
    with working_precision(bits + GUARD_BITS):
        a, b = gmpy2.mpfr(a), gmpy2.mpfr(b)
        scale = max(abs(a), abs(b))
        return abs(a - b) / scale if scale else abs(a - b)


def absdiff(a, b, bits: int = BITS):
    with working_precision(bits + GUARD_BITS):
        return abs(gmpy2.mpfr(a) - gmpy2.mpfr(b))


@pytest.fixture
def sqrt_pi():
    with working_precision(BITS + GUARD_BITS):
        return gmpy2.sqrt(gmpy2.const_pi())
