"""Extended-precision scalars.

All numerics run on MPFR floats (``gmpy2.mpfr``) whose precision is taken
from the active gmpy2 context.  Library entry points accept ``prec=None``
(meaning the process default, 256 bits unless overridden through the
``HERMITE_SOBOLEV_PREC`` environment variable), compute internally with a
few guard bits and round their results back to ``prec``.
"""

from __future__ import annotations

import math
import os
from contextlib import contextmanager
from fractions import Fraction
from typing import Iterator, Union

import gmpy2
from gmpy2 import mpfr, mpq

Real = type(mpfr(0))
Number = Union[int, Fraction, str, float, Real]

ENV_PRECISION = "HERMITE_SOBOLEV_PREC"
MIN_PRECISION = 64
GUARD_BITS = 64

_default_precision = int(os.environ.get(ENV_PRECISION, "256"))


def default_precision() -> int:
    return _default_precision


def set_default_precision(bits: int) -> None:
    global _default_precision
    if int(bits) < MIN_PRECISION:
        raise ValueError(f"precision must be at least {MIN_PRECISION} bits, got {bits}")
    _default_precision = int(bits)


def resolve_precision(prec: int | None) -> int:
    bits = _default_precision if prec is None else int(prec)
    if bits < MIN_PRECISION:
        raise ValueError(f"precision must be at least {MIN_PRECISION} bits, got {bits}")
    return bits


def decimal_digits(bits: int) -> int:
    """Number of decimal digits carried by a ``bits``-bit mantissa."""
    return int(bits * math.log10(2))


@contextmanager
def working_precision(bits: int) -> Iterator[None]:
    with gmpy2.context(gmpy2.get_context(), precision=int(bits)):
        yield


def current_precision() -> int:
    return gmpy2.get_context().precision


def to_real(value: Number) -> Real:
    """Convert to an mpfr correctly rounded at the current context precision."""
    if isinstance(value, Fraction):
        return mpfr(mpq(value.numerator, value.denominator))
    if isinstance(value, Real):
        return +value  # unary plus rounds to the context precision
    return mpfr(value)


def rounded(x: Real, bits: int) -> Real:
    return mpfr(x, int(bits))


def as_fraction(value: Number) -> Fraction:
    """Exact rational value of a number (floats and mpfr are binary rationals)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, Real):
        num, den = value.as_integer_ratio()
        return Fraction(int(num), int(den))
    return Fraction(value)


def sqrt_pi() -> Real:
    return gmpy2.sqrt(gmpy2.const_pi())


def tolerance(bits: int, slack: int) -> Real:
    """``10**-(digits(bits) - slack)``, the relative tolerances used in the checks."""
    with working_precision(max(bits, MIN_PRECISION)):
        return mpfr(10) ** (-(decimal_digits(bits) - slack))


def ulp(x: Real, bits: int) -> Real:
    """Unit in the last place of ``x`` for a ``bits``-bit mantissa."""
    if x == 0:
        return mpfr(2) ** (gmpy2.get_emin_min())
    _, exp = gmpy2.frexp(x)
    return mpfr(2) ** (int(exp) - int(bits))


def fmt(x: Real | Fraction | int, digits: int = 40) -> str:
    """Deterministic decimal rendering used by reports."""
    if isinstance(x, (int, Fraction)):
        x = to_real(x)
    if not gmpy2.is_finite(x):
        return str(x)
    if x == 0:
        x = abs(x)  # no signed zeros in reports
    return format(x, f".{digits}g")
