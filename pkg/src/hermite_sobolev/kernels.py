"""Christoffel-Darboux kernels of the Hermite system and their derivatives.

``kernel_sum`` is the literal definition
``K_n^{(i,j)}(x, y) = sum_k H_k^{(i)}(x) H_k^{(j)}(y) / ||H_k||^2`` and
serves as the oracle for every closed form in this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import gmpy2

from .errors import DomainError, UnsupportedCase
from .hermite_core import (
    falling_factorial,
    hermite_coefficients,
    hermite_norm_sq_exact,
    hermite_values,
)
from .real import GUARD_BITS, Number, Real, resolve_precision, rounded, sqrt_pi, to_real, working_precision


@dataclass(frozen=True)
class KernelQuery:
    n: int
    i: int = 0
    j: int = 0

    def __post_init__(self):
        if self.n < 0 or self.i < 0 or self.j < 0:
            raise ValueError(f"kernel indices must be nonnegative: {self}")


def kernel_sum(q: KernelQuery, x: Number, y: Number, prec: int | None = None) -> Real:
    bits = resolve_precision(prec)
    n, i, j = q.n, q.i, q.j
    with working_precision(bits + GUARD_BITS):
        xr, yr = to_real(x), to_real(y)
        hx = hermite_values(n, xr)
        hy = hx if yr == xr else hermite_values(n, yr)
        root_pi = sqrt_pi()
        total = to_real(0)
        for k in range(max(i, j), n + 1):
            a = falling_factorial(k, i) * hx[k - i]
            b = falling_factorial(k, j) * hy[k - j]
            total += (a * b) / (to_real(hermite_norm_sq_exact(k)) * root_pi)
    return rounded(total, bits)


def kernel_cd(n: int, x: Number, y: Number, prec: int | None = None) -> Real:
    """``K_n(x, y)`` from the Christoffel-Darboux quotient.

    Points closer than ``2**(-prec/2)`` are evaluated by the literal sum,
    since the confluent form is not implemented.
    """
    bits = resolve_precision(prec)
    with working_precision(bits + GUARD_BITS):
        xr, yr = to_real(x), to_real(y)
        if abs(xr - yr) < to_real(2) ** (-(bits // 2)):
            return kernel_sum(KernelQuery(n), x, y, bits)
        hx = hermite_values(n + 1, xr)
        hy = hermite_values(n + 1, yr)
        norm = to_real(hermite_norm_sq_exact(n)) * sqrt_pi()
        value = (hx[n + 1] * hy[n] - hy[n + 1] * hx[n]) / ((xr - yr) * norm)
    return rounded(value, bits)


def kernel_closed_at0(n: int, j: int, x: Number, prec: int | None = None) -> Real:
    """``K_n^{(0,j)}(x, 0)`` for ``j <= 3`` from the parity-indexed closed forms.

    Supported index patterns: ``j = 0`` any ``n``; ``j = 1`` any ``n >= 1``;
    ``j = 2`` odd ``n``; ``j = 3`` even ``n``.
    """
    bits = resolve_precision(prec)
    if j == 0:
        m = n // 2
    elif j == 1 and n >= 1:
        m = (n + 1) // 2
    elif j == 2 and n % 2 == 1:
        m = (n + 1) // 2
    elif j == 3 and n % 2 == 0:
        m = n // 2
    else:
        raise UnsupportedCase(f"no closed form for K_{n}^(0,{j})(x,0)")
    with working_precision(bits + GUARD_BITS):
        xr = to_real(x)
        if xr == 0:
            raise DomainError("closed forms are quotients by powers of x; use kernel_const at x = 0")
        if j > n:
            return rounded(to_real(0), bits)  # every term differentiates to zero
        h = hermite_values(2 * m + 1, xr)
        root_pi = sqrt_pi()
        if j == 0:
            value = (-1) ** m * h[2 * m + 1] / (math.factorial(m) * root_pi * xr)
        elif j == 1:
            num = 2 * xr * h[2 * m] + h[2 * m - 1]
            value = (-1) ** (m - 1) * num / (root_pi * math.factorial(m - 1) * xr**2)
        elif j == 2:
            num = 2 * xr * h[2 * m] + (1 - 2 * m * xr**2) * h[2 * m - 1]
            value = 2 * (-1) ** (m - 1) * num / (root_pi * math.factorial(m - 1) * xr**3)
        else:
            num = (3 - 6 * m * xr**2) * h[2 * m + 1] - (2 * m + 1) * (3 - 2 * m * xr**2) * xr * h[2 * m]
            value = 2 * (-1) ** m * num / (root_pi * math.factorial(m) * xr**4)
    return rounded(value, bits)


def _taylor(coeffs, j: int, x: Real) -> Real:
    acc = to_real(0)
    for c in reversed(coeffs[: j + 1]):
        acc = acc * x + to_real(c)
    return acc


def kernel_taylor_general(n: int, j: int, x: Number, prec: int | None = None) -> Real:
    """``K_n^{(0,j)}(x, 0)`` through the Taylor polynomials of ``H_n`` and ``H_{n+1}`` at 0."""
    bits = resolve_precision(prec)
    if j < 0:
        raise ValueError("j must be nonnegative")
    with working_precision(bits + GUARD_BITS + 8 * j):
        xr = to_real(x)
        if xr == 0:
            raise DomainError("the Taylor-polynomial formula divides by x^(j+1)")
        if j > n:
            return rounded(to_real(0), bits)
        h = hermite_values(n + 1, xr)
        tn = _taylor(hermite_coefficients(n), j, xr)
        tn1 = _taylor(hermite_coefficients(n + 1), j, xr)
        norm = to_real(hermite_norm_sq_exact(n)) * sqrt_pi()
        value = math.factorial(j) * (tn * h[n + 1] - tn1 * h[n]) / (norm * xr ** (j + 1))
    return rounded(value, bits)


def kernel_const_exact(n: int, i: int, j: int) -> Fraction:
    """``sqrt(pi) * K_n^{(i,j)}(0, 0)`` as an exact rational."""
    if (i + j) % 2 == 1:
        return Fraction(0)
    if n == 0 and i + j > 0:
        return Fraction(0)
    f = math.factorial
    two = Fraction(2)
    key = (min(i, j), max(i, j))
    if key == (0, 0):
        m = n // 2
        return Fraction(f(2 * m + 1), 4**m * f(m) ** 2)
    if key == (1, 1):
        m = (n + 1) // 2
        return Fraction(f(2 * m + 1)) / (3 * two ** (2 * m - 2) * f(m) * f(m - 1))
    if n % 2 == 1 and (n + 1) // 2 >= 2 and key in ((0, 2), (2, 2)):
        m = (n + 1) // 2
        if key == (0, 2):
            return -Fraction(f(2 * m - 1)) / (3 * two ** (2 * m - 4) * f(m - 1) * f(m - 2))
        return Fraction(f(2 * m - 1) * (3 * m - 1)) / (15 * two ** (2 * m - 6) * f(m - 1) * f(m - 2))
    if n % 2 == 0 and n // 2 >= 2 and key in ((1, 3), (3, 3)):
        m = n // 2
        if key == (1, 3):
            return -Fraction(f(2 * m + 1)) / (5 * two ** (2 * m - 4) * f(m) * f(m - 2))
        return Fraction(f(2 * m + 1) * (5 * m - 3)) / (35 * two ** (2 * m - 6) * f(m) * f(m - 2))
    raise UnsupportedCase(f"no closed form for K_{n}^({i},{j})(0,0)")


def kernel_const(n: int, i: int, j: int, prec: int | None = None) -> Real:
    """``K_n^{(i,j)}(0, 0)``: exact factorial expression, one final division by sqrt(pi)."""
    bits = resolve_precision(prec)
    exact = kernel_const_exact(n, i, j)
    with working_precision(bits + GUARD_BITS):
        value = to_real(exact) / sqrt_pi()
    return rounded(value, bits)


def supported_const_cases(n: int) -> list[tuple[int, int]]:
    """The ``(i, j)`` pairs with a closed form at kernel index ``n``."""
    out = []
    for i in range(4):
        for j in range(4):
            try:
                kernel_const_exact(n, i, j)
            except UnsupportedCase:
                continue
            out.append((i, j))
    return out


def relative_error(a: Real, b: Real) -> Real:
    if a == b:
        return gmpy2.mpfr(0)
    with working_precision(max(a.precision, b.precision)):
        return abs(a - b) / max(abs(a), abs(b))
