"""Monic Hermite polynomials and the dense polynomial type used throughout.

``H_n`` is built from the monic three-term recurrence
``H_{k+1} = x H_k - (k/2) H_{k-1}`` in exact rational arithmetic; the
coefficient tables are cached and shared between threads.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction

from .errors import InternalConsistencyError, PrecisionMismatch
from .real import (
    GUARD_BITS,
    Number,
    Real,
    resolve_precision,
    rounded,
    sqrt_pi,
    to_real,
    working_precision,
)


@dataclass(frozen=True)
class Poly:
    """Dense polynomial, coefficients in ascending degree order.

    ``prec`` is ``None`` for exact (``Fraction``) coefficients, otherwise the
    bit precision every coefficient was rounded to.  Arithmetic between two
    real polynomials of different precision raises ``PrecisionMismatch``.
    """

    coeffs: tuple
    prec: int | None = None

    def __post_init__(self):
        if not self.coeffs:
            object.__setattr__(self, "coeffs", (Fraction(0),) if self.prec is None else (to_real(0),))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def exact(self) -> bool:
        return self.prec is None

    @property
    def leading(self):
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return self.leading == 1

    def __call__(self, x):
        return eval_poly(self, x)

    def __getitem__(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def _check(self, other: "Poly") -> None:
        if self.prec != other.prec:
            raise PrecisionMismatch(f"cannot combine polynomials at {self.prec} and {other.prec} bits")

    def _context(self):
        return working_precision(self.prec) if self.prec is not None else _null_context()

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        with self._context():
            return Poly(tuple(self[k] + other[k] for k in range(n)), self.prec)

    def __sub__(self, other: "Poly") -> "Poly":
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        with self._context():
            return Poly(tuple(self[k] - other[k] for k in range(n)), self.prec)

    def scale(self, c) -> "Poly":
        with self._context():
            if self.prec is not None:
                c = to_real(c)
            return Poly(tuple(c * a for a in self.coeffs), self.prec)

    def mul_x(self, k: int = 1) -> "Poly":
        zero = self.coeffs[0] * 0
        return Poly((zero,) * k + self.coeffs, self.prec)

    def div_x(self, k: int = 1) -> "Poly":
        """Exact division by ``x**k``; the ``k`` lowest coefficients must vanish."""
        low = self.coeffs[:k]
        if any(c != 0 for c in low):
            raise InternalConsistencyError(f"division by x^{k} leaves remainder {low}")
        return Poly(self.coeffs[k:], self.prec)

    def derivative(self) -> "Poly":
        with self._context():
            return Poly(tuple(k * c for k, c in enumerate(self.coeffs) if k > 0), self.prec)

    def derivatives_at_zero(self, count: int) -> list:
        """``[p(0), p'(0), ..., p^{(count-1)}(0)]``."""
        with self._context():
            return [math.factorial(i) * self[i] for i in range(count)]

    def substitute_square(self) -> "Poly":
        """``p(x**2)``."""
        zero = self.coeffs[0] * 0
        out = []
        for c in self.coeffs:
            out.extend((c, zero))
        return Poly(tuple(out[:-1]), self.prec)

    def parity_defect(self):
        """Largest |coefficient| at the parity opposite to the degree."""
        bad = [abs(c) for k, c in enumerate(self.coeffs) if (self.degree - k) % 2 == 1]
        return max(bad) if bad else self.coeffs[0] * 0

    def to_real(self, prec: int | None = None) -> "Poly":
        bits = resolve_precision(prec)
        with working_precision(bits):
            return Poly(tuple(to_real(c) for c in self.coeffs), bits)

    def rounded(self, prec: int) -> "Poly":
        return Poly(tuple(rounded(c, prec) for c in self.coeffs), prec)


class _null_context:
    def __enter__(self):
        return None

    def __exit__(self, *exc):
        return False


def eval_poly(p: Poly, x: Number):
    """Horner evaluation.

    Exact polynomials at rational ``x`` give exact results; otherwise the
    evaluation runs at the polynomial's precision (or the current context
    for exact coefficients at a real point).
    """
    if p.exact and isinstance(x, (int, Fraction)):
        acc = Fraction(0)
        for c in reversed(p.coeffs):
            acc = acc * x + c
        return acc
    ctx = working_precision(p.prec) if p.prec is not None else _null_context()
    with ctx:
        xr = to_real(x)
        acc = to_real(0)
        if p.exact:
            for c in reversed(p.coeffs):
                acc = acc * xr + to_real(c)
        else:
            for c in reversed(p.coeffs):
                acc = acc * xr + c
        return acc


_HERMITE: list[tuple[Fraction, ...]] = [(Fraction(1),), (Fraction(0), Fraction(1))]
_HERMITE_LOCK = threading.Lock()


def hermite_coefficients(n: int) -> tuple[Fraction, ...]:
    """Exact coefficients of monic ``H_n``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n >= len(_HERMITE):
        with _HERMITE_LOCK:
            while len(_HERMITE) <= n:
                k = len(_HERMITE) - 1
                hk, hkm1 = _HERMITE[k], _HERMITE[k - 1]
                half_k = Fraction(k, 2)
                nxt = [Fraction(0)] + list(hk)
                for i, c in enumerate(hkm1):
                    nxt[i] -= half_k * c
                _HERMITE.append(tuple(nxt))
    return _HERMITE[n]


def hermite_monic(n: int, prec: int | None = None, *, exact: bool = False) -> Poly:
    poly = Poly(hermite_coefficients(n))
    return poly if exact else poly.to_real(prec)


def hermite_norm_sq_exact(n: int) -> Fraction:
    """``||H_n||^2 / sqrt(pi) = n! / 2^n``."""
    return Fraction(math.factorial(n), 2**n)


def hermite_norm_sq(n: int, prec: int | None = None) -> Real:
    bits = resolve_precision(prec)
    with working_precision(bits + GUARD_BITS):
        value = to_real(hermite_norm_sq_exact(n)) * sqrt_pi()
    return rounded(value, bits)


def hermite_at_zero_exact(n: int) -> Fraction:
    if n % 2:
        return Fraction(0)
    m = n // 2
    return Fraction((-1) ** m * math.factorial(n), 2**n * math.factorial(m))


def hermite_at_zero(n: int, prec: int | None = None) -> Real:
    bits = resolve_precision(prec)
    with working_precision(bits):
        return to_real(hermite_at_zero_exact(n))


def hermite_values(n: int, x: Real) -> list[Real]:
    """``[H_0(x), ..., H_n(x)]`` by forward recurrence at the current precision."""
    values = [to_real(1)]
    if n == 0:
        return values
    values.append(+x)
    for k in range(1, n):
        values.append(x * values[k] - (k / to_real(2)) * values[k - 1])
    return values


def falling_factorial(k: int, i: int) -> int:
    """``k (k-1) ... (k-i+1)``, the factor in ``H_k^{(i)} = k!/(k-i)! H_{k-i}``."""
    out = 1
    for t in range(i):
        out *= k - t
    return out

