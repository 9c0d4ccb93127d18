"""Bessel functions of the first kind by their power series, their zeros,
and the Mehler-Heine limit functions.

Orders are rationals; half-integer and integer orders get exact Gamma
values so the series coefficients carry no error beyond the final division
by ``sqrt(pi)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from enum import Enum
from fractions import Fraction
from typing import Tuple

import gmpy2

from .errors import BracketError, DomainError
from .real import GUARD_BITS, Number, Real, as_fraction, resolve_precision, rounded, sqrt_pi, to_real, working_precision
from .rootfind import refine_bracketed, tight_bracket

EXPANSION_BUDGET = 1000


def gamma_exact(z: Fraction) -> Tuple[Fraction, bool]:
    """``Gamma(z) = q * sqrt(pi)**e`` for integer or half-integer ``z``.

    Returns ``(q, e == 1)``.  Nonpositive integers are poles.
    """
    z = Fraction(z)
    if z.denominator == 1:
        k = int(z)
        if k <= 0:
            raise DomainError(f"Gamma has a pole at {k}")
        return Fraction(math.factorial(k - 1)), False
    if z.denominator == 2:
        k = int(z - Fraction(1, 2))
        if k >= 0:
            return Fraction(math.factorial(2 * k), 4**k * math.factorial(k)), True
        k = -k
        return Fraction((-4) ** k * math.factorial(k), math.factorial(2 * k)), True
    raise ValueError(f"{z} is neither an integer nor a half-integer")


def _recip_gamma(z: Fraction) -> Real:
    """``1 / Gamma(z)`` at the current precision (zero at the poles)."""
    try:
        q, has_root = gamma_exact(z)
    except DomainError:
        return to_real(0)
    except ValueError:
        return 1 / gmpy2.gamma(to_real(z))
    value = 1 / to_real(q)
    return value / sqrt_pi() if has_root else value


def _series_guard(x: Real) -> int:
    # largest series term is at most about exp(|x|), the result can be O(1)
    return GUARD_BITS + int(1.5 * float(abs(x))) + 8


def _scaled_series(alpha: Fraction, x: Real) -> Real:
    """``sum_k (-1)^k (x/2)^{2k} / (k! Gamma(k + alpha + 1))`` at the current precision."""
    if alpha.denominator == 1 and alpha < 0:
        raise DomainError("negative integer orders are not supported")
    bits = gmpy2.get_context().precision
    q = -(x / 2) ** 2
    term = _recip_gamma(alpha + 1)
    total = +term
    k = 0
    while True:
        k += 1
        nxt = term * q / (k * (k + alpha))
        if abs(nxt) < abs(term) and abs(nxt) <= abs(total) * to_real(2) ** (-bits):
            break
        total += nxt
        term = nxt
        if term == 0:
            break
    return total


def bessel_j_scaled(alpha: Number, x: Number, prec: int | None = None) -> Real:
    """The entire function ``(x/2)^{-alpha} J_alpha(x)``."""
    bits = resolve_precision(prec)
    a = as_fraction(alpha)
    with working_precision(bits + GUARD_BITS):
        xr = to_real(x)
    with working_precision(bits + _series_guard(xr)):
        value = _scaled_series(a, to_real(xr))
    return rounded(value, bits)


def bessel_j(alpha: Number, x: Number, prec: int | None = None) -> Real:
    """``J_alpha(x)`` for ``x >= 0`` by the power series."""
    bits = resolve_precision(prec)
    a = as_fraction(alpha)
    with working_precision(bits + GUARD_BITS):
        xr = to_real(x)
    if xr < 0:
        raise DomainError("negative arguments are not supported")
    if xr == 0:
        if a == 0:
            return rounded(to_real(1), bits)
        if a > 0:
            return rounded(to_real(0), bits)
        raise DomainError(f"J_{a} is singular at 0")
    with working_precision(bits + _series_guard(xr)):
        xr = to_real(xr)
        value = _scaled_series(a, xr) * _half_power(xr, a)
    return rounded(value, bits)


def _half_power(x: Real, power: Fraction) -> Real:
    half = x / 2
    if power.denominator == 1:
        return half ** int(power)
    return gmpy2.exp(to_real(power) * gmpy2.log(half))


def _bessel_fdf(a: Fraction):
    def fdf(x):
        value = _scaled_series(a, x) * _half_power(x, a)
        lower = _scaled_series(a - 1, x) * _half_power(x, a - 1)
        upper = _scaled_series(a + 1, x) * _half_power(x, a + 1)
        return value, (lower - upper) / 2

    return fdf


def mcmahon_guess(alpha: Fraction, k: int) -> float:
    """Leading McMahon term ``(k + alpha/2 - 1/4) pi`` for ``j_{alpha,k}``."""
    return (k + float(alpha) / 2 - 0.25) * math.pi


def bracket_kth_sign_change(f, k: int, start: Real, step: Real, stop_hint: float):
    """Scan ``f`` from ``start`` with spacing ``step`` until the ``k``-th sign change.

    The scan first covers ``[start, stop_hint]`` and then grows one step at a
    time, at most ``EXPANSION_BUDGET`` extra steps.
    """
    x_prev = start
    f_prev = f(x_prev)
    found = 0
    steps = 0
    limit = int(max(0.0, (stop_hint - float(start)) / float(step))) + EXPANSION_BUDGET
    while steps < limit:
        steps += 1
        x = start + steps * step
        fx = f(x)
        if (f_prev > 0 and fx < 0) or (f_prev < 0 and fx > 0):
            found += 1
            if found == k:
                return x_prev, x
        if fx != 0:
            x_prev, f_prev = x, fx
    raise BracketError(f"sign change #{k} not bracketed within {limit} steps of {step} from {start}")


def bessel_zero(alpha: Number, k: int, prec: int | None = None) -> Real:
    """``j_{alpha,k}``, the ``k``-th positive zero of ``J_alpha``."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    return _bessel_zero(as_fraction(alpha), k, resolve_precision(prec))


@lru_cache(maxsize=1024)
def _bessel_zero(a: Fraction, k: int, bits: int) -> Real:
    if a <= -1:
        raise DomainError("zero search supports alpha > -1")
    guess = mcmahon_guess(a, k)
    work = bits + GUARD_BITS + _series_guard(to_real(guess + 10))
    with working_precision(work):
        step = gmpy2.const_pi() / 4
        lo, hi = bracket_kth_sign_change(lambda x: _scaled_series(a, x), k, step / 64, step, guess + math.pi / 2)
        root, _, _ = refine_bracketed(_bessel_fdf(a), lo, hi, bits + GUARD_BITS // 2)
    return rounded(root, bits)


class LimitTag(Enum):
    HERMITE_EVEN = "HermiteEven"
    HERMITE_ODD = "HermiteOdd"
    EVEN_MASS = "EvenMass"
    ODD_MASS = "OddMass"
    EVEN_BOTH = "EvenBoth"
    ODD_BOTH = "OddBoth"
    EVEN_GAP = "EvenGap"
    ODD_GAP = "OddGap"
    CONJECTURE = "Conjecture"


_H = Fraction(1, 2)
_TERMS = {
    LimitTag.HERMITE_EVEN: ((Fraction(1), -_H),),
    LimitTag.HERMITE_ODD: ((Fraction(1), _H),),
    LimitTag.EVEN_MASS: ((Fraction(-1), Fraction(3, 2)),),
    LimitTag.ODD_MASS: ((Fraction(-1), Fraction(5, 2)),),
    LimitTag.EVEN_BOTH: ((Fraction(1), Fraction(7, 2)),),
    LimitTag.ODD_BOTH: ((Fraction(1), Fraction(9, 2)),),
    LimitTag.EVEN_GAP: ((Fraction(2, 3), Fraction(7, 2)), (Fraction(-1), Fraction(3, 2)), (Fraction(-2, 3), -_H)),
    LimitTag.ODD_GAP: ((Fraction(2, 5), Fraction(9, 2)), (Fraction(-1), Fraction(5, 2)), (Fraction(-2, 5), _H)),
}
_EVEN_TAGS = {LimitTag.HERMITE_EVEN, LimitTag.EVEN_MASS, LimitTag.EVEN_BOTH, LimitTag.EVEN_GAP}


@dataclass(frozen=True)
class LimitFunctionId:
    """A limit function ``x -> (x/2)^{1/2} * sum_i c_i J_{alpha_i}(x)``."""

    tag: LimitTag
    r: int = 0
    parity: str = ""

    def __post_init__(self):
        if self.tag is LimitTag.CONJECTURE:
            if self.r < 1 or self.parity not in ("even", "odd"):
                raise ValueError("Conjecture ids need r >= 1 and parity even|odd")
        elif self.r or self.parity:
            raise ValueError(f"{self.tag.value} takes no parameters")

    @classmethod
    def conjecture(cls, r: int, parity: str) -> "LimitFunctionId":
        return cls(LimitTag.CONJECTURE, r, parity)

    @property
    def terms(self) -> Tuple[Tuple[Fraction, Fraction], ...]:
        """``(coefficient, order)`` pairs of the Bessel combination."""
        if self.tag is LimitTag.CONJECTURE:
            shift = -_H if self.parity == "even" else _H
            return ((Fraction((-1) ** self.r), shift + 2 * self.r),)
        return _TERMS[self.tag]

    @property
    def family_parity(self) -> str:
        if self.tag is LimitTag.CONJECTURE:
            return self.parity
        return "even" if self.tag in _EVEN_TAGS else "odd"

    @property
    def label(self) -> str:
        if self.tag is LimitTag.CONJECTURE:
            return f"Conjecture(r={self.r},{self.parity})"
        return self.tag.value

    def same_function(self, other: "LimitFunctionId") -> bool:
        return sorted(self.terms) == sorted(other.terms)

    def vanishing_order(self) -> int:
        """Order of the zero of the limit function at the origin."""
        return int(min(alpha + _H for _, alpha in self.terms))

    def accelerated_zeros(self) -> int:
        """Positive zeros of the scaled family that collapse onto the origin."""
        parity = 0 if self.family_parity == "even" else 1
        return (self.vanishing_order() - parity) // 2

    def __str__(self) -> str:
        return self.label


HERMITE_EVEN = LimitFunctionId(LimitTag.HERMITE_EVEN)
HERMITE_ODD = LimitFunctionId(LimitTag.HERMITE_ODD)
EVEN_MASS = LimitFunctionId(LimitTag.EVEN_MASS)
ODD_MASS = LimitFunctionId(LimitTag.ODD_MASS)
EVEN_BOTH = LimitFunctionId(LimitTag.EVEN_BOTH)
ODD_BOTH = LimitFunctionId(LimitTag.ODD_BOTH)
EVEN_GAP = LimitFunctionId(LimitTag.EVEN_GAP)
ODD_GAP = LimitFunctionId(LimitTag.ODD_GAP)


def _limit_at(terms, x: Real) -> Real:
    total = to_real(0)
    for c, alpha in terms:
        power = alpha + _H
        factor = (x / 2) ** int(power) if power.denominator == 1 else _half_power(x, power)
        total += to_real(c) * factor * _scaled_series(alpha, x)
    return total


def limit_function(fid: LimitFunctionId, x: Number, prec: int | None = None) -> Real:
    """Value of the limit function; ``x = 0`` is taken by continuity of the series."""
    bits = resolve_precision(prec)
    with working_precision(bits + GUARD_BITS):
        xr = to_real(x)
    if xr < 0:
        raise DomainError("limit functions are evaluated on x >= 0")
    with working_precision(bits + _series_guard(xr)):
        value = _limit_at(fid.terms, to_real(xr))
    return rounded(value, bits)


def limit_zeros(fid: LimitFunctionId, count: int, prec: int | None = None) -> list[Real]:
    """First ``count`` positive zeros of the limit function.

    Single-term limits reduce to Bessel zeros; combinations are bracketed
    on a grid and refined by bisection.
    """
    return list(_limit_zeros(fid, count, resolve_precision(prec)))


@lru_cache(maxsize=256)
def _limit_zeros(fid: LimitFunctionId, count: int, bits: int) -> tuple:
    if len(fid.terms) == 1:
        alpha = fid.terms[0][1]
        return tuple(_bessel_zero(alpha, k, bits) for k in range(1, count + 1))
    out = []
    guess = (count + 3) * math.pi
    with working_precision(bits + GUARD_BITS + _series_guard(to_real(guess + 10))):
        step = gmpy2.const_pi() / 16
        order = fid.vanishing_order()

        def g(x):
            # strip the zero at the origin so the scan starts from a nonzero value
            return _limit_at(fid.terms, x) / x**order

        def fdf(x):
            return g(x), None

        for k in range(1, count + 1):
            lo, hi = bracket_kth_sign_change(g, k, step / 64, step, guess)
            root, _, _ = refine_bracketed(fdf, lo, hi, bits + GUARD_BITS // 2)
            out.append(rounded(root, bits))
    return tuple(out)


def bessel_zero_bracket(alpha: Number, root: Real, prec: int | None = None):
    """A sign-change bracket of width ``2**(-prec/2)`` around a computed zero."""
    bits = resolve_precision(prec)
    a = as_fraction(alpha)
    with working_precision(bits + GUARD_BITS + _series_guard(root)):
        return tight_bracket(lambda x: _scaled_series(a, x), to_real(root), to_real(2) ** (-(bits // 2)))
