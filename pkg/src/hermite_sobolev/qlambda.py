"""Explicit construction of the Sobolev-Hermite polynomials for a 2x2 mass matrix

    A = [[M0, lam], [lam, M1]]

through connection formulas against the monic Hermite polynomials:

    Q_{2n}   = H_{2n}   - a_n H_{2n-1}/x - b_n (2x H_{2n} + H_{2n-1})/x^2
    Q_{2n+1} = H_{2n+1} - c_n H_{2n+1}/x - d_n (2x H_{2n} + H_{2n-1})/x^2

The quotients are exact polynomials, formed by shifting rational coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError
from .hermite_core import Poly, hermite_at_zero_exact, hermite_coefficients
from .kernels import kernel_const_exact
from .real import GUARD_BITS, Number, Real, as_fraction, resolve_precision, rounded, sqrt_pi, to_real, working_precision
from .sobolev_gram import MassMatrix, SobolevProduct, gram_orthogonalize

TREND_SLACK = 0.02


@dataclass(frozen=True)
class TwoByTwoCase:
    M0: Fraction
    M1: Fraction
    lam: Fraction

    def __post_init__(self):
        m0, m1, lam = as_fraction(self.M0), as_fraction(self.M1), as_fraction(self.lam)
        if m0 < 0 or m1 < 0 or m0 * m1 - lam * lam < 0:
            raise DomainError(f"[[{m0}, {lam}], [{lam}, {m1}]] is not positive semidefinite")
        object.__setattr__(self, "M0", m0)
        object.__setattr__(self, "M1", m1)
        object.__setattr__(self, "lam", lam)

    @property
    def det(self) -> Fraction:
        return self.M0 * self.M1 - self.lam * self.lam

    @property
    def rank(self) -> int:
        if self.det > 0:
            return 2
        return 1 if (self.M0 or self.M1) else 0

    @property
    def diagonal(self) -> bool:
        return self.lam == 0

    def mass(self) -> MassMatrix:
        return MassMatrix.two_by_two(self.M0, self.M1, self.lam)

    def product(self) -> SobolevProduct:
        return SobolevProduct.hermite(self.mass())

    def label(self) -> str:
        return f"M0={self.M0},M1={self.M1},lam={self.lam}"


def _kernel(n: int, i: int, j: int) -> Real:
    return to_real(kernel_const_exact(n, i, j)) / sqrt_pi()


def _delta(degree: int, case: TwoByTwoCase) -> Real:
    k00 = _kernel(degree - 1, 0, 0)
    k11 = _kernel(degree - 1, 1, 1)
    return 1 + to_real(case.M0) * k00 + to_real(case.M1) * k11 + to_real(case.det) * k00 * k11


def delta(n: int, case: TwoByTwoCase, prec: int | None = None) -> Real:
    """Normalizer for degree ``n``, built from the kernels of index ``n - 1`` at the origin."""
    if n < 1:
        raise ValueError("delta needs n >= 1")
    bits = resolve_precision(prec)
    with working_precision(bits + GUARD_BITS):
        value = _delta(n, case)
    return rounded(value, bits)


@dataclass(frozen=True)
class ConnectionCoeffs:
    """``(a, b)`` for degree ``2n`` or ``(c, d)`` for degree ``2n + 1``."""

    n: int
    parity: str
    first: Real
    second: Real

    @property
    def a(self) -> Real:
        return self._pick("even", self.first)

    @property
    def b(self) -> Real:
        return self._pick("even", self.second)

    @property
    def c(self) -> Real:
        return self._pick("odd", self.first)

    @property
    def d(self) -> Real:
        return self._pick("odd", self.second)

    def _pick(self, parity: str, value: Real) -> Real:
        if self.parity != parity:
            raise AttributeError(f"{parity} coefficient requested from a {self.parity} set")
        return value


def _connection(n: int, parity: str, case: TwoByTwoCase) -> tuple[Real, Real]:
    h0 = to_real(hermite_at_zero_exact(2 * n))
    root_pi = sqrt_pi()
    m0, m1, lam, det = (to_real(v) for v in (case.M0, case.M1, case.lam, case.det))
    if parity == "even":
        pre = (-1) ** (n - 1) * h0 / (root_pi * math.factorial(n - 1) * _delta(2 * n, case))
        return pre * (m0 + det * _kernel(2 * n - 1, 1, 1)), pre * lam
    dl = _delta(2 * n + 1, case)
    c = (-1) ** n * (2 * n + 1) * h0 * lam / (root_pi * math.factorial(n) * dl)
    d = (-1) ** (n - 1) * (2 * n + 1) * h0 * (m1 + det * _kernel(2 * n, 0, 0)) / (root_pi * math.factorial(n - 1) * dl)
    return c, d


def connection_coeffs(n: int, parity: str, case: TwoByTwoCase, prec: int | None = None) -> ConnectionCoeffs:
    if n < 1:
        raise ValueError("connection coefficients are defined for n >= 1")
    if parity not in ("even", "odd"):
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    bits = resolve_precision(prec)
    with working_precision(bits + GUARD_BITS):
        first, second = _connection(n, parity, case)
    return ConnectionCoeffs(n, parity, rounded(first, bits), rounded(second, bits))


@lru_cache(maxsize=512)
def _quotients(n: int) -> tuple[Poly, Poly, Poly]:
    """Exact ``H_{2n-1}/x``, ``H_{2n+1}/x`` and ``(2x H_{2n} + H_{2n-1})/x^2``."""
    h_odd_low = Poly(hermite_coefficients(2 * n - 1))
    h_odd_high = Poly(hermite_coefficients(2 * n + 1))
    combo = Poly(hermite_coefficients(2 * n)).mul_x().scale(2) + h_odd_low
    return h_odd_low.div_x(), h_odd_high.div_x(), combo.div_x(2)


def q_poly(n: int, case: TwoByTwoCase, prec: int | None = None) -> Poly:
    """Monic ``Q_n`` for the 2x2 case; degrees 0 and 1 come from the Gram construction."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    bits = resolve_precision(prec)
    if n < 2:
        return gram_orthogonalize(case.product(), n, bits)
    m = n // 2
    parity = "even" if n % 2 == 0 else "odd"
    u_even, u_odd, v = _quotients(m)
    with working_precision(bits + GUARD_BITS):
        first, second = _connection(m, parity, case)
        u = u_even if parity == "even" else u_odd
        h = hermite_coefficients(n)
        coeffs = []
        for k in range(n + 1):
            value = to_real(h[k])
            if u[k]:
                value -= first * to_real(u[k])
            if v[k]:
                value -= second * to_real(v[k])
            coeffs.append(value)
    return Poly(tuple(rounded(c, bits) for c in coeffs), bits)


# ---------------------------------------------------------------- limits


@dataclass(frozen=True)
class LimitQuantity:
    """A connection coefficient multiplied by ``n**power`` and its predicted limit."""

    name: str
    coefficient: str
    power: Fraction
    predicted: Fraction | None
    predicted_pi: bool = False  # predicted value carries a factor pi

    def label(self) -> str:
        if self.power == 0:
            return self.coefficient
        if self.power == 1:
            return f"n*{self.coefficient}"
        return f"n^{self.power}*{self.coefficient}"


def predicted_limits(case: TwoByTwoCase) -> list[LimitQuantity]:
    """The scaled coefficients with known limits for this mass pattern."""
    m0, m1, lam, det = case.M0, case.M1, case.lam, case.det
    half = Fraction(1, 2)
    if case.diagonal:
        return [
            LimitQuantity("a", "a", Fraction(0), -half if m0 > 0 else Fraction(0)),
            LimitQuantity("b", "b", half, Fraction(0)),
            LimitQuantity("c", "c", half, Fraction(0)),
            LimitQuantity("d", "d", Fraction(0), Fraction(-3, 4) if m1 > 0 else Fraction(0)),
        ]
    if det == 0:
        return [
            LimitQuantity("n*a", "a", Fraction(1), -3 * m0 / (8 * m1)),
            LimitQuantity("n*b", "b", Fraction(1), -3 * lam / (8 * m1)),
            LimitQuantity("n*c", "c", Fraction(1), 3 * lam / (4 * m1)),
            LimitQuantity("d", "d", Fraction(0), Fraction(-3, 4)),
        ]
    return [
        LimitQuantity("a", "a", Fraction(0), -half),
        LimitQuantity("n^3/2*b", "b", Fraction(3, 2), -3 * lam / (16 * det), True),
        LimitQuantity("n^3/2*c", "c", Fraction(3, 2), 3 * lam / (8 * det), True),
        LimitQuantity("d", "d", Fraction(0), Fraction(-3, 4)),
    ]


@dataclass(frozen=True)
class CoeffLimitRow:
    n: int
    quantity: str
    raw: Real
    scaled: Real
    predicted: Real
    distance: Real
    relative: Real | None


@dataclass
class CoeffLimitReport:
    case: TwoByTwoCase
    n_list: list[int]
    rows: list[CoeffLimitRow]

    def series(self, quantity: str) -> list[CoeffLimitRow]:
        return [r for r in self.rows if r.quantity == quantity]

    def decreasing(self, quantity: str, slack: float = TREND_SLACK) -> bool:
        return is_decreasing([r.distance for r in self.series(quantity)], slack)

    def quantities(self) -> list[str]:
        seen: list[str] = []
        for r in self.rows:
            if r.quantity not in seen:
                seen.append(r.quantity)
        return seen


def is_decreasing(values, slack: float = TREND_SLACK) -> bool:
    """Each value is below ``(1 + slack)`` times its predecessor; exact zeros always pass."""
    factor = to_real(1 + Fraction(slack).limit_denominator(10**6))
    return all(b == 0 or b < factor * a for a, b in zip(values, values[1:]))


def coeff_limit_report(case: TwoByTwoCase, n_list: list[int], prec: int | None = None) -> CoeffLimitReport:
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ValueError("n_list must be strictly ascending")
    if any(n < 1 for n in n_list):
        raise ValueError("n_list entries must be >= 1")
    bits = resolve_precision(prec)
    quantities = predicted_limits(case)
    rows = []
    for n in n_list:
        even = connection_coeffs(n, "even", case, bits)
        odd = connection_coeffs(n, "odd", case, bits)
        raw = {"a": even.a, "b": even.b, "c": odd.c, "d": odd.d}
        with working_precision(bits + GUARD_BITS):
            for q in quantities:
                value = raw[q.coefficient]
                scaled = value * to_real(n) ** to_real(q.power) if q.power else +value
                target = to_real(q.predicted)
                if q.predicted_pi:
                    target *= sqrt_pi() ** 2
                dist = abs(scaled - target)
                rel = dist / abs(target) if target != 0 else None
                rows.append(
                    CoeffLimitRow(
                        n,
                        q.name,
                        rounded(value, bits),
                        rounded(scaled, bits),
                        rounded(target, bits),
                        rounded(dist, bits),
                        None if rel is None else rounded(rel, bits),
                    )
                )
    return CoeffLimitReport(case, list(n_list), rows)


def coerce_case(m0: Number, m1: Number, lam: Number) -> TwoByTwoCase:
    return TwoByTwoCase(as_fraction(m0), as_fraction(m1), as_fraction(lam))
