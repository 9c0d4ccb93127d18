"""Scaled polynomial families near the origin and their Bessel-type limits.

Even members are scaled as ``(-1)^n sqrt(n)/n! * P_{2n}(x/(2 sqrt(n)))`` and
odd members as ``(-1)^n/n! * P_{2n+1}(x/(2 sqrt(n)))``.  The coefficients of
the scaled polynomial are formed once per ``(family, n)``, which keeps the
evaluation free of the huge dynamic range of the raw coefficients.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

import gmpy2

from .bessel import (
    EVEN_BOTH,
    EVEN_GAP,
    EVEN_MASS,
    HERMITE_EVEN,
    HERMITE_ODD,
    ODD_BOTH,
    ODD_GAP,
    ODD_MASS,
    LimitFunctionId,
    limit_function,
)
from .errors import DomainError, UncoveredCase
from .hermite_core import Poly, hermite_monic
from .qlambda import TREND_SLACK, TwoByTwoCase, is_decreasing, q_poly
from .real import GUARD_BITS, Real, as_fraction, resolve_precision, rounded, to_real, working_precision
from .sobolev_gram import MassMatrix, SobolevProduct, gram_orthogonalize

FINAL_SUP_THRESHOLD = 0.05
SIGN_CHECK_X = Fraction(1, 10)
DEFAULT_N_LIST = (25, 50, 100, 200)


def default_grid(points: int = 121, start: Fraction = Fraction(1, 10), stop: Fraction = Fraction(121, 10)) -> list[Fraction]:
    """Equispaced rational grid including both ends."""
    if points < 2:
        return [start]
    step = (stop - start) / (points - 1)
    return [start + k * step for k in range(points)]


class Source(Enum):
    HERMITE = "hermite"
    QLAMBDA = "q"
    DIAGONAL_S = "s"


@dataclass(frozen=True)
class ScaledFamily:
    source: Source
    parity: str
    case: TwoByTwoCase | None = None
    masses: tuple = ()

    def __post_init__(self):
        if self.parity not in ("even", "odd"):
            raise ValueError(f"parity must be 'even' or 'odd', got {self.parity!r}")
        if self.source is Source.QLAMBDA and self.case is None:
            raise ValueError("a 2x2 family needs its mass case")
        if self.source is Source.DIAGONAL_S:
            masses = tuple(as_fraction(m) for m in self.masses)
            if not masses or len(masses) % 2:
                raise ValueError("diagonal families need an even, nonzero number of masses")
            if any(m < 0 for m in masses):
                raise ValueError("masses must be nonnegative")
            object.__setattr__(self, "masses", masses)

    @classmethod
    def hermite(cls, parity: str) -> "ScaledFamily":
        return cls(Source.HERMITE, parity)

    @classmethod
    def qlambda(cls, case: TwoByTwoCase, parity: str) -> "ScaledFamily":
        return cls(Source.QLAMBDA, parity, case=case)

    @classmethod
    def diagonal(cls, masses: Sequence, parity: str) -> "ScaledFamily":
        return cls(Source.DIAGONAL_S, parity, masses=tuple(masses))

    @property
    def r(self) -> int:
        return len(self.masses) // 2

    def product(self) -> SobolevProduct:
        if self.source is Source.QLAMBDA:
            return self.case.product()
        if self.source is Source.DIAGONAL_S:
            return SobolevProduct.hermite(MassMatrix.diagonal(self.masses))
        return SobolevProduct.hermite(MassMatrix.zero(2))

    def degree(self, n: int) -> int:
        return 2 * n if self.parity == "even" else 2 * n + 1

    def polynomial(self, degree: int, prec: int | None = None) -> Poly:
        bits = resolve_precision(prec)
        if self.source is Source.HERMITE:
            return hermite_monic(degree, bits)
        if self.source is Source.QLAMBDA:
            return q_poly(degree, self.case, bits)
        return gram_orthogonalize(self.product(), degree, bits)

    def label(self) -> str:
        if self.source is Source.HERMITE:
            return f"hermite/{self.parity}"
        if self.source is Source.QLAMBDA:
            return f"q[{self.case.label()}]/{self.parity}"
        return f"s[{','.join(str(m) for m in self.masses)}]/{self.parity}"


def _pattern(flags: Sequence[bool], limits: dict) -> LimitFunctionId:
    return limits[tuple(flags)]


def select_limit(fam: ScaledFamily) -> LimitFunctionId:
    """Limit function of the scaled family for every mass pattern with a known limit."""
    even = fam.parity == "even"
    if fam.source is Source.HERMITE:
        return HERMITE_EVEN if even else HERMITE_ODD
    if fam.source is Source.QLAMBDA:
        c = fam.case
        if c.diagonal:
            if even:
                return EVEN_MASS if c.M0 > 0 else HERMITE_EVEN
            return ODD_MASS if c.M1 > 0 else HERMITE_ODD
        if c.rank == 1:
            return HERMITE_EVEN if even else ODD_MASS
        return EVEN_MASS if even else ODD_MASS
    masses = fam.masses
    if fam.r == 1:
        m = masses[0] if even else masses[1]
        if even:
            return EVEN_MASS if m > 0 else HERMITE_EVEN
        return ODD_MASS if m > 0 else HERMITE_ODD
    if fam.r == 2:
        first, second = (masses[0], masses[2]) if even else (masses[1], masses[3])
        table = {
            (False, False): HERMITE_EVEN if even else HERMITE_ODD,
            (True, False): EVEN_MASS if even else ODD_MASS,
            (False, True): EVEN_GAP if even else ODD_GAP,
            (True, True): EVEN_BOTH if even else ODD_BOTH,
        }
        return _pattern((first > 0, second > 0), table)
    if all(m > 0 for m in masses):
        return LimitFunctionId.conjecture(fam.r, fam.parity)
    raise UncoveredCase(f"no limit is known for {fam.r} mass pairs with a zero mass: {fam.label()}")


# ---------------------------------------------------------------- scaled polynomials

_SCALED: dict = {}
_SCALED_LOCK = threading.Lock()


def scaled_poly(fam: ScaledFamily, n: int, prec: int | None = None) -> Poly:
    """Coefficients of ``x -> prefactor * P(x / (2 sqrt(n)))`` at ``prec + GUARD_BITS`` bits."""
    if n < 1:
        raise ValueError("scaling needs n >= 1")
    bits = resolve_precision(prec)
    key = (fam, n, bits)
    with _SCALED_LOCK:
        hit = _SCALED.get(key)
    if hit is not None:
        return hit
    work = bits + GUARD_BITS
    raw = fam.polynomial(fam.degree(n), work)
    with working_precision(work):
        root_n = gmpy2.sqrt(to_real(n))
        pre = to_real((-1) ** n) / math.factorial(n)
        if fam.parity == "even":
            pre *= root_n
        inv = 1 / (2 * root_n)
        coeffs = []
        power = to_real(1)
        for c in raw.coeffs:
            coeffs.append(pre * c * power)
            power *= inv
    poly = Poly(tuple(coeffs), work)
    with _SCALED_LOCK:
        _SCALED[key] = poly
    return poly


def scaled_eval(fam: ScaledFamily, n: int, x, prec: int | None = None) -> Real:
    bits = resolve_precision(prec)
    with working_precision(bits + GUARD_BITS):
        xr = to_real(x)
    if xr <= 0:
        raise DomainError("scaled families are evaluated at x > 0")
    return rounded(scaled_poly(fam, n, bits)(xr), bits)


def clear_scaled_cache() -> None:
    with _SCALED_LOCK:
        _SCALED.clear()


# ---------------------------------------------------------------- reports


@dataclass
class MHReport:
    family: ScaledFamily
    limit_id: LimitFunctionId
    grid: list
    n_list: list[int]
    sup_errors: list[Real]
    argmax: list[Real]
    sign_x: Real
    sign_values: list[Real] = field(default_factory=list)
    sign_limit: Real | None = None
    precision: int = 0

    @property
    def decreasing(self) -> bool:
        return is_decreasing(self.sup_errors, TREND_SLACK)

    @property
    def final_below_threshold(self) -> bool:
        return self.sup_errors[-1] < FINAL_SUP_THRESHOLD

    def check(self, threshold: float = FINAL_SUP_THRESHOLD, slack: float = TREND_SLACK) -> bool:
        """Trend, final sup-error and sign criteria with explicit thresholds."""
        return is_decreasing(self.sup_errors, slack) and self.sup_errors[-1] < threshold and self.sign_ok

    @property
    def sign_ok(self) -> bool:
        v, lim = self.sign_values[-1], self.sign_limit
        return (v > 0) == (lim > 0) and (v < 0) == (lim < 0)

    @property
    def passed(self) -> bool:
        return self.decreasing and self.final_below_threshold and self.sign_ok


def _validate(n_list: Sequence[int], grid: Sequence) -> None:
    if not n_list:
        raise ValueError("n_list is empty")
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ValueError("n_list must be strictly ascending")
    if any(n < 1 for n in n_list):
        raise ValueError("n_list entries must be positive")
    if not grid or any(x <= 0 for x in grid):
        raise ValueError("grid points must be strictly positive")


def _report(fam: ScaledFamily, fid: LimitFunctionId, n_list, grid, bits: int) -> MHReport:
    _validate(n_list, grid)
    work = bits + GUARD_BITS
    with working_precision(work):
        xs = [to_real(x) for x in grid]
        sign_x = to_real(SIGN_CHECK_X)
    limits = [limit_function(fid, x, work) for x in xs]
    sign_limit = limit_function(fid, sign_x, work)
    sups, argmax, signs = [], [], []
    for n in n_list:
        poly = scaled_poly(fam, n, bits)
        with working_precision(work):
            best, where = to_real(-1), xs[0]
            for x, lim in zip(xs, limits):
                err = abs(poly(x) - lim)
                if err > best:
                    best, where = err, x
            signs.append(rounded(poly(sign_x), bits))
        sups.append(rounded(best, bits))
        argmax.append(rounded(where, bits))
    return MHReport(fam, fid, list(grid), list(n_list), sups, argmax, rounded(sign_x, bits), signs, rounded(sign_limit, bits), bits)


def mh_report(fam: ScaledFamily, n_list: Sequence[int] = DEFAULT_N_LIST, grid: Sequence | None = None, prec: int | None = None) -> MHReport:
    """Sup-norm distance on ``grid`` between the scaled family and its limit, for each ``n``."""
    bits = resolve_precision(prec)
    grid = default_grid() if grid is None else list(grid)
    return _report(fam, select_limit(fam), list(n_list), grid, bits)


@dataclass
class ConjectureProbe:
    r: int
    masses: tuple
    reports: dict
    consistent_with_theorems: bool | None

    @property
    def decreasing(self) -> dict:
        return {parity: rep.decreasing for parity, rep in self.reports.items()}


def conjecture_probe(
    r: int,
    masses: Sequence | None = None,
    n_list: Sequence[int] = (25, 50, 100),
    grid: Sequence | None = None,
    prec: int | None = None,
) -> ConjectureProbe:
    """Compare the diagonal family with ``2r`` positive masses against the conjectured limits.

    The trend is recorded, not asserted.  For ``r <= 2`` the conjectured
    limit is also compared with the established one.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    masses = tuple(as_fraction(m) for m in (masses if masses is not None else [1] * (2 * r)))
    if len(masses) != 2 * r or any(m <= 0 for m in masses):
        raise ValueError(f"the probe needs {2 * r} strictly positive masses")
    bits = resolve_precision(prec)
    grid = default_grid() if grid is None else list(grid)
    reports = {}
    consistent = None if r > 2 else True
    for parity in ("even", "odd"):
        fam = ScaledFamily.diagonal(masses, parity)
        fid = LimitFunctionId.conjecture(r, parity)
        if r <= 2:
            consistent = consistent and fid.same_function(select_limit(fam))
        reports[parity] = _report(fam, fid, list(n_list), grid, bits)
    return ConjectureProbe(r, masses, reports, consistent)
