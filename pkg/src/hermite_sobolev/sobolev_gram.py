"""Monic orthogonal polynomials for discrete Sobolev inner products

    (f, g) = c * integral f g dmu + F(0)^T A G(0),   F(0) = (f(0), f'(0), ..., f^{(s-1)}(0)),

with ``mu`` the Hermite weight on the line or a Laguerre weight on the
half-line, built by factorizing a Gram matrix.

The default basis is the weight's own monic orthogonal family, in which the
Gram matrix is diagonal plus the low-rank mass term; after symmetric
equilibration it is well conditioned at every degree, so degree 400 costs no
extra precision.  The monomial basis is available for cross-checks; its
Hankel part is badly conditioned and triggers precision escalation quickly.
"""

from __future__ import annotations

import math
import threading
from collections import OrderedDict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from operator import mul
from typing import Sequence

import gmpy2
import numpy as np

from .bessel import gamma_exact
from .errors import PrecisionInsufficient
from .hermite_core import Poly, hermite_coefficients
from .real import (
    GUARD_BITS,
    Number,
    Real,
    as_fraction,
    resolve_precision,
    rounded,
    sqrt_pi,
    to_real,
    working_precision,
)

DEFAULT_MAX_PRECISION = 8192
PSD_TOLERANCE = 1e-12


@dataclass(frozen=True)
class WeightSpec:
    """``kind`` is ``"hermite"`` (``exp(-x^2)`` on R) or ``"laguerre"`` (``x^alpha exp(-x)`` on (0, inf))."""

    kind: str
    alpha: Fraction | None = None
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        if self.kind == "hermite":
            if self.alpha is not None:
                raise ValueError("the Hermite weight has no parameter")
        elif self.kind == "laguerre":
            alpha = as_fraction(self.alpha)
            if alpha <= -1:
                raise ValueError("Laguerre weights need alpha > -1")
            object.__setattr__(self, "alpha", alpha)
        else:
            raise ValueError(f"unknown weight kind {self.kind!r}")
        scale = as_fraction(self.scale)
        if scale <= 0:
            raise ValueError("weight scale must be positive")
        object.__setattr__(self, "scale", scale)

    @classmethod
    def hermite_line(cls) -> "WeightSpec":
        return cls("hermite")

    @classmethod
    def laguerre_half_line(cls, alpha: Number) -> "WeightSpec":
        return cls("laguerre", as_fraction(alpha))

    @property
    def symmetric(self) -> bool:
        return self.kind == "hermite"


@dataclass(frozen=True)
class MassMatrix:
    """Symmetric positive semidefinite matrix acting on derivative vectors at 0."""

    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(as_fraction(v) for v in row) for row in self.entries)
        s = len(rows)
        if any(len(row) != s for row in rows):
            raise ValueError("mass matrix must be square")
        for i in range(s):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise ValueError("mass matrix must be symmetric")
        object.__setattr__(self, "entries", rows)
        if s:
            mat = np.array([[float(v) for v in row] for row in rows])
            eig = np.linalg.eigvalsh(mat)
            bound = PSD_TOLERANCE * max(1.0, float(np.abs(mat).max()))
            if eig.min() < -bound:
                raise ValueError(f"mass matrix is not positive semidefinite (eigenvalues {eig.tolist()})")

    @classmethod
    def diagonal(cls, masses: Sequence[Number]) -> "MassMatrix":
        s = len(masses)
        return cls(tuple(tuple(masses[i] if i == j else 0 for j in range(s)) for i in range(s)))

    @classmethod
    def two_by_two(cls, m0: Number, m1: Number, lam: Number) -> "MassMatrix":
        return cls(((m0, lam), (lam, m1)))

    @classmethod
    def zero(cls, s: int) -> "MassMatrix":
        return cls.diagonal([0] * s)

    @property
    def size(self) -> int:
        return len(self.entries)

    def is_diagonal(self) -> bool:
        return all(v == 0 for i, row in enumerate(self.entries) for j, v in enumerate(row) if i != j)

    def parity_decoupled(self) -> bool:
        """No entry couples a derivative of even order with one of odd order."""
        return all(v == 0 for i, row in enumerate(self.entries) for j, v in enumerate(row) if (i + j) % 2)

    def nonzero(self) -> list[tuple[int, int, Fraction]]:
        return [(i, j, v) for i, row in enumerate(self.entries) for j, v in enumerate(row) if v != 0]

    def scaled(self, c: Number) -> "MassMatrix":
        c = as_fraction(c)
        return MassMatrix(tuple(tuple(c * v for v in row) for row in self.entries))


@dataclass(frozen=True)
class SobolevProduct:
    weight: WeightSpec
    mass: MassMatrix

    @classmethod
    def hermite(cls, mass: MassMatrix) -> "SobolevProduct":
        return cls(WeightSpec.hermite_line(), mass)

    def scaled(self, c: Number) -> "SobolevProduct":
        c = as_fraction(c)
        w = self.weight
        return SobolevProduct(WeightSpec(w.kind, w.alpha, w.scale * c), self.mass.scaled(c))

    def parity_decoupled(self) -> bool:
        return self.weight.symmetric and self.mass.parity_decoupled()


# ---------------------------------------------------------------- moments


def weight_moment_exact(w: WeightSpec, k: int) -> tuple[Fraction, bool]:
    """``integral x^k dmu = q * sqrt(pi)**e`` as ``(q, e == 1)``, for rational parameters."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if w.kind == "hermite":
        if k % 2:
            return Fraction(0), True
        m = k // 2
        # (k-1)!! / 2^{k/2} = (2m)! / (4^m m!)
        return w.scale * Fraction(math.factorial(2 * m), 4**m * math.factorial(m)), True
    q, root = gamma_exact(k + w.alpha + 1)
    return w.scale * q, root


def weight_moment(w: WeightSpec, k: int, prec: int | None = None) -> Real:
    bits = resolve_precision(prec)
    with working_precision(bits + GUARD_BITS):
        value = _moment_real(w, k)
    return rounded(value, bits)


def _moment_real(w: WeightSpec, k: int) -> Real:
    try:
        q, root = weight_moment_exact(w, k)
    except ValueError:
        return to_real(w.scale) * gmpy2.gamma(to_real(k + w.alpha + 1))
    value = to_real(q)
    return value * sqrt_pi() if root else value


def sobolev_inner(p: SobolevProduct, f: Poly, g: Poly, prec: int | None = None) -> Real:
    """``(f, g)`` with the integral expanded over the moments of ``f g``."""
    bits = resolve_precision(prec)
    with working_precision(bits + GUARD_BITS):
        fc = [to_real(c) for c in f.coeffs]
        gc = [to_real(c) for c in g.coeffs]
        prod = [to_real(0)] * (len(fc) + len(gc) - 1)
        for i, a in enumerate(fc):
            if a == 0:
                continue
            for j, b in enumerate(gc):
                prod[i + j] += a * b
        total = to_real(0)
        for k, c in enumerate(prod):
            if c != 0:
                total += c * _moment_real(p.weight, k)
        s = p.mass.size
        fd = [math.factorial(i) * (fc[i] if i < len(fc) else 0) for i in range(s)]
        gd = [math.factorial(i) * (gc[i] if i < len(gc) else 0) for i in range(s)]
        for i, j, v in p.mass.nonzero():
            total += to_real(v) * fd[i] * gd[j]
    return rounded(total, bits)


# ---------------------------------------------------------------- bases


@lru_cache(maxsize=None)
def laguerre_monic_coefficients(k: int, alpha: Fraction) -> tuple[Fraction, ...]:
    """Monic ``L_k^{(alpha)}``: coefficient of ``t^j`` is ``(-1)^{k-j} C(k,j) (j+alpha+1)_{k-j}``."""
    out = []
    for j in range(k + 1):
        rising = Fraction(1)
        for t in range(k - j):
            rising *= j + alpha + 1 + t
        out.append((-1) ** (k - j) * math.comb(k, j) * rising)
    return tuple(out)


def classical_coefficients(w: WeightSpec, k: int) -> tuple[Fraction, ...]:
    if w.kind == "hermite":
        return hermite_coefficients(k)
    return laguerre_monic_coefficients(k, w.alpha)


def _classical_norm(w: WeightSpec, k: int) -> Real:
    if w.kind == "hermite":
        return to_real(w.scale * Fraction(math.factorial(k), 2**k)) * sqrt_pi()
    # ||L_k||^2 = k! Gamma(k + alpha + 1)
    return math.factorial(k) * _moment_real(w, k)


# ---------------------------------------------------------------- factorization


class _PivotCollapse(Exception):
    def __init__(self, position: int, pivot):
        self.position = position
        self.pivot = pivot


class _GramFactor:
    """Row-oriented LDL^T of the equilibrated Gram matrix of a basis subsequence.

    Rows are appended on demand, so the factor for degree ``N`` also serves
    every lower degree.
    """

    def __init__(self, product: SobolevProduct, basis: str, degrees_step: int, first: int, bits: int):
        self.product = product
        self.basis = basis
        self.step = degrees_step
        self.first = first
        self.bits = bits
        self.L: list[list[Real]] = []
        self.D: list[Real] = []
        self.scale: list[Real] = []
        self._LD: list[list[Real]] = []
        self._deriv: list[list[Real]] = []
        self._weight_col: dict = {}
        self._lock = threading.Lock()

    def degree(self, position: int) -> int:
        return self.first + self.step * position

    def _basis_coeffs(self, degree: int) -> tuple:
        if self.basis == "monomial":
            return (Fraction(0),) * degree + (Fraction(1),)
        return classical_coefficients(self.product.weight, degree)

    def _derivs(self, degree: int) -> list[Real]:
        s = self.product.mass.size
        coeffs = self._basis_coeffs(degree)
        return [to_real(math.factorial(i) * coeffs[i]) if i < len(coeffs) else to_real(0) for i in range(s)]

    def _weight_entry(self, di: int, dj: int) -> Real:
        w = self.product.weight
        if self.basis == "monomial":
            key = di + dj
            if key not in self._weight_col:
                self._weight_col[key] = _moment_real(w, key)
            return self._weight_col[key]
        if di != dj:
            return to_real(0)
        return _classical_norm(w, di)

    def _entry(self, p: int, q: int) -> Real:
        value = self._weight_entry(self.degree(p), self.degree(q))
        dp, dq = self._deriv[p], self._deriv[q]
        for i, j, v in self.product.mass.nonzero():
            if dp[i] != 0 and dq[j] != 0:
                value += to_real(v) * dp[i] * dq[j]
        return value

    def extend(self, size: int) -> None:
        with self._lock, working_precision(self.bits):
            threshold = to_real(2) ** (-(self.bits // 4))
            while len(self.D) < size:
                i = len(self.D)
                self._deriv.append(self._derivs(self.degree(i)))
                row = [self._entry(i, j) for j in range(i + 1)]
                if row[i] <= 0:
                    raise _PivotCollapse(i, row[i])
                s_i = 1 / gmpy2.sqrt(row[i])
                self.scale.append(s_i)
                grow = [row[j] * s_i * self.scale[j] for j in range(i)]
                lrow: list[Real] = []
                for j in range(i):
                    acc = grow[j] - gmpy2.fsum(map(mul, lrow, self._LD[j])) if j else grow[j]
                    lrow.append(acc / self.D[j])
                ld = [a * b for a, b in zip(lrow, self.D)]
                d = 1 - gmpy2.fsum(map(mul, lrow, ld)) if i else to_real(1)
                if d < threshold:
                    raise _PivotCollapse(i, d)
                self.L.append(lrow)
                self._LD.append(ld)
                self.D.append(d)

    def monic(self, position: int) -> list[Real]:
        """Monomial coefficients of the monic orthogonal polynomial at ``position``."""
        with working_precision(self.bits):
            u = [to_real(0)] * (position + 1)
            u[position] = to_real(1)
            for j in range(position - 1, -1, -1):
                acc = to_real(0)
                for i in range(j + 1, position + 1):
                    if u[i] != 0:
                        acc -= u[i] * self.L[i][j]
                u[j] = acc
            deg = self.degree(position)
            out = [to_real(0)] * (deg + 1)
            s_top = self.scale[position]
            for j in range(position + 1):
                wj = u[j] * self.scale[j] / s_top
                if wj == 0:
                    continue
                for k, c in enumerate(self._basis_coeffs(self.degree(j))):
                    if c != 0:
                        out[k] += wj * to_real(c)
            out[deg] = to_real(1)
            return out


_FACTORS: "OrderedDict[tuple, _GramFactor]" = OrderedDict()
_FACTORS_LOCK = threading.Lock()
_FACTOR_CACHE_SIZE = 48


def _layout(product: SobolevProduct, n: int) -> tuple[int, int, int]:
    """``(step, first, position)`` of degree ``n`` in the basis subsequence used."""
    if product.parity_decoupled():
        return 2, n % 2, n // 2
    return 1, 0, n


def _factor_for(product: SobolevProduct, n: int, bits: int, basis: str, max_prec: int) -> tuple[_GramFactor, int]:
    step, first, position = _layout(product, n)
    key = (product, basis, step, first, bits)
    with _FACTORS_LOCK:
        factor = _FACTORS.get(key)
        if factor is not None:
            _FACTORS.move_to_end(key)
    work = factor.bits if factor is not None else bits + GUARD_BITS
    while True:
        if factor is None:
            factor = _GramFactor(product, basis, step, first, work)
        try:
            factor.extend(position + 1)
            break
        except _PivotCollapse as exc:
            if work * 2 > max_prec:
                raise PrecisionInsufficient(
                    f"Gram pivot for degree {factor.degree(exc.position)} collapsed to {float(exc.pivot):.3e} "
                    f"at {work} bits (ceiling {max_prec})"
                ) from None
            work *= 2
            factor = None
    with _FACTORS_LOCK:
        _FACTORS[key] = factor
        while len(_FACTORS) > _FACTOR_CACHE_SIZE:
            _FACTORS.popitem(last=False)
    return factor, position


def gram_orthogonalize(
    p: SobolevProduct,
    n: int,
    prec: int | None = None,
    *,
    basis: str = "classical",
    max_prec: int = DEFAULT_MAX_PRECISION,
) -> Poly:
    """The monic degree-``n`` polynomial orthogonal to all lower degrees under ``p``.

    Solves the normal equations through an LDL^T factorization of the
    equilibrated Gram matrix.  If a pivot falls below ``2**(-bits/4)`` the
    whole factorization is redone at doubled precision, up to ``max_prec``
    bits, after which ``PrecisionInsufficient`` is raised.
    """
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if basis not in ("classical", "monomial"):
        raise ValueError(f"unknown basis {basis!r}")
    bits = resolve_precision(prec)
    factor, position = _factor_for(p, n, bits, basis, max_prec)
    coeffs = factor.monic(position)
    return Poly(tuple(rounded(c, bits) for c in coeffs), bits)


def clear_factor_cache() -> None:
    with _FACTORS_LOCK:
        _FACTORS.clear()


# ---------------------------------------------------------------- exact oracle


def inner_exact_hermite(f: Poly, g: Poly, mass: MassMatrix) -> tuple[Fraction, Fraction]:
    """Exact ``(f, g) = r + s sqrt(pi)`` for rational polynomials and masses."""
    if not (f.exact and g.exact):
        raise ValueError("exact inner products need rational coefficients")
    w = WeightSpec.hermite_line()
    prod = [Fraction(0)] * (len(f.coeffs) + len(g.coeffs) - 1)
    for i, a in enumerate(f.coeffs):
        for j, b in enumerate(g.coeffs):
            prod[i + j] += a * b
    s = sum((c * weight_moment_exact(w, k)[0] for k, c in enumerate(prod) if c), Fraction(0))
    fd = [math.factorial(i) * f[i] for i in range(mass.size)]
    gd = [math.factorial(i) * g[i] for i in range(mass.size)]
    r = sum((v * fd[i] * gd[j] for i, j, v in mass.nonzero()), Fraction(0))
    return Fraction(r), Fraction(s)


@dataclass
class ExactPoly:
    """Coefficients in the field Q(t), where ``t`` stands for sqrt(pi)."""

    coeffs: list = field(default_factory=list)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def to_real(self, prec: int | None = None) -> Poly:
        bits = resolve_precision(prec)
        with working_precision(2 * bits + GUARD_BITS):
            t = sqrt_pi()
            vals = [_eval_field(c, t) for c in self.coeffs]
        return Poly(tuple(rounded(v, bits) for v in vals), bits)


def _sqrt_pi_field():
    from sympy import QQ
    from sympy.polys.fields import field as sympy_field

    K, t = sympy_field("t", QQ)
    return K, t


def _eval_field(elem, t: Real) -> Real:
    def ev(poly):
        total = to_real(0)
        for (e,), c in poly.terms():
            total += to_real(Fraction(int(c.numerator), int(c.denominator))) * t**e
        return total

    return ev(elem.numer) / ev(elem.denom)


def gram_orthogonalize_exact(mass: MassMatrix, n: int) -> ExactPoly:
    """Exact monic Sobolev-Hermite polynomial via the monomial normal equations over Q(sqrt(pi))."""
    K, t = _sqrt_pi_field()
    w = WeightSpec.hermite_line()

    def entry(i: int, j: int):
        q, _ = weight_moment_exact(w, i + j)
        value = K(q) * t if q else K(0)
        for a, b, v in mass.nonzero():
            if a == i and b == j:
                value += K(v) * math.factorial(i) * math.factorial(j)
        return value

    if n == 0:
        return ExactPoly([K(1)])
    A = [[entry(i, j) for j in range(n)] + [entry(i, n)] for i in range(n)]
    # Gaussian elimination; the matrix is positive definite so pivots are nonzero in Q(t)
    for col in range(n):
        piv = next(r for r in range(col, n) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        for r in range(col + 1, n):
            if A[r][col] != 0:
                f = A[r][col] / A[col][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    y = [K(0)] * n
    for r in range(n - 1, -1, -1):
        acc = A[r][n]
        for c in range(r + 1, n):
            acc -= A[r][c] * y[c]
        y[r] = acc / A[r][r]
    return ExactPoly([-v for v in y] + [K(1)])
