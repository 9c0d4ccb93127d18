"""Named verification suites run by ``hermite-sobolev verify``."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import gmpy2

from .bessel import bessel_j, bessel_zero
from .hermite_core import Poly
from .kernels import (
    KernelQuery,
    kernel_closed_at0,
    kernel_const,
    kernel_sum,
    relative_error,
    supported_const_cases,
)
from .errors import UnsupportedCase
from .qlambda import coeff_limit_report, coerce_case, q_poly
from .real import GUARD_BITS, Real, fmt, resolve_precision, rounded, to_real, tolerance, working_precision
from .sobolev_gram import gram_orthogonalize
from .symmetrize import symmetrization_residual

STANDARD_CASES = ((1, 0, 0), (0, 1, 0), (1, 1, 0), (1, 1, 1), (2, 1, 1), (0, 0, 0))
KERNEL_GRID = tuple(Fraction(s * 15 * k, 100) for k in range(1, 11) for s in (1, -1))
SYMMETRIZE_PATTERNS = {
    1: ((0, 0), (1, 0), (0, 1), (1, 1), (5, 1), (0, 5)),
    2: ((0, 0, 0, 0), (1, 1, 1, 1), (0, 0, 1, 1), (0, 1, 5, 0), (5, 0, 0, 1), (1, 5, 1, 5)),
    3: ((1, 1, 1, 1, 1, 1), (0, 1, 1, 0, 5, 1), (1, 0, 0, 0, 0, 5), (5, 5, 0, 0, 1, 1)),
}


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    value: str = ""
    limit: str = ""


@dataclass
class SuiteResult:
    suite: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(c.passed for c in self.checks)

    @property
    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    @property
    def ok(self) -> bool:
        return bool(self.checks) and not self.failed

    def add(self, name: str, ok: bool, value: Real | str = "", limit: Real | str = "") -> None:
        as_text = lambda v: v if isinstance(v, str) else fmt(v)
        self.checks.append(Check(name, bool(ok), as_text(value), as_text(limit)))


def coefficient_error(p: Poly, q: Poly) -> Real:
    """Largest coefficientwise relative error; a zero against a nonzero counts as 1."""
    worst = to_real(0)
    for k in range(max(len(p.coeffs), len(q.coeffs))):
        a, b = p[k], q[k]
        if a == b:
            continue
        if a == 0 or b == 0:
            return to_real(1)
        worst = max(worst, relative_error(to_real(a), to_real(b)))
    return worst


def kernels_oracle(prec: int | None = None, n_max: int = 30, threshold: Real | None = None) -> SuiteResult:
    bits = resolve_precision(prec)
    tol = threshold if threshold is not None else tolerance(bits, 17)
    out = SuiteResult("kernels-oracle")
    for n in range(n_max + 1):
        for j in range(4):
            if j > n:
                continue  # the kernel vanishes identically
            worst = to_real(0)
            try:
                for x in KERNEL_GRID:
                    closed = kernel_closed_at0(n, j, x, bits)
                    brute = kernel_sum(KernelQuery(n, 0, j), x, 0, bits)
                    worst = max(worst, relative_error(closed, brute))
            except UnsupportedCase:
                continue
            out.add(f"K_{n}^(0,{j})(x,0)", worst <= tol, worst, tol)
        for i, j in supported_const_cases(n):
            if max(i, j) > n:
                continue
            closed = kernel_const(n, i, j, bits)
            brute = kernel_sum(KernelQuery(n, i, j), 0, 0, bits)
            err = relative_error(closed, brute)
            out.add(f"K_{n}^({i},{j})(0,0)", err <= tol, err, tol)
    return out


def qlambda_oracle(prec: int | None = None, n_max: int = 40, threshold: Real | None = None) -> SuiteResult:
    bits = resolve_precision(prec)
    tol = threshold if threshold is not None else tolerance(bits, 20)
    out = SuiteResult("qlambda-oracle")
    for masses in STANDARD_CASES:
        case = coerce_case(*masses)
        product = case.product()
        worst = to_real(0)
        for n in range(n_max + 1):
            worst = max(worst, coefficient_error(q_poly(n, case, bits), gram_orthogonalize(product, n, bits)))
        out.add(f"Q_n[{case.label()}] n<={n_max}", worst <= tol, worst, tol)
    return out


def symmetrize_suite(prec: int | None = None, n_max: int = 20, threshold: Real | None = None) -> SuiteResult:
    bits = resolve_precision(prec)
    tol = threshold if threshold is not None else tolerance(bits, 15)
    out = SuiteResult("symmetrize")
    for r, patterns in SYMMETRIZE_PATTERNS.items():
        for masses in patterns:
            worst = to_real(0)
            for n in range(n_max + 1):
                even, odd = symmetrization_residual(n, masses, bits)
                worst = max(worst, even, odd)
            label = ",".join(str(m) for m in masses)
            out.add(f"r={r} masses=({label}) n<={n_max}", worst <= tol, worst, tol)
    return out


def tan_fixed_point(bits: int) -> Real:
    """First positive root of ``tan x = x`` by plain bisection of ``sin x - x cos x`` on ``[pi, 3pi/2]``."""
    with working_precision(bits + GUARD_BITS):
        lo, hi = gmpy2.const_pi(), 3 * gmpy2.const_pi() / 2
        g = lambda x: gmpy2.sin(x) - x * gmpy2.cos(x)
        g_lo = g(lo)
        for _ in range(bits + GUARD_BITS):
            mid = (lo + hi) / 2
            if (g(mid) > 0) == (g_lo > 0):
                lo, g_lo = mid, g(mid)
            else:
                hi = mid
        return rounded((lo + hi) / 2, bits)


def bessel_suite(prec: int | None = None, threshold: Real | None = None) -> SuiteResult:
    bits = resolve_precision(prec)
    tol = threshold if threshold is not None else tolerance(bits, 12)
    out = SuiteResult("bessel")
    grid = [Fraction(20 * k, 50) for k in range(1, 51)]
    for alpha in (Fraction(1, 2), Fraction(3, 2), Fraction(5, 2), Fraction(7, 2)):
        worst = to_real(0)
        for x in grid:
            with working_precision(bits + GUARD_BITS):
                j = bessel_j(alpha, x, bits + GUARD_BITS)
                res = bessel_j(alpha - 1, x, bits + GUARD_BITS) + bessel_j(alpha + 1, x, bits + GUARD_BITS)
                res = abs(res - 2 * to_real(alpha) / to_real(x) * j) / max(to_real(1), abs(j))
            worst = max(worst, rounded(res, bits))
        out.add(f"recurrence alpha={alpha}", worst <= tol, worst, tol)
    for k in range(1, 6):
        for alpha, multiple in ((Fraction(1, 2), Fraction(k)), (Fraction(-1, 2), k - Fraction(1, 2))):
            z = bessel_zero(alpha, k, bits)
            with working_precision(bits + GUARD_BITS):
                target = to_real(multiple) * gmpy2.const_pi()
                err = rounded(abs(z - target) / target, bits)
            out.add(f"j_({alpha},{k})", err <= tol, err, tol)
    z = bessel_zero(Fraction(3, 2), 1, bits)
    oracle = tan_fixed_point(bits)
    with working_precision(bits + GUARD_BITS):
        err = rounded(abs(z - oracle) / oracle, bits)
    out.add("j_(3/2,1) vs tan x = x", err <= tol, err, tol)
    ok = True
    for alpha in (Fraction(-1, 2), Fraction(1, 2), Fraction(3, 2)):
        for k in range(1, 6):
            ok &= bessel_zero(alpha, k, bits) < bessel_zero(alpha + 1, k, bits) < bessel_zero(alpha, k + 1, bits)
    out.add("zero interlacing j_(a,k) < j_(a+1,k) < j_(a,k+1)", ok)
    return out


def coeff_limits_suite(prec: int | None = None, n_list=(50, 100, 200)) -> SuiteResult:
    bits = resolve_precision(prec)
    out = SuiteResult("coeff-limits")
    for masses in STANDARD_CASES:
        case = coerce_case(*masses)
        report = coeff_limit_report(case, list(n_list), bits)
        for q in report.quantities():
            final = report.series(q)[-1].distance
            out.add(f"{case.label()} {q} distance decreasing", report.decreasing(q), final)
    return out


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "kernels-oracle": kernels_oracle,
    "qlambda-oracle": qlambda_oracle,
    "symmetrize": symmetrize_suite,
    "bessel": bessel_suite,
    "coeff-limits": coeff_limits_suite,
}


def run_suite(name: str, prec: int | None = None) -> SuiteResult:
    try:
        suite = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}") from None
    return suite(prec)
