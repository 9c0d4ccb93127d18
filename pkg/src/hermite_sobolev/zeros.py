"""Positive zeros of Hermite and Sobolev-Hermite polynomials.

Every zero is isolated by a sign change and refined by bisection-guarded
Newton steps.  Sobolev polynomials are bracketed by the Hermite zeros of the
same degree; a fine scan takes over if that partition does not produce the
expected number of sign changes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import gmpy2

from .bessel import LimitFunctionId, limit_zeros
from .errors import CertificationError, UnsupportedCase
from .hermite_core import Poly
from .mehler_heine import ScaledFamily, Source, select_limit
from .qlambda import TREND_SLACK, is_decreasing
from .real import GUARD_BITS, Real, resolve_precision, rounded, to_real, working_precision
from .rootfind import refine_bracketed, tight_bracket

APPROACH_TOLERANCE = 0.05
SCAN_REFINEMENTS = 6


@dataclass(frozen=True)
class ZeroTable:
    """Positive zeros in increasing order and their ``sqrt(floor(n/2))`` scalings."""

    n: int
    positive_zeros: tuple
    scaled2sqrt: tuple
    scaledsqrt: tuple
    bracket_widths: tuple = ()
    imaginary_pairs: tuple = ()  # moduli s of zeros +-i s

    @classmethod
    def build(
        cls, n: int, zeros: Sequence[Real], bits: int, widths: Sequence[Real] = (), imaginary: Sequence[Real] = ()
    ) -> "ZeroTable":
        zeros = tuple(sorted(zeros))
        with working_precision(bits + GUARD_BITS):
            root = gmpy2.sqrt(to_real(n // 2))
            s2 = tuple(rounded(2 * root * z, bits) for z in zeros)
            s1 = tuple(rounded(root * z, bits) for z in zeros)
        return cls(n, zeros, s2, s1, tuple(widths), tuple(rounded(v, bits) for v in sorted(imaginary)))

    @property
    def complete(self) -> bool:
        """Positive zeros and imaginary pairs account for every zero pair."""
        return len(self.positive_zeros) + len(self.imaginary_pairs) == self.n // 2

    def __len__(self) -> int:
        return len(self.positive_zeros)


def _hermite_fdf(n: int) -> Callable:
    def fdf(x):
        prev, cur = to_real(1), +x
        if n == 0:
            return prev, to_real(0)
        for k in range(1, n):
            prev, cur = cur, x * cur - (k / to_real(2)) * prev
        return cur, n * prev

    return fdf


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def _scan(f: Callable, lo: Real, hi: Real, steps: int) -> list[tuple[Real, Real]]:
    """Sign-change brackets of ``f`` on an equispaced partition of ``[lo, hi]``."""
    out = []
    h = (hi - lo) / steps
    x_prev, s_prev = lo, _sign(f(lo))
    for i in range(1, steps + 1):
        x = lo + i * h if i < steps else hi
        s = _sign(f(x))
        if s == 0:
            # an exact zero on the grid: bracket it with its neighbours
            x_next = x + h / 2 if i < steps else x
            out.append((x_prev, x_next))
            x_prev, s_prev = x_next, _sign(f(x_next))
            continue
        if s_prev != 0 and s != s_prev:
            out.append((x_prev, x))
        x_prev, s_prev = x, s
    return out


def _refine_all(fdf: Callable, brackets, bits: int) -> tuple[list[Real], list[Real]]:
    """Refine each bracket, then certify a bracket of width ``2**(-bits/2)``."""
    zeros, widths = [], []
    f = lambda x: fdf(x)[0]
    for lo, hi in brackets:
        root, blo, bhi = refine_bracketed(fdf, lo, hi, bits + GUARD_BITS // 2)
        tight = tight_bracket(f, root, to_real(2) ** (-(bits // 2)))
        if tight is not None:
            # the root may sit on an end of the refined bracket, so intersect
            a, b = max(blo, tight[0]), min(bhi, tight[1])
            if a == b == root or _sign(f(a)) * _sign(f(b)) < 0:
                blo, bhi = a, b
        zeros.append(root)
        widths.append(bhi - blo)
    return zeros, widths


def hermite_zeros(n: int, prec: int | None = None) -> ZeroTable:
    """All ``floor(n/2)`` positive zeros of ``H_n``.

    Brackets come from a sign-change scan of ``(0, sqrt(2n+1))`` whose step
    is halved until the scan finds every zero.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return _hermite_zeros(n, resolve_precision(prec))


@lru_cache(maxsize=256)
def _hermite_zeros(n: int, bits: int) -> ZeroTable:
    expected = n // 2
    fdf = _hermite_fdf(n)
    with working_precision(bits + GUARD_BITS):
        if expected == 0:
            return ZeroTable.build(n, [], bits)
        hi = gmpy2.sqrt(to_real(2 * n + 1))
        f = lambda x: fdf(x)[0]
        steps = 4 * int(math.ceil(float(hi) * math.sqrt(2 * n + 1) / math.pi)) + 8
        lo = hi / (8 * steps)  # keeps the odd-degree zero at the origin out of the scan
        for _ in range(SCAN_REFINEMENTS):
            brackets = _scan(f, lo, hi, steps)
            if len(brackets) == expected:
                break
            steps *= 2
        else:
            raise CertificationError(f"H_{n}: found {len(brackets)} positive sign changes, expected {expected}")
        zeros, widths = _refine_all(fdf, brackets, bits)
    return ZeroTable.build(n, [rounded(z, bits) for z in zeros], bits, [rounded(w, bits) for w in widths])


def zero_precision(degree: int, prec: int | None = None) -> int:
    """Bits needed to evaluate a degree-``degree`` monomial expansion near its zeros.

    Horner evaluation of high-degree orthogonal polynomials cancels about
    ``1.3 * degree`` bits; this budget is added on top of the target precision.
    """
    return resolve_precision(prec) + int(math.ceil(1.3 * degree)) + GUARD_BITS


def _poly_fdf(coeffs: Sequence[Real]) -> Callable:
    def fdf(x):
        v, d = to_real(0), to_real(0)
        for c in reversed(coeffs):
            d = d * x + v
            v = v * x + c
        return v, d

    return fdf


def _fujiwara(coeffs: Sequence[Real]) -> Real:
    deg = len(coeffs) - 1
    lead = coeffs[-1]
    best = to_real(0)
    for k in range(1, deg + 1):
        c = abs(coeffs[deg - k] / lead)
        if c == 0:
            continue
        if k == deg:
            c = c / 2
        best = max(best, gmpy2.root(c, k))
    return 2 * best + 1


def real_zeros(
    p: Poly,
    symmetric: bool = True,
    prec: int | None = None,
    seeds: Sequence[Real] | None = None,
    strict: bool = True,
) -> ZeroTable:
    """Positive zeros of ``p``, evaluated at the precision ``p`` carries.

    ``seeds`` are partition points (typically the Hermite zeros of the same
    degree) expected to separate the zeros.  For symmetric ``p`` the zeros
    on the imaginary axis are located too, through the negative roots of
    ``g(t)`` with ``p(x) = g(x^2)`` (or ``x g(x^2)``).  With ``strict`` a
    symmetric ``p`` must have exactly ``floor(deg/2)`` positive zeros,
    otherwise ``CertificationError`` is raised.
    """
    bits = resolve_precision(prec)
    deg = p.degree
    work = max(p.prec or 0, bits + GUARD_BITS)
    with working_precision(work):
        coeffs = [to_real(c) for c in p.coeffs]
        if symmetric and deg % 2 == 1:
            if coeffs[0] != 0 and abs(coeffs[0]) > abs(coeffs[1]) * to_real(2) ** (-(bits // 2)):
                raise CertificationError(f"odd polynomial of degree {deg} does not vanish at 0")
            coeffs = coeffs[1:]
        expected = deg // 2 if symmetric else None
        fdf = _poly_fdf(coeffs)
        f = lambda x: fdf(x)[0]
        bound = _fujiwara(coeffs)
        imaginary: list[Real] = []
        if symmetric:
            imaginary = _imaginary_pairs(coeffs[0::2], bits)
        brackets = []
        if seeds is not None:
            points = [to_real(0)] + sorted(to_real(z) for z in seeds if 0 < z < bound) + [bound]
            signs = [_sign(f(x)) for x in points]
            for i in range(len(points) - 1):
                if signs[i] * signs[i + 1] < 0 or (signs[i + 1] == 0 and signs[i] != 0):
                    brackets.append((points[i], points[i + 1]))
        target = None if expected is None else expected - len(imaginary)
        if seeds is None or len(brackets) != target:
            steps = max(64, 8 * deg)
            for _ in range(SCAN_REFINEMENTS):
                brackets = _scan(f, to_real(0), bound, steps)
                if target is None or len(brackets) == target:
                    break
                steps *= 2
        if strict and expected is not None and len(brackets) != expected:
            raise CertificationError(
                f"degree {deg}: found {len(brackets)} positive zeros and {len(imaginary)} imaginary pairs, "
                f"expected {expected} positive zeros"
            )
        zeros, widths = _refine_all(fdf, brackets, bits)
    return ZeroTable.build(
        deg, [rounded(z, bits) for z in zeros], bits, [rounded(w, bits) for w in widths], imaginary
    )


def _imaginary_pairs(g: Sequence[Real], bits: int) -> list[Real]:
    """Moduli ``s`` of the zero pairs ``+-i s`` of ``x -> g(x^2)``, from the negative roots of ``g``."""
    if len(g) < 2:
        return []
    gdf = _poly_fdf(g)
    reflected = [c if k % 2 == 0 else -c for k, c in enumerate(g)]
    bound = _fujiwara(reflected)
    h = lambda u: gdf(-u)[0]
    brackets = _scan(h, to_real(0), bound, max(64, 8 * len(g)))
    out = []
    for lo, hi in brackets:
        root, _, _ = refine_bracketed(lambda u: (gdf(-u)[0], -gdf(-u)[1]), lo, hi, bits + GUARD_BITS // 2)
        out.append(gmpy2.sqrt(root))
    return sorted(out)


def interlace_check(inner: ZeroTable, outer: ZeroTable) -> bool:
    """Strict alternation of the two sets of positive zeros.

    Tables of equal size may start with either family; when the sizes differ
    by one the larger table must start.  Any coincidence fails.
    """
    a, b = list(inner.positive_zeros), list(outer.positive_zeros)
    if abs(len(a) - len(b)) > 1 or not (a or b):
        return False
    merged = sorted([(z, 0) for z in a] + [(z, 1) for z in b])
    for (z1, l1), (z2, l2) in zip(merged, merged[1:]):
        if l1 == l2 or z1 == z2:
            return False
    if len(a) != len(b):
        return merged[0][1] == (0 if len(a) > len(b) else 1)
    return True


def family_zeros(fam: ScaledFamily, degree: int, prec: int | None = None, strict: bool = True) -> ZeroTable:
    """Positive zeros of the family member of the given degree."""
    bits = resolve_precision(prec)
    if fam.source is Source.HERMITE:
        return hermite_zeros(degree, bits)
    if fam.source is Source.QLAMBDA and not fam.case.diagonal:
        raise UnsupportedCase("zeros are tabulated for symmetric families only (lam = 0)")
    work = zero_precision(degree, bits)
    p = fam.polynomial(degree, work)
    seeds = hermite_zeros(degree, bits).positive_zeros
    return real_zeros(p, True, bits, seeds=seeds, strict=strict)


# ---------------------------------------------------------------- asymptotics


@dataclass(frozen=True)
class ZeroRow:
    n: int
    k: int
    xi: Real
    scaled2sqrt: Real
    scaledsqrt: Real
    target: Real | None  # None marks a zero expected to collapse onto the origin
    relative_error: Real | None


@dataclass
class ZeroAsymptoticsReport:
    family: ScaledFamily
    limit_id: LimitFunctionId
    n_list: list[int]
    k_max: int
    rows: list[ZeroRow]
    imaginary: dict = field(default_factory=dict)  # n -> sqrt(n) * s for zeros +-i s
    complete: dict = field(default_factory=dict)  # n -> every zero pair located

    @property
    def accelerated(self) -> int:
        return min(self.limit_id.accelerated_zeros(), self.k_max)

    def column(self, k: int) -> list[ZeroRow]:
        return [r for r in self.rows if r.k == k]

    def trend(self, k: int, slack: float = TREND_SLACK, tol: float = APPROACH_TOLERANCE) -> bool:
        """Accelerated zeros: ``sqrt(n) xi`` decreasing.  Others: distance to target decreasing
        and a final relative error below ``tol``."""
        col = self.column(k)
        if col[0].target is None:
            return is_decreasing([r.scaledsqrt for r in col], slack)
        with working_precision(self.rows[0].xi.precision + GUARD_BITS):
            dist = [abs(r.scaled2sqrt - r.target) for r in col]
        return is_decreasing(dist, slack) and col[-1].relative_error < tol

    def trends(self, slack: float = TREND_SLACK, tol: float = APPROACH_TOLERANCE) -> dict[int, bool]:
        return {k: self.trend(k, slack, tol) for k in range(1, self.k_max + 1)}


def zero_asymptotics_report(
    fam: ScaledFamily,
    n_list: Sequence[int] = (25, 50, 100, 200),
    k_max: int = 3,
    prec: int | None = None,
) -> ZeroAsymptoticsReport:
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ValueError("n_list must be strictly ascending")
    if k_max < 1 or k_max > min(fam.degree(n) // 2 for n in n_list):
        raise ValueError("k_max must lie in [1, floor(degree/2)] for every n")
    bits = resolve_precision(prec)
    fid = select_limit(fam)
    acc = fid.accelerated_zeros()
    targets = limit_zeros(fid, max(0, k_max - acc), bits) if k_max > acc else []
    rows = []
    imaginary, complete = {}, {}
    for n in n_list:
        table = family_zeros(fam, fam.degree(n), bits, strict=False)
        with working_precision(bits + GUARD_BITS):
            root = gmpy2.sqrt(to_real(n))
            imaginary[n] = tuple(rounded(root * v, bits) for v in table.imaginary_pairs)
        complete[n] = table.complete
        if len(table) < k_max:
            raise CertificationError(f"degree {fam.degree(n)} has only {len(table)} positive zeros, k_max = {k_max}")
        for k in range(1, k_max + 1):
            xi, s2, s1 = table.positive_zeros[k - 1], table.scaled2sqrt[k - 1], table.scaledsqrt[k - 1]
            if k <= acc:
                rows.append(ZeroRow(n, k, xi, s2, s1, None, None))
                continue
            target = targets[k - acc - 1]
            with working_precision(bits + GUARD_BITS):
                rel = rounded(abs(s2 - target) / target, bits)
            rows.append(ZeroRow(n, k, xi, s2, s1, target, rel))
    return ZeroAsymptoticsReport(fam, fid, list(n_list), k_max, rows, imaginary, complete)
