"""Bracketed root refinement: bisection safeguarding Newton steps."""

from __future__ import annotations

from typing import Callable, Optional, Tuple

import gmpy2

from .errors import BracketError
from .real import Real, to_real


def _sign(v: Real) -> int:
    return (v > 0) - (v < 0)


def refine_bracketed(
    fdf: Callable[[Real], Tuple[Real, Optional[Real]]],
    lo: Real,
    hi: Real,
    bits: int,
    max_iter: int = 4000,
) -> Tuple[Real, Real, Real]:
    """Locate the root of ``f`` inside ``[lo, hi]``.

    ``fdf(x)`` returns ``(f(x), f'(x))``; the derivative may be ``None``,
    in which case only bisection is used.  Runs at the current context
    precision and stops once Newton steps fall below ``2**-bits`` relative or
    the bracket collapses.  Returns ``(root, lo, hi)`` with ``f(lo)`` and
    ``f(hi)`` of opposite sign (or a bracket degenerate at an exact root).
    """
    flo, _ = fdf(lo)
    fhi, _ = fdf(hi)
    slo, shi = _sign(flo), _sign(fhi)
    if slo == 0:
        return lo, lo, lo
    if shi == 0:
        return hi, hi, hi
    if slo == shi:
        raise BracketError(f"no sign change on [{lo}, {hi}]")
    eps = to_real(2) ** (-bits)
    x = (lo + hi) / 2
    fx, dfx = fdf(x)
    for _ in range(max_iter):
        s = _sign(fx)
        if s == 0:
            return x, x, x
        if s == slo:
            lo = x
        else:
            hi = x
        scale = max(abs(lo), abs(hi))
        if hi - lo <= eps * scale:
            return x, lo, hi
        newton_ok = dfx is not None and dfx != 0
        if newton_ok:
            step = fx / dfx
            if abs(step) <= eps * scale:
                # the correction is below the target resolution
                return x, lo, hi
            xn = x - step
            newton_ok = lo < xn < hi and abs(step) <= (hi - lo) / 2
        if not newton_ok:
            xn = (lo + hi) / 2
        x = xn
        fx, dfx = fdf(x)
    raise BracketError(f"root refinement did not converge on [{lo}, {hi}]")


def tight_bracket(f: Callable[[Real], Real], root: Real, width: Real) -> Tuple[Real, Real] | None:
    """Return ``(root - width/2, root + width/2)`` if ``f`` changes sign across it."""
    a, b = root - width / 2, root + width / 2
    fa, fb = f(a), f(b)
    if _sign(fa) * _sign(fb) < 0 or gmpy2.is_zero(f(root)):
        return a, b
    return None
