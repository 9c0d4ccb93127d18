"""Quadratic substitution between symmetric Sobolev-Hermite polynomials and
Laguerre-Sobolev polynomials on the half-line.

With diagonal masses ``M_0, ..., M_{2r-1}`` at the origin,

    S_{2n}(x)   = L_n^{(-1/2; N_0, N_2, ...)}(x^2)
    S_{2n+1}(x) = x L_n^{(1/2; N_1, N_3, ...)}(x^2)

where ``N_{2i} = ((i+1)_i)^2 M_{2i}`` and ``N_{2i+1} = ((i+1)_{i+1})^2 M_{2i+1}``,
the Laguerre masses acting on ``P^{(i)}(0) Q^{(i)}(0)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .hermite_core import Poly
from .real import GUARD_BITS, Number, Real, as_fraction, resolve_precision, rounded, to_real, working_precision
from .sobolev_gram import MassMatrix, SobolevProduct, WeightSpec, gram_orthogonalize


def pochhammer(a: Number, i: int):
    """Rising factorial ``a (a+1) ... (a+i-1)``; exact for rational ``a``."""
    if i < 0:
        raise ValueError("i must be nonnegative")
    if isinstance(a, (int, Fraction)):
        out = Fraction(1) if isinstance(a, Fraction) else 1
    else:
        a = to_real(a)
        out = to_real(1)
    for k in range(i):
        out *= a + k
    return out


@dataclass(frozen=True)
class MassMap:
    r: int
    M: tuple
    N: tuple

    @property
    def even(self) -> tuple:
        """Masses of the ``alpha = -1/2`` half-line product."""
        return self.N[0::2]

    @property
    def odd(self) -> tuple:
        """Masses of the ``alpha = 1/2`` half-line product."""
        return self.N[1::2]


def mass_map(r: int, masses: Sequence[Number]) -> MassMap:
    if r < 1:
        raise ValueError("r must be >= 1")
    if len(masses) != 2 * r:
        raise ValueError(f"expected {2 * r} masses, got {len(masses)}")
    M = tuple(as_fraction(m) for m in masses)
    if any(m < 0 for m in M):
        raise ValueError("masses must be nonnegative")
    N = []
    for k, m in enumerate(M):
        i = k // 2
        factor = pochhammer(i + 1, i) if k % 2 == 0 else pochhammer(i + 1, i + 1)
        N.append(factor * factor * m)
    return MassMap(r, M, tuple(N))


def laguerre_sobolev_poly(
    alpha: Number, masses: Sequence[Number], n: int, prec: int | None = None, basis: str = "classical"
) -> Poly:
    """Monic degree-``n`` polynomial for ``int P Q t^alpha e^{-t} dt + sum_i N_i P^{(i)}(0) Q^{(i)}(0)``."""
    weight = WeightSpec.laguerre_half_line(alpha)
    mass = MassMatrix.diagonal(list(masses)) if masses else MassMatrix.zero(1)
    return gram_orthogonalize(SobolevProduct(weight, mass), n, prec, basis=basis)


def _max_diff(a: Poly, b: Poly, bits: int) -> Real:
    with working_precision(2 * bits + GUARD_BITS):
        size = max(len(a.coeffs), len(b.coeffs))
        worst = to_real(0)
        for k in range(size):
            worst = max(worst, abs(to_real(a[k]) - to_real(b[k])))
    return rounded(worst, bits)


def symmetrization_residual(
    n: int, masses: Sequence[Number], prec: int | None = None, laguerre_basis: str = "monomial"
) -> tuple[Real, Real]:
    """Largest coefficient mismatch of the even and odd substitution identities at index ``n``.

    The line side is built in the Hermite basis; the half-line side defaults
    to the monomial basis so the two constructions share no intermediate
    quantities.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if len(masses) % 2 or not masses:
        raise ValueError("masses must have even, nonzero length")
    bits = resolve_precision(prec)
    mm = mass_map(len(masses) // 2, masses)
    line = SobolevProduct.hermite(MassMatrix.diagonal(mm.M))
    s_even = gram_orthogonalize(line, 2 * n, bits)
    s_odd = gram_orthogonalize(line, 2 * n + 1, bits)
    l_even = laguerre_sobolev_poly(Fraction(-1, 2), mm.even, n, bits, laguerre_basis).substitute_square()
    l_odd = laguerre_sobolev_poly(Fraction(1, 2), mm.odd, n, bits, laguerre_basis).substitute_square().mul_x()
    return _max_diff(s_even, l_even, bits), _max_diff(s_odd, l_odd, bits)
