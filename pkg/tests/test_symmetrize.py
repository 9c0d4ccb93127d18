from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import BITS, rel
from hermite_sobolev.real import GUARD_BITS, decimal_digits, to_real, working_precision
from hermite_sobolev.symmetrize import laguerre_sobolev_poly, mass_map, pochhammer, symmetrization_residual

F = Fraction
TOL = 10.0 ** -(decimal_digits(BITS) - 15)


@pytest.mark.parametrize("a, i, value", [(5, 0, 1), (2, 1, 2), (2, 2, 6), (3, 3, 60), (F(1, 2), 2, F(3, 4))])
def test_pochhammer_examples(a, i, value):
    assert pochhammer(a, i) == value


def test_pochhammer_real_argument():
    with working_precision(BITS):
        x = to_real(F(1, 3))
    assert rel(pochhammer(x, 3), to_real(F(1, 3) * F(4, 3) * F(7, 3))) < 1e-70
    with pytest.raises(ValueError):
        pochhammer(2, -1)


def test_mass_map_examples():
    m = [F(2), F(3), F(5), F(7)]
    assert mass_map(2, m).N == (2, 3, 20, 252)
    assert mass_map(1, [F(4), F(9)]).N == (4, 9)
    mm = mass_map(3, [1] * 6)
    assert mm.N == (1, 1, 4, 36, 144, 3600)
    assert mm.even == (1, 4, 144) and mm.odd == (1, 36, 3600)


def test_mass_map_validation():
    with pytest.raises(ValueError):
        mass_map(2, [1, 1, 1])
    with pytest.raises(ValueError):
        mass_map(1, [1, -1])
    with pytest.raises(ValueError):
        mass_map(0, [])


@given(st.integers(1, 4), st.data())
@settings(max_examples=25, deadline=None)
def test_mass_map_is_exact_and_scales_by_squares(r, data):
    masses = data.draw(st.lists(st.fractions(0, 10, max_denominator=12), min_size=2 * r, max_size=2 * r))
    mm = mass_map(r, masses)
    for k, (m, n) in enumerate(zip(mm.M, mm.N)):
        assert isinstance(n, Fraction)
        if m:
            ratio = n / m
            root = int(ratio**0.5 + 0.5)
            assert root * root == ratio and ratio.denominator == 1
        if k < 2:
            assert n == m


def test_laguerre_examples(sqrt_pi):
    assert laguerre_sobolev_poly(F(-1, 2), [], 1).coeffs[0] == F(-1, 2)
    assert laguerre_sobolev_poly(F(1, 2), [], 1).coeffs[0] == F(-3, 2)
    p = laguerre_sobolev_poly(F(-1, 2), [1], 1)
    with working_precision(BITS + GUARD_BITS):
        c = -(sqrt_pi / 2) / (sqrt_pi + 1)
    assert rel(p[0], c) < 1e-75 and p[1] == 1


def test_residual_examples():
    even, odd = symmetrization_residual(1, [0, 0])
    assert even <= 2.0**-BITS and odd <= 2.0**-BITS
    even, _ = symmetrization_residual(1, [1, 0])
    assert even <= TOL
    for n in range(0, 13):
        even, odd = symmetrization_residual(n, [1, 1, 1, 1])
        assert even <= TOL and odd <= TOL, n


@pytest.mark.parametrize("masses", [(0, 0), (0, 0, 0, 0, 0, 0)])
def test_classical_reduction(masses):
    for n in range(0, 21):
        even, odd = symmetrization_residual(n, list(masses))
        assert even <= TOL and odd <= TOL, n


@pytest.mark.parametrize(
    "masses",
    [(5, 0), (0, 1, 5, 0), (0, 0, 1, 1), (1, 5, 0, 1, 1, 0)],
)
def test_gap_patterns(masses):
    for n in (3, 11, 20):
        even, odd = symmetrization_residual(n, list(masses))
        assert even <= TOL and odd <= TOL, n


def test_half_line_bases_agree():
    a = laguerre_sobolev_poly(F(1, 2), [1, 36], 9, basis="classical")
    b = laguerre_sobolev_poly(F(1, 2), [1, 36], 9, basis="monomial")
    assert all(rel(a[k], b[k]) < 1e-60 for k in range(10))


def test_residual_validation():
    with pytest.raises(ValueError):
        symmetrization_residual(-1, [1, 1])
    with pytest.raises(ValueError):
        symmetrization_residual(2, [1, 1, 1])
