from fractions import Fraction

import gmpy2
import pytest
from hypothesis import given, settings, strategies as st

from conftest import BITS, absdiff, rel
from hermite_sobolev.errors import PrecisionInsufficient
from hermite_sobolev.hermite_core import Poly, hermite_coefficients
from hermite_sobolev.real import GUARD_BITS, decimal_digits, to_real, working_precision
from hermite_sobolev.sobolev_gram import (
    MassMatrix,
    SobolevProduct,
    WeightSpec,
    gram_orthogonalize,
    gram_orthogonalize_exact,
    inner_exact_hermite,
    sobolev_inner,
    weight_moment,
)

F = Fraction
HERMITE = WeightSpec.hermite_line()
X = lambda k: Poly((F(0),) * k + (F(1),))  # noqa: E731


def product(*masses, lam=None) -> SobolevProduct:
    if lam is not None:
        return SobolevProduct.hermite(MassMatrix.two_by_two(masses[0], masses[1], lam))
    return SobolevProduct.hermite(MassMatrix.diagonal(list(masses)))


def max_coeff_gap(p: Poly, q: Poly):
    with working_precision(BITS + GUARD_BITS):
        return max(abs(to_real(p[k]) - to_real(q[k])) for k in range(max(len(p.coeffs), len(q.coeffs))))


def test_moment_examples(sqrt_pi):
    assert rel(weight_moment(HERMITE, 0), sqrt_pi) < 1e-75
    assert weight_moment(HERMITE, 3) == 0
    with working_precision(BITS + GUARD_BITS):
        half = sqrt_pi / 2
    assert rel(weight_moment(WeightSpec.laguerre_half_line(F(-1, 2)), 1), half) < 1e-75


def test_inner_examples(sqrt_pi):
    h3 = Poly(hermite_coefficients(3))
    with working_precision(BITS + GUARD_BITS):
        three_quarters, plus_one, half = 3 * sqrt_pi / 4, sqrt_pi + 1, sqrt_pi / 2
    assert rel(sobolev_inner(product(0, 0), h3, h3), three_quarters) < 1e-75
    assert rel(sobolev_inner(product(1, 0), X(0), X(0)), plus_one) < 1e-75
    assert rel(sobolev_inner(product(1, 0), X(2), X(0)), half) < 1e-75


def test_exact_inner_examples():
    assert inner_exact_hermite(X(0), X(0), MassMatrix.diagonal([1, 0])) == (1, F(1))
    assert inner_exact_hermite(X(1), X(1), MassMatrix.diagonal([1, 1])) == (1, F(1, 2))
    assert inner_exact_hermite(X(2), X(0), MassMatrix.zero(2)) == (0, F(1, 2))


def test_gram_examples(sqrt_pi):
    q4 = gram_orthogonalize(product(0, 0), 4)
    assert max_coeff_gap(q4, Poly(hermite_coefficients(4))) < 1e-75
    q2 = gram_orthogonalize(product(1, 0), 2)
    with working_precision(BITS + GUARD_BITS):
        c = -sqrt_pi / (2 * (sqrt_pi + 1))
    assert rel(q2[0], c) < 1e-75 and q2[1] == 0 and q2[2] == 1
    for m0, m1 in ((1, 0), (3, 7), (0, 2)):
        q1 = gram_orthogonalize(product(m0, m1), 1)
        assert q1.coeffs == (0, 1)


def test_psd_check():
    with pytest.raises(ValueError):
        MassMatrix(((0, 1), (1, 0)))
    with pytest.raises(ValueError):
        MassMatrix(((1, 2), (0, 1)))
    MassMatrix.two_by_two(1, 1, 1)  # rank one is fine


def test_laguerre_parameter_domain():
    with pytest.raises(ValueError):
        WeightSpec.laguerre_half_line(-1)


@pytest.mark.parametrize("c", [F(1, 7), F(3), F(1000)])
def test_scaling_invariance(c):
    base = product(1, 2, 0, 5)
    for n in (3, 8, 15):
        p, q = gram_orthogonalize(base, n), gram_orthogonalize(base.scaled(c), n)
        assert max_coeff_gap(p, q) <= 2.0 ** -(BITS - 20) * max(1, max(abs(v) for v in p.coeffs))


@pytest.mark.parametrize(
    "mass",
    [
        MassMatrix.diagonal([1, 0]),
        MassMatrix.diagonal([F(1, 3), 2]),
        MassMatrix.two_by_two(2, 1, 1),
        MassMatrix.two_by_two(1, 1, 1),
        MassMatrix.diagonal([1, 1, 1, 1]),
        MassMatrix.diagonal([0, 1, 5, 0]),
    ],
)
def test_exact_oracle(mass):
    tol = 10.0 ** -(decimal_digits(BITS) - 10)
    prod = SobolevProduct.hermite(mass)
    for n in range(0, 13):
        exact = gram_orthogonalize_exact(mass, n).to_real(BITS)
        ours = gram_orthogonalize(prod, n)
        for k in range(n + 1):
            assert absdiff(ours[k], exact[k]) <= tol * max(1, abs(exact[k])), (n, k)


@given(
    st.fractions(min_value=0, max_value=10, max_denominator=20),
    st.fractions(min_value=0, max_value=10, max_denominator=20),
    st.fractions(min_value=-1, max_value=1, max_denominator=20),
    st.integers(2, 7),
)
@settings(max_examples=25, deadline=None)
def test_exact_oracle_random_two_by_two(m0, m1, t, n):
    lam = t * gmpy2.isqrt(int(m0 * m1 * 10**6)) / 1000  # keeps lam^2 <= m0 m1
    mass = MassMatrix.two_by_two(m0, m1, F(lam))
    exact = gram_orthogonalize_exact(mass, n).to_real(BITS)
    ours = gram_orthogonalize(SobolevProduct.hermite(mass), n)
    for k in range(n + 1):
        assert absdiff(ours[k], exact[k]) <= 1e-65 * max(1, abs(exact[k]))


@pytest.mark.parametrize("masses", [(1, 0), (0, 1), (1, 1, 1, 1), (0, 1, 5, 0), (1, 1, 1, 1, 1, 1)])
def test_diagonal_masses_give_symmetric_polynomials(masses):
    for n in (5, 12, 31):
        q = gram_orthogonalize(product(*masses), n)
        assert q.parity_defect() == 0
        assert q.degree == n and q.leading == 1


def test_off_diagonal_breaks_symmetry():
    q = gram_orthogonalize(product(1, 1, lam=1), 6)
    assert q.parity_defect() > 1e-10


def test_orthogonality_residuals():
    tol = 10.0 ** -(decimal_digits(BITS) - 15)
    for prod in (product(1, 0), product(2, 1, lam=1), product(1, 1, 1, 1), product(0, 0, 0, 0, 5, 1)):
        for n in (6, 17, 30):
            q = gram_orthogonalize(prod, n)
            with working_precision(BITS + GUARD_BITS):
                qn = gmpy2.sqrt(sobolev_inner(prod, q, q, BITS + GUARD_BITS))
                for k in range(n):
                    xk = gmpy2.sqrt(sobolev_inner(prod, X(k), X(k), BITS + GUARD_BITS))
                    residual = abs(sobolev_inner(prod, q, X(k).to_real(BITS), BITS + GUARD_BITS))
                    assert residual <= tol * qn * xk, (prod, n, k)


def test_monomial_and_classical_bases_agree():
    for prod in (product(1, 1, 1, 1), product(2, 1, lam=1)):
        for n in (4, 11, 20):
            a = gram_orthogonalize(prod, n, basis="classical")
            b = gram_orthogonalize(prod, n, basis="monomial")
            assert max_coeff_gap(a, b) <= 1e-60 * max(1, max(abs(v) for v in a.coeffs))


def test_laguerre_classical_reduction():
    prod = SobolevProduct(WeightSpec.laguerre_half_line(F(1, 2)), MassMatrix.zero(1))
    q = gram_orthogonalize(prod, 3)
    # monic L_3^{(1/2)}: t^3 - 3(7/2) t^2 + 3 (5/2)(7/2) t - (3/2)(5/2)(7/2)
    expected = (-F(105, 8), F(105, 4), -F(21, 2), F(1))
    assert all(rel(q[k], to_real(expected[k])) < 1e-70 for k in range(4))


def test_precision_ceiling_names_the_degree():
    with pytest.raises(PrecisionInsufficient, match="degree"):
        gram_orthogonalize(product(1, 1, 1, 1), 160, basis="monomial", max_prec=400)


def test_escalation_succeeds_under_a_generous_ceiling():
    q = gram_orthogonalize(product(1, 1), 60, basis="monomial")
    r = gram_orthogonalize(product(1, 1), 60)
    assert max_coeff_gap(q, r) <= 1e-55 * max(abs(v) for v in r.coeffs)


def test_degree_zero_and_validation():
    assert gram_orthogonalize(product(1, 0), 0).coeffs == (1,)
    with pytest.raises(ValueError):
        gram_orthogonalize(product(1, 0), -1)
    with pytest.raises(ValueError):
        gram_orthogonalize(product(1, 0), 2, basis="chebyshev")
