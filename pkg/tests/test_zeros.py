from fractions import Fraction

import gmpy2
import pytest

from conftest import BITS, rel
from hermite_sobolev.errors import CertificationError, UnsupportedCase
from hermite_sobolev.hermite_core import Poly, hermite_monic
from hermite_sobolev.mehler_heine import ScaledFamily
from hermite_sobolev.qlambda import coerce_case, q_poly
from hermite_sobolev.real import GUARD_BITS, decimal_digits, fmt, to_real, working_precision
from hermite_sobolev.zeros import (
    family_zeros,
    hermite_zeros,
    interlace_check,
    real_zeros,
    zero_asymptotics_report,
)

F = Fraction


def q(m0, m1, lam=0, parity="even"):
    return ScaledFamily.qlambda(coerce_case(m0, m1, lam), parity)


def test_hermite_zero_examples():
    with working_precision(BITS + GUARD_BITS):
        r2, r3 = gmpy2.sqrt(to_real(F(1, 2))), gmpy2.sqrt(to_real(F(3, 2)))
        low, high = (gmpy2.sqrt((3 - gmpy2.sqrt(to_real(6))) / 2), gmpy2.sqrt((3 + gmpy2.sqrt(to_real(6))) / 2))
    assert rel(hermite_zeros(2).positive_zeros[0], r2) < 1e-75
    assert rel(hermite_zeros(3).positive_zeros[0], r3) < 1e-75
    z4 = hermite_zeros(4).positive_zeros
    assert rel(z4[0], low) < 1e-75 and rel(z4[1], high) < 1e-75
    assert hermite_zeros(1).positive_zeros == ()


def test_hermite_scaled_zero_near_bessel_zero():
    with working_precision(BITS + GUARD_BITS):
        half_pi = gmpy2.const_pi() / 2
    assert rel(hermite_zeros(50).scaled2sqrt[0], half_pi) < 0.05


def test_real_zeros_examples(sqrt_pi):
    half = Poly((F(-1, 2), F(0), F(1))).to_real(BITS)
    with working_precision(BITS + GUARD_BITS):
        r2 = gmpy2.sqrt(to_real(F(1, 2)))
        c = gmpy2.sqrt(sqrt_pi / (2 * (sqrt_pi + 1)))
    assert rel(real_zeros(half).positive_zeros[0], r2) < 1e-75
    assert rel(real_zeros(q_poly(2, coerce_case(1, 0, 0))).positive_zeros[0], c) < 1e-70
    z = real_zeros(hermite_monic(4))
    assert [fmt(v, 6) for v in z.positive_zeros] == ["0.524648", "1.65068"]


def test_counts_match_for_symmetric_families():
    for degree in (7, 40, 121, 200):
        assert len(hermite_zeros(degree)) == degree // 2
        assert len(family_zeros(q(1, 1), degree)) == degree // 2


def test_residual_and_brackets():
    tol = 10.0 ** -(decimal_digits(BITS) - 12)
    for degree in (10, 33):
        p = q_poly(degree, coerce_case(1, 0, 0))
        table = real_zeros(p)
        for z, w in zip(table.positive_zeros, table.bracket_widths):
            with working_precision(BITS + GUARD_BITS):
                scale = max(abs(c) * abs(z) ** k for k, c in enumerate(p.coeffs))
                assert abs(p(z)) <= tol * scale
            assert w <= 2.0 ** -(BITS // 2)
    assert all(w <= 2.0 ** -(BITS // 2) for w in hermite_zeros(40).bracket_widths)


def test_zeros_are_increasing_and_positive():
    table = family_zeros(q(1, 0), 120)
    zs = table.positive_zeros
    assert zs[0] > 0 and all(a < b for a, b in zip(zs, zs[1:]))


def test_interlace_examples():
    assert interlace_check(hermite_zeros(3), hermite_zeros(4))
    assert not interlace_check(hermite_zeros(2), hermite_zeros(2))
    assert interlace_check(family_zeros(q(1, 0), 50), hermite_zeros(50))


def test_hermite_consecutive_degrees_interlace():
    for n in range(2, 40):
        assert interlace_check(hermite_zeros(n), hermite_zeros(n + 1)), n


def test_interlacing_across_case_set():
    for masses in ((1, 0), (0, 1), (1, 1)):
        for degree in list(range(2, 31)) + [99, 100]:
            ours, ref = family_zeros(q(*masses), degree), hermite_zeros(degree)
            if masses[degree % 2] == 0:
                # the mass acting on this parity vanishes, leaving H_n itself
                assert ours.positive_zeros == ref.positive_zeros
            else:
                assert interlace_check(ours, ref), (masses, degree)


def test_zero_mass_family_reproduces_hermite():
    for degree in (8, 31):
        assert family_zeros(q(0, 0), degree).positive_zeros == hermite_zeros(degree).positive_zeros


def test_non_symmetric_family_unsupported():
    with pytest.raises(UnsupportedCase):
        family_zeros(q(2, 1, 1), 10)


def test_odd_polynomial_must_vanish_at_origin():
    with pytest.raises(CertificationError):
        real_zeros(Poly((F(1), F(-1), F(0), F(1))).to_real(BITS))


def test_imaginary_pairs_are_detected():
    # x^2 + 1 times x^2 - 2
    p = Poly((F(-2), F(0), F(-1), F(0), F(1))).to_real(BITS)
    table = real_zeros(p, strict=False)
    assert len(table) == 1 and len(table.imaginary_pairs) == 1
    assert rel(table.imaginary_pairs[0], to_real(1)) < 1e-70
    assert table.complete
    with pytest.raises(CertificationError):
        real_zeros(p, strict=True)


def test_report_mass_case():
    report = zero_asymptotics_report(q(1, 0), k_max=3)
    assert report.accelerated == 1
    assert report.column(1)[0].target is None
    assert [r.n for r in report.column(2)] == [25, 50, 100, 200]
    assert report.trend(1) and report.trend(2)
    assert report.column(2)[-1].relative_error < 0.05


def test_report_hermite_targets():
    report = zero_asymptotics_report(ScaledFamily.hermite("even"), k_max=2)
    assert report.accelerated == 0
    assert all(report.trends().values())
    with working_precision(BITS + GUARD_BITS):
        first, second = gmpy2.const_pi() / 2, 3 * gmpy2.const_pi() / 2
    assert rel(report.column(1)[0].target, first) < 1e-70
    assert rel(report.column(2)[0].target, second) < 1e-70


def test_report_gap_case_has_no_accelerated_zeros():
    report = zero_asymptotics_report(ScaledFamily.diagonal((0, 1, 1, 1), "even"), k_max=2)
    assert report.accelerated == 0
    assert all(report.trends().values())
    assert fmt(report.column(1)[0].target, 6) == "3.12034"


def test_report_validation():
    with pytest.raises(ValueError):
        zero_asymptotics_report(q(1, 0), n_list=[50, 25])
    with pytest.raises(ValueError):
        zero_asymptotics_report(q(1, 0), n_list=[2, 4], k_max=5)
