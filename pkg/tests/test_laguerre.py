from fractions import Fraction

import pytest

from fdhydrogen.closed_form import coefficients
from fdhydrogen.exactfield import QuadNumber, quad_to_float
from fdhydrogen.laguerre import (
    assoc_laguerre1_coeffs,
    continuum_reference_from_laguerre,
    continuum_reference_poly,
    discretised_assoc_laguerre,
    laguerre_coeffs,
)
from fdhydrogen.poly import Poly
from oracles import continuum_by_substitution, laguerre_by_three_term


def test_laguerre_examples():
    assert laguerre_coeffs(0) == Poly([1])
    assert laguerre_coeffs(2) == Poly([1, -2, Fraction(1, 2)])
    assert laguerre_coeffs(3) == Poly([1, -3, Fraction(3, 2), Fraction(-1, 6)])


def test_laguerre_three_term_recurrence():
    reference = laguerre_by_three_term(20)
    for n in range(21):
        assert laguerre_coeffs(n) == Poly(reference[n])


def test_derivative_convention():
    assert assoc_laguerre1_coeffs(0) == Poly([-1])
    assert assoc_laguerre1_coeffs(1) == Poly([-2, 1])
    assert assoc_laguerre1_coeffs(2) == Poly([-3, 3, Fraction(-1, 2)])


def test_continuum_reference_examples():
    assert continuum_reference_poly(1) == Poly([0, 1])
    assert continuum_reference_poly(2) == Poly([0, -2, 1])
    assert continuum_reference_poly(3) == Poly([0, Fraction(27, 2), -9, 1])


@pytest.mark.parametrize("n", range(1, 13))
def test_two_constructions_agree(n):
    assert continuum_reference_poly(n) == continuum_reference_from_laguerre(n)


@pytest.mark.parametrize("n", range(1, 7))
def test_continuum_against_symbolic_substitution(n):
    assert list(continuum_reference_poly(n)) == continuum_by_substitution(n)


def test_continuum_coefficients_alternate_and_nonzero():
    for n in range(1, 13):
        c = continuum_reference_poly(n).coeffs[1:]
        assert all(x != 0 for x in c)
        assert all((a > 0) != (b > 0) for a, b in zip(c, c[1:]))


def test_discretised_examples():
    assert discretised_assoc_laguerre(1, Fraction(1, 3)) == [QuadNumber(1)]
    assert discretised_assoc_laguerre(2, 1) == [-QuadNumber.sqrt_of(5), 1]


def test_discretised_is_p_over_z():
    q = discretised_assoc_laguerre(4, Fraction(1, 2))
    assert q == list(coefficients(4, Fraction(1, 2)))


def test_discretised_richardson_n3():
    target = [Fraction(27, 2), -9, 1]
    d1, d2 = Fraction(1, 100), Fraction(1, 200)
    q1 = [quad_to_float(c) for c in discretised_assoc_laguerre(3, d1)]
    q2 = [quad_to_float(c) for c in discretised_assoc_laguerre(3, d2)]
    plain = max(abs(b - float(t)) for b, t in zip(q2, target))
    extrapolated = max(abs((4 * b - a) / 3 - float(t)) for a, b, t in zip(q1, q2, target))
    assert 0 < plain < 1e-3
    assert extrapolated < 1e-3 * plain


@pytest.mark.parametrize("n", range(2, 9))
def test_discretised_second_order(n):
    ref = continuum_reference_poly(n).coeffs[1:]
    errs = []
    for d in (Fraction(1, 20), Fraction(1, 40), Fraction(1, 80)):
        q = discretised_assoc_laguerre(n, d)
        errs.append(max(abs(quad_to_float(a - b)) for a, b in zip(q, ref)))
    assert 3.5 <= errs[0] / errs[1] <= 4.5
    assert 3.5 <= errs[1] / errs[2] <= 4.5
