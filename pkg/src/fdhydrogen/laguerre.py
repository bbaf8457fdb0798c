"""Continuum and discretised Laguerre-type polynomials.

Sign convention: the derivative object ``d/dx L_{n+1}(x)`` is stored as is.
The common associated polynomial ``L_n^{(1)}`` differs from it by an overall
minus sign, and every comparison here is made after monic normalisation, so
the choice never changes a result.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

from .errors import DomainError
from .poly import Poly

RationalPoly = Poly


def laguerre_coeffs(n: int) -> Poly:
    """``L_n(x) = sum_k (-1)^k / k! * C(n, k) x^k`` with exact rational coefficients."""
    if n < 0:
        raise DomainError("n must be >= 0")
    return Poly([Fraction((-1) ** k * comb(n, k), factorial(k)) for k in range(n + 1)])


def assoc_laguerre1_coeffs(n: int) -> Poly:
    """Derivative ``d/dx L_{n+1}(x)``, a degree-``n`` polynomial."""
    if n < 0:
        raise DomainError("n must be >= 0")
    return laguerre_coeffs(n + 1).derivative()


def continuum_reference_poly(n: int) -> Poly:
    """Monic polynomial factor ``P_n`` of the continuum state ``P_n(z) exp(-z/n)``.

    Substituting into ``-u''/2 - u/z = -u/(2 n^2)`` and multiplying by ``z``
    leaves ``-z P''/2 + z P'/n - P = 0``.  Matching ``z^k`` gives the
    two-term recurrence ``c_k = n k (k+1) c_{k+1} / (2 (k - n))``.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    c = [Fraction(0)] * (n + 1)
    c[n] = Fraction(1)
    for k in range(n - 1, 0, -1):
        c[k] = Fraction(n * k * (k + 1), 2 * (k - n)) * c[k + 1]
    return Poly(c)


def continuum_reference_from_laguerre(n: int) -> Poly:
    """Second construction of ``P_n``: monic ``z * L'_{n}(2z/n)``, via ``assoc_laguerre1_coeffs``."""
    if n < 1:
        raise DomainError("n must be >= 1")
    q = assoc_laguerre1_coeffs(n - 1).scale_argument(Fraction(2, n))
    return q.mul_z().monic()


def discretised_assoc_laguerre(n: int, delta) -> list:
    """Coefficients of ``p(z)/z`` where ``p`` is the monic polynomial part of the
    discrete solution; tends to ``continuum_reference_poly(n)/z`` as delta -> 0.

    Returns a list of ``QuadNumber`` of length ``n``, lowest power first.
    """
    from .closed_form import coefficients

    return list(coefficients(n, delta))
