"""Explicit entire solutions ``u_n(z) = p_n(z) exp(-beta z)`` of the discrete hydrogen equation

    -u(z - delta)/2 - u(z + delta)/2 - delta^2 u(z)/z = lambda u(z),   u(0) = 0.

With ``t = delta/n`` and ``s = sqrt(1 + t^2)`` the eigenvalue is ``lambda = -s``,
the exponent satisfies ``sinh(beta delta) = t`` and ``cosh(beta delta) = s``,
so ``exp(+-beta delta) = s +- t`` stays inside Q(s).  The per-site decay
factor on the grid ``z = delta j`` is ``r = s - t``.

The polynomial part is normalised monic (``c_n = 1``).  Substituting the
ansatz and matching powers of ``z`` gives a triangular downward recurrence
for ``c_{n-1}, ..., c_1``; ``c_0 = 0`` is forced by the constant term.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

import mpmath

from .errors import DomainError
from .exactfield import QuadNumber
from .poly import Poly


def as_rational(value) -> Fraction:
    """Parse a rational from ``Fraction``, ``int`` or a ``"p/q"`` string."""
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, (Fraction, int)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError as exc:
            raise DomainError(f"malformed rational {value!r}") from exc
    raise TypeError(f"exact layer takes rationals, not {type(value).__name__}")


def _check(n: int, delta) -> Fraction:
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    delta = as_rational(delta)
    if delta <= 0:
        raise DomainError(f"delta must be positive, got {delta}")
    return delta


@dataclass(frozen=True)
class ClosedFormSolution:
    n: int
    delta: Fraction
    lam: QuadNumber
    s: QuadNumber
    sinh_step: Fraction
    r: QuadNumber
    coeffs: tuple
    warnings: tuple = field(default=())

    @property
    def poly(self) -> Poly:
        """``p(z) = sum_k c_k z^k`` with the implied ``c_0 = 0``."""
        return Poly([self.s.rational(0), *self.coeffs])

    @property
    def radicand(self) -> int:
        return self.s.d


def eigenvalue(n: int, delta) -> QuadNumber:
    """``-sqrt(1 + delta^2/n^2)`` as an exact quadratic number."""
    delta = _check(n, delta)
    return -QuadNumber.sqrt_of(1 + (delta / n) ** 2)


def decay_rate(n: int, delta, precision_bits: int = 53):
    """``arsinh(delta/n)/delta``; a float at 53 bits, an ``mpf`` above that."""
    delta = _check(n, delta)
    t = delta / n
    with mpmath.workprec(precision_bits + 32):
        beta = mpmath.asinh(mpmath.mpf(t.numerator) / t.denominator) / (
            mpmath.mpf(delta.numerator) / delta.denominator
        )
    if precision_bits == 53:
        return float(beta)
    with mpmath.workprec(precision_bits):
        return +beta


def _recurrence(n: int, delta: Fraction, s: QuadNumber) -> list:
    t = delta / n
    c = [None] * (n + 1)
    c[n] = s.rational(1)
    # a_m * delta^m / m!: cosh part for even m, sinh part for odd m
    weight = {}
    for m in range(2, n + 1):
        scale = delta**m / factorial(m)
        weight[m] = (-s) * scale if m % 2 == 0 else s.rational(t * scale)
    for k in range(n - 1, 0, -1):
        acc = s.rational(0)
        for m in range(2, n - k + 2):
            falling = Fraction(factorial(k + m - 1), factorial(k - 1))
            acc = acc + weight[m] * c[k + m - 1] * falling
        c[k] = acc * (Fraction(n) / (delta * delta * (n - k)))
    return c[1:]


def solve(n: int, delta) -> ClosedFormSolution:
    delta = _check(n, delta)
    t = delta / n
    s = QuadNumber.sqrt_of(1 + t * t)
    notes = ()
    if delta >= n:
        notes = (f"delta={delta} >= n={n}: outside the convergence radius of the series in delta",)
    return ClosedFormSolution(
        n=n,
        delta=delta,
        lam=-s,
        s=s,
        sinh_step=t,
        r=s - t,
        coeffs=tuple(_recurrence(n, delta, s)),
        warnings=notes,
    )


def coefficients(n: int, delta) -> tuple:
    """Monic coefficients ``c_1..c_n`` of the polynomial part."""
    return solve(n, delta).coeffs


def alpha_factors(sol: ClosedFormSolution) -> list:
    """Ratios ``c_k / C_k`` against the monic continuum polynomial; ``alpha_n = 1``."""
    from .laguerre import continuum_reference_poly

    ref = continuum_reference_poly(sol.n)
    out = []
    for k, c in enumerate(sol.coeffs, start=1):
        if ref[k] == 0:
            raise AssertionError(f"continuum coefficient C_{k} vanished for n={sol.n}")
        out.append(c / ref[k])
    return out


def grid_samples(sol: ClosedFormSolution, j_max: int) -> list:
    """Exact ``u_j = p(delta j) r^j`` for ``j = 1..j_max`` (``u_0 = 0`` is implicit)."""
    if j_max < 1:
        raise DomainError("j_max must be >= 1")
    p = sol.poly
    out = []
    rj = sol.s.rational(1)
    for j in range(1, j_max + 1):
        rj = rj * sol.r
        out.append(p(sol.delta * j) * rj)
    return out


def evaluate(sol: ClosedFormSolution, z: float) -> float:
    """Float value ``p(z) exp(-beta z)`` by Horner on the rounded coefficients."""
    beta = decay_rate(sol.n, sol.delta)
    acc = 0.0
    for c in reversed(sol.coeffs):
        acc = (acc + float(c)) * z
    return acc * math.exp(-beta * z)
