"""Exact arithmetic in Q(sqrt(D)).

Every closed-form quantity at a grid point lives in the field generated by
``s = sqrt(1 + delta**2 / n**2)`` over the rationals, so one square root per
value suffices.  The radicand is canonicalised to a squarefree positive
integer, ``sqrt(p/q) = sqrt(p*q)/q``, which lets two values built from the
same ``s`` compare and combine no matter how the radicand was written.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from numbers import Rational

import mpmath
from mpmath import libmp

from .errors import FieldMismatchError

_TRIAL_LIMIT = 100_000


@lru_cache(maxsize=1024)
def _squarefree_split(value: int) -> tuple[int, int]:
    """Return ``(f, m)`` with ``value == f*f*m`` and ``m`` squarefree.

    Trial division is capped at ``_TRIAL_LIMIT``; beyond that the cofactor is
    only tested for being a perfect square, so ``m`` may keep a huge square
    factor.  Arithmetic stays exact either way.
    """
    out, m, rem = 1, 1, value
    i = 2
    while i * i <= rem and i <= _TRIAL_LIMIT:
        if rem % i == 0:
            e = 0
            while rem % i == 0:
                rem //= i
                e += 1
            out *= i ** (e // 2)
            if e % 2:
                m *= i
        i += 1 if i == 2 else 2
    r = isqrt(rem)
    if r * r == rem:
        out *= r
    else:
        m *= rem
    return out, m


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected a rational, got {type(x).__name__}")


class QuadNumber:
    """Immutable ``a + b*sqrt(d)`` with rational ``a, b`` and squarefree integer ``d``."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d=1):
        a = _as_fraction(a)
        b = _as_fraction(b)
        radicand = _as_fraction(d)
        if radicand <= 0:
            raise ValueError("radicand must be positive")
        f, m = _squarefree_split(radicand.numerator * radicand.denominator)
        b = b * Fraction(f, radicand.denominator)
        if m == 1:
            a, b = a + b, Fraction(0)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", m)

    @classmethod
    def _raw(cls, a: Fraction, b: Fraction, d: int) -> QuadNumber:
        obj = object.__new__(cls)
        object.__setattr__(obj, "a", a)
        object.__setattr__(obj, "b", b)
        object.__setattr__(obj, "d", d)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("QuadNumber is immutable")

    @classmethod
    def sqrt_of(cls, radicand) -> QuadNumber:
        """The positive square root of a positive rational."""
        return cls(0, 1, radicand)

    def rational(self, x) -> QuadNumber:
        """Embed a rational into this number's field."""
        return QuadNumber._raw(_as_fraction(x), Fraction(0), self.d)

    # -- coercion ---------------------------------------------------------

    def _coerce(self, other) -> QuadNumber | None:
        if isinstance(other, QuadNumber):
            if other.d == self.d:
                return other
            # plain rationals (d == 1) embed in every field; anything else is an error
            if other.d == 1:
                return QuadNumber._raw(other.a, other.b, self.d)
            if self.d == 1:
                return None
            raise FieldMismatchError(f"cannot combine sqrt({self.d}) and sqrt({other.d}) values")
        if isinstance(other, (int, Fraction)):
            return QuadNumber._raw(Fraction(other), Fraction(0), self.d)
        return NotImplemented

    def _lift(self, other):
        """Bring ``self`` and ``other`` into one field; returns ``(x, y)``."""
        y = self._coerce(other)
        if y is NotImplemented:
            return NotImplemented
        if y is None:
            return QuadNumber._raw(self.a, self.b, other.d), other
        return self, y

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        pair = self._lift(other)
        if pair is NotImplemented:
            return NotImplemented
        x, y = pair
        return QuadNumber._raw(x.a + y.a, x.b + y.b, x.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadNumber._raw(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        pair = self._lift(other)
        if pair is NotImplemented:
            return NotImplemented
        x, y = pair
        return QuadNumber._raw(x.a - y.a, x.b - y.b, x.d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadNumber._raw(self.a * other, self.b * other, self.d)
        pair = self._lift(other)
        if pair is NotImplemented:
            return NotImplemented
        x, y = pair
        if y.b == 0:
            return QuadNumber._raw(x.a * y.a, x.b * y.a, x.d)
        if x.b == 0:
            return QuadNumber._raw(x.a * y.a, x.a * y.b, x.d)
        return QuadNumber._raw(x.a * y.a + x.b * y.b * x.d, x.a * y.b + x.b * y.a, x.d)

    __rmul__ = __mul__

    def conjugate(self) -> QuadNumber:
        return QuadNumber._raw(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        """Field norm ``a**2 - b**2 * d``; zero only for the zero element."""
        return self.a * self.a - self.b * self.b * self.d

    def inverse(self) -> QuadNumber:
        if self.b == 0:
            if self.a == 0:
                raise ZeroDivisionError("division by zero in Q(sqrt(d))")
            return QuadNumber._raw(1 / self.a, Fraction(0), self.d)
        nrm = self.norm()
        if nrm == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(d))")
        return QuadNumber._raw(self.a / nrm, -self.b / nrm, self.d)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero in Q(sqrt(d))")
            return QuadNumber._raw(self.a / other, self.b / other, self.d)
        pair = self._lift(other)
        if pair is NotImplemented:
            return NotImplemented
        x, y = pair
        return x * y.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = self.rational(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison -------------------------------------------------------

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def sign(self) -> int:
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: the larger magnitude wins
        diff = self.a * self.a - self.b * self.b * self.d
        return sa if diff > 0 else sb

    def __eq__(self, other):
        if isinstance(other, QuadNumber):
            if other.d == self.d:
                return self.a == other.a and self.b == other.b
            # distinct squarefree radicands are linearly independent over Q
            return self.b == 0 and other.b == 0 and self.a == other.a
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __bool__(self):
        return not self.is_zero()

    # -- conversion -------------------------------------------------------

    def __float__(self):
        return quad_to_float(self, 53)

    def __str__(self):
        return (
            f"{self.a.numerator}/{self.a.denominator} + "
            f"({self.b.numerator}/{self.b.denominator})*sqrt({self.d})"
        )

    def __repr__(self):
        return f"QuadNumber({self})"

    _PATTERN = re.compile(
        r"^\s*(-?\d+)/(\d+)\s*\+\s*\(\s*(-?\d+)/(\d+)\s*\)\s*\*\s*sqrt\(\s*(\d+(?:/\d+)?)\s*\)\s*$"
    )

    @classmethod
    def parse(cls, text: str) -> QuadNumber:
        """Inverse of ``str``: ``"a/b + (c/d)*sqrt(D)"``."""
        m = cls._PATTERN.match(text)
        if m is None:
            raise ValueError(f"not a quadratic number: {text!r}")
        p, q, r, t, radicand = m.groups()
        return cls(Fraction(int(p), int(q)), Fraction(int(r), int(t)), Fraction(radicand))


def quad_arith(x: QuadNumber, y: QuadNumber, op: str) -> QuadNumber:
    """Field operation by name: ``add``, ``sub``, ``mul`` or ``div``."""
    if x.d != y.d and x.d != 1 and y.d != 1:
        raise FieldMismatchError(f"cannot combine sqrt({x.d}) and sqrt({y.d}) values")
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown operation {op!r}")


def quad_is_zero(x: QuadNumber) -> bool:
    # rational-square radicands were folded into ``a`` at construction
    return x.a == 0 and x.b == 0


def _round_fraction(x: Fraction, precision_bits: int):
    if precision_bits == 53:
        return float(x)
    raw = libmp.from_rational(x.numerator, x.denominator, precision_bits, libmp.round_nearest)
    return mpmath.mp.make_mpf(raw)


def quad_to_float(x: QuadNumber, precision_bits: int = 53):
    """Correctly rounded value of ``x`` at ``precision_bits`` bits.

    Returns a Python ``float`` for 53 bits and an ``mpmath.mpf`` otherwise.
    The irrational part is bracketed with integer square roots, and the
    bracket is tightened until both ends round to the same number.
    """
    if precision_bits < 53:
        raise ValueError("precision_bits must be >= 53")
    if x.b == 0:
        return _round_fraction(x.a, precision_bits)
    work = precision_bits + 64
    while True:
        scale = 1 << work
        root = isqrt(x.d * scale * scale)
        lo = x.a + x.b * Fraction(root, scale)
        hi = x.a + x.b * Fraction(root + 1, scale)
        r_lo = _round_fraction(lo, precision_bits)
        r_hi = _round_fraction(hi, precision_bits)
        if r_lo == r_hi:
            return r_lo
        work *= 2
