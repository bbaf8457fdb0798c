"""Dense polynomials over an exact coefficient ring (``Fraction`` or ``QuadNumber``)."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence


def _is_zero(c) -> bool:
    return c == 0


@dataclass(frozen=True)
class Poly:
    """Coefficient tuple indexed by power; trailing zeros are trimmed."""

    coeffs: tuple

    def __init__(self, coeffs: Sequence = ()):
        cs = list(coeffs)
        while cs and _is_zero(cs[-1]):
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def monomial(cls, k: int, c=1) -> Poly:
        return cls([0] * k + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __add__(self, other: Poly) -> Poly:
        n = max(len(self), len(other))
        return Poly([self[k] + other[k] for k in range(n)])

    def __neg__(self) -> Poly:
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other) -> Poly:
        if not isinstance(other, Poly):
            return Poly([c * other for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [0] * (len(self) + len(other) - 1)
        for i, a in enumerate(self.coeffs):
            if _is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    def __rmul__(self, other) -> Poly:
        return self * other

    def shift(self, c) -> Poly:
        """The polynomial ``z -> p(z + c)``."""
        n = len(self)
        out = [0] * n
        for k, a in enumerate(self.coeffs):
            if _is_zero(a):
                continue
            power = 1
            # (z + c)^k = sum_i C(k, i) c^(k-i) z^i, accumulated from i = k down
            for i in range(k, -1, -1):
                out[i] = out[i] + a * comb(k, i) * power
                power = power * c
        return Poly(out)

    def mul_z(self, k: int = 1) -> Poly:
        return Poly([0] * k + list(self.coeffs)) if self.coeffs else Poly()

    def div_z(self) -> Poly:
        """Exact division by ``z``; requires a zero constant term."""
        if self.coeffs and not _is_zero(self.coeffs[0]):
            raise ValueError("constant term is nonzero; not divisible by z")
        return Poly(self.coeffs[1:])

    def derivative(self, m: int = 1) -> Poly:
        cs = list(self.coeffs)
        for _ in range(m):
            cs = [k * cs[k] for k in range(1, len(cs))]
        return Poly(cs)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def monic(self) -> Poly:
        lead = self.coeffs[-1]
        return Poly([c / lead for c in self.coeffs])

    def scale_argument(self, factor) -> Poly:
        """The polynomial ``z -> p(factor * z)``."""
        out, power = [], Fraction(1)
        for c in self.coeffs:
            out.append(c * power)
            power = power * factor
        return Poly(out)
