"""Operators isospectral to simple sequences, built as polynomials in ``V``.

``W = (V^2 - I)/delta^2`` sends the bound-state eigenvalue
``-sqrt(1 + delta^2/n^2)`` to ``1/n^2``; ``W^k`` then has ``1/n^(2k)`` and
``f(W)`` for an interpolating polynomial ``f`` places ``f(1/n^2)`` wherever
we like for ``n <= m``.  The continuous band ``[-1, 1]`` of ``V`` lands in
``[-1/delta^2, 0]`` under the same map.  Powers fold that interval onto
``[0, delta^(-2k)]``, so for ``k >= 2`` and small delta the bound states of
``W^k`` sit inside the band image and are not its largest eigenvalues.

All band products run in exact rationals and are rounded once.  ``W`` is the
square of the truncated ``V`` (not the truncation of the infinite ``V^2``), so
the spectral map is exact for each truncation; the two differ only in the
last diagonal entry.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .closed_form import as_rational
from .errors import ConditioningError, DomainError
from .spectra import eigenvalues_bisection, householder_tridiagonalize, sturm_count

MAX_TARGETS = 8

# exact symmetric band: bands[d][i] = M[i, i + d]
ExactBands = tuple


@dataclass(frozen=True)
class BandedSymmetric:
    N: int
    bandwidth: int
    bands: tuple
    provenance: dict = field(default_factory=dict)
    exact: ExactBands | None = field(default=None, repr=False, compare=False)

    def to_dense(self) -> np.ndarray:
        A = np.zeros((self.N, self.N))
        for d, band in enumerate(self.bands):
            if len(band):
                A += np.diag(band, d)
                if d:
                    A += np.diag(band, -d)
        return A

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.bands[0] * v
        for d in range(1, self.bandwidth + 1):
            out[:-d] += self.bands[d] * v[d:]
            out[d:] += self.bands[d] * v[:-d]
        return out


def _from_exact(bands: ExactBands, provenance: dict) -> BandedSymmetric:
    N = len(bands[0])
    floats = tuple(np.array([float(x) for x in band]) for band in bands)
    for b in floats:
        b.setflags(write=False)
    return BandedSymmetric(N, len(bands) - 1, floats, provenance, bands)


def _entry(bands: ExactBands, i: int, k: int):
    d = k - i if k >= i else i - k
    if d >= len(bands):
        return 0
    return bands[d][min(i, k)]


def _band_product(A: ExactBands, B: ExactBands, N: int) -> ExactBands:
    """Upper bands of ``A @ B`` for commuting symmetric band matrices (result symmetric)."""
    ba, bb = len(A) - 1, len(B) - 1
    width = min(ba + bb, N - 1)
    out = []
    for d in range(width + 1):
        band = []
        for i in range(N - d):
            j = i + d
            acc = Fraction(0)
            for k in range(max(0, i - ba, j - bb), min(N - 1, i + ba, j + bb) + 1):
                acc += _entry(A, i, k) * _entry(B, k, j)
            band.append(acc)
        out.append(tuple(band))
    return tuple(out)


def _add_scaled_identity(A: ExactBands, c: Fraction) -> ExactBands:
    return (tuple(x + c for x in A[0]),) + tuple(A[1:])


def _scale(A: ExactBands, c: Fraction) -> ExactBands:
    return tuple(tuple(x * c for x in band) for band in A)


def _exact_V(N: int, delta: Fraction) -> ExactBands:
    diag = tuple(-delta / j for j in range(1, N + 1))
    off = tuple(Fraction(-1, 2) for _ in range(N - 1))
    return (diag, off)


def _exact_W(N: int, delta: Fraction) -> ExactBands:
    V = _exact_V(N, delta)
    V2 = _band_product(V, V, N)
    return _scale(_add_scaled_identity(V2, Fraction(-1)), 1 / (delta * delta))


def build_W(N: int, delta) -> BandedSymmetric:
    """Pentadiagonal ``(V_N^2 - I)/delta^2`` from the ``N``-truncation of ``V``."""
    if N < 2:
        raise DomainError("N must be >= 2")
    delta = as_rational(delta)
    if delta <= 0:
        raise DomainError("delta must be positive")
    return _from_exact(_exact_W(N, delta), {"construction": "W", "delta": str(delta), "N": N})


def _require_exact(W: BandedSymmetric) -> ExactBands:
    if W.exact is None:
        return tuple(tuple(Fraction(float(x)) for x in band) for band in W.bands)
    return W.exact


def matrix_power(W: BandedSymmetric, k: int) -> BandedSymmetric:
    if k < 1:
        raise DomainError("k must be >= 1")
    if W.bandwidth * k >= W.N:
        raise DomainError(f"bandwidth {W.bandwidth * k} of the power reaches the dimension {W.N}")
    if k == 1:
        return W
    base = _require_exact(W)
    result = base
    for _ in range(k - 1):
        result = _band_product(result, base, W.N)
    prov = dict(W.provenance, construction=f"{W.provenance.get('construction', 'B')}^{k}")
    return _from_exact(result, prov)


def newton_coefficients(nodes: Sequence[Fraction], values: Sequence[Fraction]) -> list[Fraction]:
    """Divided differences ``f[x_0], f[x_0, x_1], ...`` in exact arithmetic."""
    table = list(values)
    coeffs = [table[0]]
    for level in range(1, len(nodes)):
        table = [
            (table[i + 1] - table[i]) / (nodes[i + level] - nodes[i]) for i in range(len(table) - 1)
        ]
        coeffs.append(table[0])
    return coeffs


def newton_eval(nodes: Sequence[Fraction], coeffs: Sequence[Fraction], x):
    acc = coeffs[-1]
    for c, node in zip(reversed(coeffs[:-1]), reversed(nodes[: len(coeffs) - 1])):
        acc = acc * (x - node) + c
    return acc


def prescribe_spectrum(targets: Sequence[float], N: int, delta) -> BandedSymmetric:
    """``f(W)`` with ``f`` interpolating ``f(1/n^2) = targets[n-1]`` for ``n = 1..m``."""
    m = len(targets)
    if m < 2:
        raise DomainError("need at least two targets")
    if m > MAX_TARGETS:
        raise ConditioningError(f"{m} targets exceed the conditioning cap of {MAX_TARGETS}")
    delta = as_rational(delta)
    lifted = [Fraction(t) for t in targets]
    nodes = [Fraction(1, n * n) for n in range(1, m + 1)]
    coeffs = newton_coefficients(nodes, lifted)
    # trailing zero divided differences lower the degree
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    if 2 * (len(coeffs) - 1) >= N:
        raise DomainError("polynomial degree too high for this dimension")
    W = _exact_W(N, delta)
    # Newton-form Horner: f(W) = c0 + (W - x0)(c1 + (W - x1)(...))
    acc = ((tuple(coeffs[-1] for _ in range(N))),)
    for c, node in zip(reversed(coeffs[:-1]), reversed(nodes[: len(coeffs) - 1])):
        acc = _band_product(_add_scaled_identity(W, -node), acc, N)
        acc = _add_scaled_identity(acc, c)
    return _from_exact(
        acc,
        {
            "construction": "f(W)",
            "delta": str(delta),
            "N": N,
            "targets": [float(t) for t in targets],
            "nodes": [str(x) for x in nodes],
            "newton_coefficients": [str(c) for c in coeffs],
        },
    )


def _auto_tol(T, tol):
    return 4 * np.finfo(float).eps * max(T.norm(), 1.0) if tol is None else tol


def banded_spectrum(B: BandedSymmetric, k_lo: int, k_hi: int, tol: float | None = None) -> np.ndarray:
    """Index-certified eigenvalues ``k_lo..k_hi`` (1-based, ascending) via tridiagonal reduction.

    ``tol=None`` bisects down to the rounding floor ``4 eps ||B||``.
    """
    if B.N == 1:
        if k_lo != 1 or k_hi != 1:
            raise DomainError("1x1 matrix has a single eigenvalue")
        return np.array([float(B.bands[0][0])])
    T = householder_tridiagonalize(B.to_dense())
    return eigenvalues_bisection(T, k_lo, k_hi, _auto_tol(T, tol))


def spectral_report(B: BandedSymmetric, targets: Sequence[float], tol: float | None = None, atol: float = 1e-6) -> dict:
    """Matched eigenvalues (closest to each target) and a min/max summary of the rest."""
    T = householder_tridiagonalize(B.to_dense())
    tol = _auto_tol(T, tol)
    N = T.N
    matched, used = [], set()
    for t in targets:
        below = sturm_count(T, float(t))
        candidates = [k for k in (below, below + 1) if 1 <= k <= N]
        vals = {k: float(eigenvalues_bisection(T, k, k, tol)[0]) for k in candidates}
        k_best = min(vals, key=lambda k: abs(vals[k] - t))
        used.add(k_best)
        matched.append({"target": float(t), "index": k_best, "computed": vals[k_best], "abs_error": abs(vals[k_best] - t)})
    free = [k for k in range(1, N + 1) if k not in used]
    lo = float(eigenvalues_bisection(T, free[0], free[0], tol)[0]) if free else None
    hi = float(eigenvalues_bisection(T, free[-1], free[-1], tol)[0]) if free else None
    return {
        "construction": B.provenance,
        "N": N,
        "bandwidth": B.bandwidth,
        "matched": matched,
        "unmatched": {"min": lo, "max": hi},
        "atol": atol,
        "passed": all(row["abs_error"] < atol for row in matched),
    }
