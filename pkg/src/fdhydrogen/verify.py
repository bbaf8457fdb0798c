"""Checks that the closed forms solve the discrete equation, its infinite-order
form, and converge to the continuum hydrogen problem.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .closed_form import (
    ClosedFormSolution,
    alpha_factors,
    as_rational,
    decay_rate,
    evaluate,
    grid_samples,
    solve,
)
from .errors import DomainError
from .exactfield import QuadNumber, quad_to_float
from .laguerre import continuum_reference_poly
from .poly import Poly

PolyQ = Poly

EXACT_IDENTITY = "exact_identity"
MATRIX_EXACT = "matrix_exact"
INFINITE_ORDER = "infinite_order"
LIMIT_ORDER = "limit_order"

RICHARDSON_BAND = (3.5, 4.5)


@dataclass(frozen=True)
class ResidualReport:
    n: int
    delta: Fraction | None
    kind: str
    passed: bool
    data: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "delta": None if self.delta is None else str(self.delta),
            "passed": self.passed,
            "payload": self.data,
        }


def residual_polynomial(sol: ClosedFormSolution, s: QuadNumber | None = None, lam: QuadNumber | None = None) -> Poly:
    """``G(z) = z [-(s+t)/2 p(z-delta) - (s-t)/2 p(z+delta) - lam p(z)] - delta^2 p(z)``.

    ``G`` vanishes identically iff ``p(z) exp(-beta z)`` solves the discrete
    equation, because ``exp(+-beta delta) = s +- t`` cancels the exponential.
    ``s`` and ``lam`` may be overridden to probe perturbed solutions.
    """
    if s is None:
        s = sol.s
    if lam is None:
        lam = -s
    t = sol.sinh_step
    p = sol.poly
    half = Fraction(1, 2)
    bracket = (
        p.shift(-sol.delta) * ((s + t) * -half)
        + p.shift(sol.delta) * ((s - t) * -half)
        + p * (-lam)
    )
    return bracket.mul_z() - p * (sol.delta * sol.delta)


def exact_residual_identity(sol: ClosedFormSolution, s: QuadNumber | None = None, lam: QuadNumber | None = None) -> ResidualReport:
    g = residual_polynomial(sol, s=s, lam=lam)
    nonzero = {str(k): str(c) for k, c in enumerate(g.coeffs) if not c == 0}
    return ResidualReport(sol.n, sol.delta, EXACT_IDENTITY, g.is_zero(), {"nonzero_coefficients": nonzero})


def matrix_residual_exact(sol: ClosedFormSolution, j_max: int, samples: Sequence[QuadNumber] | None = None) -> ResidualReport:
    """Row-by-row check ``(V u)_j = lam u_j`` for ``j = 1..j_max-1`` with ``u_0 = 0``."""
    if j_max < 2:
        raise DomainError("j_max must be >= 2")
    u = list(samples) if samples is not None else grid_samples(sol, j_max)
    if len(u) < j_max:
        raise DomainError("need j_max samples")
    zero = sol.s.rational(0)
    half = Fraction(1, 2)
    failed = []
    for j in range(1, j_max):
        left = u[j - 2] if j >= 2 else zero
        lhs = -(left + u[j]) * half - u[j - 1] * (sol.delta / j)
        if not lhs - sol.lam * u[j - 1] == 0:
            failed.append(j)
    return ResidualReport(
        sol.n, sol.delta, MATRIX_EXACT, not failed, {"rows_checked": j_max - 1, "failed_rows": failed}
    )


def _series_terms(sol: ClosedFormSolution, M: int, z: float, beta: float) -> list[float]:
    """``delta^(2m)/(2m)! u^(2m)(z)`` for ``m = 0..M+1`` from the Leibniz rule."""
    delta = float(sol.delta)
    x = beta * delta
    p = Poly([0.0] + [float(c) for c in sol.coeffs])
    # (-1)^i p^(i)(z) delta^i / i!
    taylor = []
    d = p
    for i in range(len(p)):
        taylor.append((-1) ** i * d(z) * delta**i / math.factorial(i))
        d = d.derivative()
    decay = math.exp(-beta * z)
    terms = []
    for m in range(M + 2):
        acc = 0.0
        for i, c in enumerate(taylor):
            if i > 2 * m:
                break
            k = 2 * m - i
            acc += c * x**k / math.factorial(k)
        terms.append(acc * decay)
    return terms


def infinite_order_residual(
    sol: ClosedFormSolution, M: int, z_samples: Sequence[float], lam: float | None = None
) -> ResidualReport:
    """Truncated residual ``-sum_{m<=M} delta^(2m)/(2m)! u^(2m) - delta^2 u/z - lam u``.

    Passes when the max residual is below twice the first omitted term plus a
    rounding floor of ``64 eps`` times the magnitude of the summed terms.
    """
    if M < 1:
        raise DomainError("M must be >= 1")
    if any(z == 0 for z in z_samples):
        raise DomainError("z = 0 is a pole of the potential term")
    beta = decay_rate(sol.n, sol.delta)
    lam_f = float(sol.lam) if lam is None else lam
    d2 = float(sol.delta) ** 2
    history = [0.0] * (M + 1)
    worst = tail = scale = 0.0
    for z in z_samples:
        terms = _series_terms(sol, M, z, beta)
        u = terms[0]
        base = -d2 * u / z - lam_f * u
        partial = base
        magnitude = abs(d2 * u / z) + abs(lam_f * u)
        for m in range(M + 1):
            partial -= terms[m]
            magnitude += abs(terms[m])
            history[m] = max(history[m], abs(partial))
        worst = max(worst, abs(partial))
        tail = max(tail, abs(terms[M + 1]))
        scale = max(scale, magnitude)
    floor = 64 * 2.0**-52 * scale
    return ResidualReport(
        sol.n,
        sol.delta,
        INFINITE_ORDER,
        worst <= 2 * tail + floor,
        {"M": M, "max_residual": worst, "next_term": tail, "rounding_floor": floor, "history": history[1:]},
    )


def _halving_ratio(e_big: float, e_small: float, d_big: Fraction, d_small: Fraction) -> float:
    """Error ratio rescaled to a halving step: ``(e1/e2)^(ln 2 / ln(d1/d2))``."""
    return (e_big / e_small) ** (math.log(2) / math.log(float(d_big / d_small)))


def _in_band(r) -> bool:
    return RICHARDSON_BAND[0] <= r <= RICHARDSON_BAND[1]


def continuum_limit_order(n: int, deltas: Sequence, z_samples: Sequence[float] = ()) -> ResidualReport:
    """Second-order convergence of ``(lam+1)/delta^2 -> -1/(2n^2)`` and ``alpha_k -> 1``.

    ``z_samples`` adds an informational function-level deviation
    ``max_z |u_delta(z) - P_n(z) exp(-z/n)|``; it does not gate the result.
    An ``alpha`` deviation that is exactly zero for every delta (n = 1) has no
    rate to measure and counts as converged.
    """
    ds = [as_rational(d) for d in deltas]
    if len(ds) < 3:
        raise DomainError("need at least three deltas")
    if any(d <= 0 for d in ds) or any(b >= a for a, b in zip(ds, ds[1:])):
        raise DomainError("deltas must be positive and strictly decreasing")
    target = Fraction(-1, 2 * n * n)
    ref = continuum_reference_poly(n)
    e_err, a_err, f_err = [], [], []
    for d in ds:
        sol = solve(n, d)
        e_err.append(abs(quad_to_float((sol.lam + 1) / (d * d) - target)))
        a_err.append(max(abs(quad_to_float(a - 1)) for a in alpha_factors(sol)))
        if z_samples:
            f_err.append(
                max(abs(evaluate(sol, z) - float(ref(Fraction(z))) * math.exp(-z / n)) for z in z_samples)
            )
    pairs = list(zip(ds, ds[1:]))
    e_ratio = [_halving_ratio(e_err[i], e_err[i + 1], *pairs[i]) for i in range(len(pairs))]
    if all(a == 0 for a in a_err):
        a_ratio = [None] * len(pairs)
    else:
        a_ratio = [_halving_ratio(a_err[i], a_err[i + 1], *pairs[i]) for i in range(len(pairs))]
    f_ratio = [_halving_ratio(f_err[i], f_err[i + 1], *pairs[i]) for i in range(len(pairs))] if f_err else []
    passed = all(_in_band(r) for r in e_ratio) and all(r is None or _in_band(r) for r in a_ratio)
    return ResidualReport(
        n,
        None,
        LIMIT_ORDER,
        passed,
        {
            "deltas": [str(d) for d in ds],
            "energy_error": e_err,
            "energy_ratio": e_ratio,
            "alpha_error": a_err,
            "alpha_ratio": a_ratio,
            "function_error": f_err,
            "function_ratio": f_ratio,
        },
    )


def sweep(ns: Sequence[int], deltas: Sequence, j_max: int = 40, workers: int = 1) -> list[tuple[ResidualReport, ResidualReport]]:
    """Exact identity and matrix checks over an ``(n, delta)`` grid, in input order."""

    def one(args):
        n, d = args
        sol = solve(n, d)
        return exact_residual_identity(sol), matrix_residual_exact(sol, j_max)

    grid = [(n, d) for n in ns for d in deltas]
    if workers <= 1:
        return [one(g) for g in grid]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, grid))
