"""Truncations of the infinite Jacobi matrix ``V`` and a small symmetric eigensolver.

``V`` has diagonal ``-delta/j`` and off-diagonals ``-1/2`` for ``j = 1, 2, ...``;
the boundary condition ``u_0 = 0`` is built in by starting at ``j = 1``.
Truncating at ``N`` imposes ``u_{N+1} = 0``, an exponentially small
perturbation of the bound states: the state ``n`` decays like ``r^j`` with
``r = sqrt(1 + delta^2/n^2) - delta/n``, see ``truncation_size``.

Eigenvalues come from Sturm-count bisection, so the ``k``-th computed value is
certified to be the ``k``-th smallest eigenvalue of the truncation.
"""
from __future__ import annotations

import csv
import io
import math
import sys
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .closed_form import as_rational, grid_samples, solve
from .errors import ConvergenceError, DomainError

_EPS = np.finfo(float).eps
# smallest pivot magnitude; a zero pivot is replaced by +_PIVMIN
_PIVMIN = np.finfo(float).tiny / _EPS


@dataclass(frozen=True)
class TridiagonalMatrix:
    diag: np.ndarray
    offdiag: np.ndarray
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        diag = np.asarray(self.diag, dtype=float)
        off = np.asarray(self.offdiag, dtype=float)
        if off.shape[0] != max(diag.shape[0] - 1, 0):
            raise ValueError("offdiag must have length N - 1")
        diag.setflags(write=False)
        off.setflags(write=False)
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "offdiag", off)

    @property
    def N(self) -> int:
        return self.diag.shape[0]

    def gershgorin(self) -> tuple[float, float]:
        radius = np.zeros(self.N)
        radius[:-1] += np.abs(self.offdiag)
        radius[1:] += np.abs(self.offdiag)
        return float(np.min(self.diag - radius)), float(np.max(self.diag + radius))

    def norm(self) -> float:
        lo, hi = self.gershgorin()
        return max(abs(lo), abs(hi))

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.diag * v
        out[:-1] += self.offdiag * v[1:]
        out[1:] += self.offdiag * v[:-1]
        return out

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)


def build_V(N: int, delta) -> TridiagonalMatrix:
    if N < 1:
        raise DomainError("N must be >= 1")
    delta = as_rational(delta)
    if delta <= 0:
        raise DomainError("delta must be positive")
    diag = [float(-delta / j) for j in range(1, N + 1)]
    return TridiagonalMatrix(np.array(diag), np.full(N - 1, -0.5), {"delta": str(delta), "N": N})


def truncation_size(n: int, delta, tol: float) -> int:
    """Smallest ``N`` with ``r^(2N) < tol`` for the state ``n``."""
    sol = solve(n, delta)
    r = float(sol.r)
    return max(1, math.ceil(math.log(tol) / (2 * math.log(r))))


def sturm_count(T: TridiagonalMatrix, x: float) -> int:
    """Number of eigenvalues of ``T`` strictly below ``x`` (negative LDL^T pivots)."""
    if math.isnan(x):
        raise DomainError("shift is NaN")
    count = 0
    q = 1.0
    e2 = T.offdiag * T.offdiag
    diag = T.diag.tolist()
    e2 = [0.0] + e2.tolist()
    for a, b in zip(diag, e2):
        q = (a - x) - (b / q if b else 0.0)
        if q == 0.0:
            q = _PIVMIN
        if q < 0.0:
            count += 1
    return count


def eigenvalues_bisection(T: TridiagonalMatrix, k_lo: int, k_hi: int, tol: float) -> np.ndarray:
    """The ``k``-th smallest eigenvalues for ``k_lo <= k <= k_hi`` (1-based), each to width ``tol``."""
    if not 1 <= k_lo <= k_hi <= T.N:
        raise DomainError(f"need 1 <= k_lo <= k_hi <= {T.N}")
    if tol <= 0:
        raise DomainError("tol must be positive")
    lo0, hi0 = T.gershgorin()
    floor = 4 * _EPS * max(abs(lo0), abs(hi0), _PIVMIN)
    if tol < floor:
        warnings.warn(f"tol {tol:g} below 4*eps*|T| = {floor:g}; clamped", stacklevel=2)
        tol = floor
    out = []
    for k in range(k_lo, k_hi + 1):
        lo, hi = lo0, hi0
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if sturm_count(T, mid) >= k:
                hi = mid
            else:
                lo = mid
        out.append(0.5 * (lo + hi))
    return np.array(out)


def _tridiagonal_solve(T: TridiagonalMatrix, mu: float, rhs: np.ndarray) -> np.ndarray:
    """Solve ``(T - mu I) x = rhs`` by LU with partial pivoting (row interchanges)."""
    n = T.N
    # rows of U carry up to two superdiagonals after pivoting
    d = (T.diag - mu).tolist()
    e = T.offdiag.tolist()
    u0 = d[:]
    u1 = e + [0.0]
    u2 = [0.0] * n
    lower = [0.0] * n
    swap = [False] * n
    b = rhs.astype(float).tolist()
    scale = max(T.norm(), _PIVMIN)
    for i in range(n - 1):
        sub = e[i]
        if abs(u0[i]) >= abs(sub):
            if u0[i] == 0.0:
                u0[i] = _EPS * scale
            m = sub / u0[i]
            lower[i] = m
            u0[i + 1] -= m * u1[i]
            if i + 1 < n - 1:
                u1[i + 1] -= m * u2[i]
            b[i + 1] -= m * b[i]
        else:
            swap[i] = True
            m = u0[i] / sub
            lower[i] = m
            # row i <- row i+1, row i+1 <- old row i - m * row i+1
            r0, r1, r2 = sub, u0[i + 1], (e[i + 1] if i + 1 < n - 1 else 0.0)
            o0, o1, o2 = u0[i], u1[i], u2[i]
            u0[i], u1[i], u2[i] = r0, r1, r2
            u0[i + 1] = o1 - m * r1
            if i + 1 < n - 1:
                u1[i + 1] = o2 - m * r2
            b[i], b[i + 1] = b[i + 1], b[i] - m * b[i + 1]
    if u0[n - 1] == 0.0:
        u0[n - 1] = _EPS * scale
    x = [0.0] * n
    for i in range(n - 1, -1, -1):
        acc = b[i]
        if i + 1 < n:
            acc -= u1[i] * x[i + 1]
        if i + 2 < n:
            acc -= u2[i] * x[i + 2]
        x[i] = acc / u0[i]
    return np.array(x)


def _fix_sign(v: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(v)
    if nz.size and v[nz[0]] < 0:
        return -v
    return v


def eigenvector_inverse_iteration(T: TridiagonalMatrix, mu: float, max_iter: int = 20, tol: float = 1e-12) -> np.ndarray:
    """Unit eigenvector for the eigenvalue nearest ``mu``; first nonzero entry positive.

    Stops once ``||T v - rho v|| <= 10 tol ||T||`` with ``rho`` the Rayleigh quotient.
    """
    n = T.N
    if n == 1:
        return np.array([1.0])
    norm = T.norm()
    # deterministic, non-symmetric start so no eigenvector is orthogonal to it
    v = 1.0 + np.arange(n) / n
    v /= np.linalg.norm(v)
    residual = math.inf
    for _ in range(max_iter):
        w = _tridiagonal_solve(T, mu, v)
        v = w / np.linalg.norm(w)
        tv = T.matvec(v)
        rho = float(v @ tv)
        residual = float(np.linalg.norm(tv - rho * v))
        if residual <= 10 * tol * norm:
            return _fix_sign(v)
    raise ConvergenceError(f"inverse iteration stalled at residual {residual:.3e}", residual)


def householder_tridiagonalize(A) -> TridiagonalMatrix:
    """Orthogonal reduction ``Q^T A Q`` of a dense symmetric matrix to tridiagonal form."""
    A = np.array(A, dtype=float, copy=True)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DomainError("matrix must be square")
    n = A.shape[0]
    scale = max(np.max(np.abs(A)), _PIVMIN) if n else 1.0
    if n and np.max(np.abs(A - A.T)) > 1e-12 * scale:
        raise DomainError("matrix is not symmetric")
    A = 0.5 * (A + A.T)
    for k in range(n - 2):
        x = A[k + 1 :, k]
        alpha = np.linalg.norm(x)
        if alpha == 0.0 or np.all(x[1:] == 0.0):
            continue
        if x[0] > 0:
            alpha = -alpha
        v = x.copy()
        v[0] -= alpha
        v /= np.linalg.norm(v)
        sub = A[k + 1 :, k + 1 :]
        p = 2.0 * (sub @ v)
        w = p - (v @ p) * v
        sub -= np.outer(v, w) + np.outer(w, v)
        A[k + 1 :, k] = 0.0
        A[k, k + 1 :] = 0.0
        A[k + 1, k] = A[k, k + 1] = alpha
    return TridiagonalMatrix(np.diag(A).copy(), np.diag(A, 1).copy(), {"source": "householder", "N": n})


@dataclass
class SpectrumReport:
    N: int
    delta: Fraction
    eigenvalues: np.ndarray
    exact_targets: list
    abs_errors: np.ndarray
    eigenvector_errors: np.ndarray | None = None
    atol: float = 1e-8

    @property
    def passed(self) -> bool:
        ok = bool(np.all(self.abs_errors < self.atol))
        if self.eigenvector_errors is not None:
            ok = ok and bool(np.all(self.eigenvector_errors < self.atol))
        return ok

    def to_json(self) -> dict:
        rows = []
        for k, (val, exact, err) in enumerate(zip(self.eigenvalues, self.exact_targets, self.abs_errors), start=1):
            row = {"k": k, "computed": float(val), "exact": str(exact), "exact_float": float(exact), "abs_error": float(err)}
            if self.eigenvector_errors is not None:
                row["eigenvector_error"] = float(self.eigenvector_errors[k - 1])
            rows.append(row)
        return {"N": self.N, "delta": str(self.delta), "atol": self.atol, "passed": self.passed, "states": rows}

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["k", "computed", "exact", "abs_error"])
        for k, (val, exact, err) in enumerate(zip(self.eigenvalues, self.exact_targets, self.abs_errors), start=1):
            writer.writerow([k, f"{float(val):.17g}", f"{float(exact):.17g}", f"{float(err):.17g}"])
        return buf.getvalue()


def exact_eigenvector(n: int, delta, N: int) -> np.ndarray:
    """Exact grid samples of state ``n`` on ``j = 1..N``, normalised with the solver's sign convention."""
    u = np.array([float(x) for x in grid_samples(solve(n, delta), N)])
    return _fix_sign(u / np.linalg.norm(u))


def spectrum_report(N: int, delta, states: int, tol: float = 1e-12, eigenvectors: bool = True, atol: float = 1e-8) -> SpectrumReport:
    """Lowest ``states`` eigenvalues of the ``N``-truncation against ``-sqrt(1 + delta^2/n^2)``."""
    delta = as_rational(delta)
    T = build_V(N, delta)
    vals = eigenvalues_bisection(T, 1, states, tol)
    exact = [solve(n, delta).lam for n in range(1, states + 1)]
    errs = np.abs(vals - np.array([float(x) for x in exact]))
    vec_errs = None
    if eigenvectors:
        vec_errs = np.array(
            [
                np.max(np.abs(eigenvector_inverse_iteration(T, mu, tol=tol) - exact_eigenvector(n, delta, N)))
                for n, mu in enumerate(vals, start=1)
            ]
        )
    return SpectrumReport(N, delta, vals, exact, errs, vec_errs, atol)


if __name__ == "__main__":
    N = int(sys.argv[1]) if len(sys.argv) > 1 else 400
    rep = spectrum_report(N, 1, 3)
    print(rep.to_csv(), end="")
