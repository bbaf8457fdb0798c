from fractions import Fraction

import numpy as np
import pytest

from fdhydrogen.errors import ConditioningError, DomainError
from fdhydrogen.isospectral import (
    BandedSymmetric,
    banded_spectrum,
    build_W,
    matrix_power,
    newton_coefficients,
    newton_eval,
    prescribe_spectrum,
    spectral_report,
)
from fdhydrogen.spectra import build_V, eigenvalues_bisection, eigenvector_inverse_iteration, householder_tridiagonalize
from oracles import jacobi_eigenvalues


@pytest.fixture(scope="module")
def W400():
    return build_W(400, 1)


@pytest.fixture(scope="module")
def V400_states():
    T = build_V(400, 1)
    vals = eigenvalues_bisection(T, 1, 3, 1e-13)
    return vals, [eigenvector_inverse_iteration(T, mu) for mu in vals]


def test_W_2x2():
    W = build_W(2, 1)
    assert W.exact[0] == (Fraction(1, 4), Fraction(-1, 2))
    assert W.exact[1] == (Fraction(3, 4),)
    assert np.array_equal(W.to_dense(), [[0.25, 0.75], [0.75, -0.5]])


def test_W_matches_dense_square():
    for delta in ("1", "1/3", "5/2"):
        V = build_V(12, delta).to_dense()
        d = float(Fraction(delta))
        W = build_W(12, delta)
        assert W.bandwidth == 2
        assert np.allclose(W.to_dense(), (V @ V - np.eye(12)) / d**2, atol=1e-13)


def test_W_top_eigenvalues(W400):
    vals = banded_spectrum(W400, 398, 400)
    assert np.max(np.abs(vals - [1 / 9, 1 / 4, 1])) < 1e-8


def test_W_spectrum_against_jacobi():
    W = build_W(50, 1)
    ours = banded_spectrum(W, 1, 50)
    assert np.max(np.abs(ours - jacobi_eigenvalues(W.to_dense()))) < 1e-10


def test_matrix_power_identity_and_bandwidth(W400):
    assert matrix_power(W400, 1) is W400
    W3 = matrix_power(build_W(20, 1), 3)
    assert W3.bandwidth == 6
    assert np.allclose(W3.to_dense(), np.linalg.matrix_power(build_W(20, 1).to_dense(), 3), atol=1e-12)
    with pytest.raises(DomainError):
        matrix_power(build_W(4, 1), 2)


def test_eigenvector_transfer(W400, V400_states):
    W2 = matrix_power(W400, 2)
    vals, vecs = V400_states
    for n, (lam, v) in enumerate(zip(vals, vecs), start=1):
        for B, k in ((W400, 1), (W2, 2)):
            w = B.matvec(v)
            rho = v @ w
            assert abs(rho - n ** (-2 * k)) < 1e-8
            assert np.linalg.norm(w - rho * v) < 1e-7


def test_W_squared_bound_states_matched(W400):
    rep = spectral_report(matrix_power(W400, 2), [1, 1 / 16, 1 / 81], atol=1e-8)
    assert rep["passed"]


def test_W_squared_largest_are_band_at_delta_one(W400):
    # the band image [0, 1] covers 1/16 and 1/81; only delta > 3 separates them
    top = banded_spectrum(matrix_power(W400, 2), 398, 400)
    assert np.all(top > 0.9)
    top4 = banded_spectrum(matrix_power(build_W(400, 4), 2), 398, 400)
    assert np.max(np.abs(top4 - [1 / 81, 1 / 16, 1])) < 1e-8


def test_simple_eigenvalues(W400):
    vals = banded_spectrum(W400, 396, 400)
    gaps = np.diff(vals)
    assert np.min(gaps) > 10 * 4 * np.finfo(float).eps * 2


def test_newton_interpolation_exact():
    nodes = [Fraction(1, n * n) for n in range(1, 5)]
    values = [Fraction(3), Fraction(-1), Fraction(2, 7), Fraction(5)]
    coeffs = newton_coefficients(nodes, values)
    assert [newton_eval(nodes, coeffs, x) for x in nodes] == values


def test_prescribe_identity_targets(W400):
    P = prescribe_spectrum([1, 1 / 4, 1 / 9], 400, 1)
    for a, b in zip(P.bands, W400.bands):
        assert np.max(np.abs(a - b)) < 1e-15
    assert spectral_report(P, [1, 1 / 4, 1 / 9], atol=1e-8)["passed"]


def test_prescribe_targets():
    P = prescribe_spectrum([1, 1 / 2, 1 / 3], 400, 1)
    top = banded_spectrum(P, 398, 400)
    assert np.max(np.abs(top - [1 / 3, 1 / 2, 1])) < 1e-6
    rep = spectral_report(P, [1, 1 / 2, 1 / 3])
    assert rep["passed"]
    assert rep["unmatched"]["max"] < 1 / 3


def test_prescribe_constant():
    P = prescribe_spectrum([5, 5, 5], 50, 1)
    assert P.bandwidth == 0
    assert np.all(P.bands[0] == 5)


def test_prescribe_eight_targets_within_budget():
    targets = [float(k) for k in range(1, 9)]
    rep = spectral_report(prescribe_spectrum(targets, 400, 1), targets)
    assert rep["passed"]


def test_prescribe_cap():
    with pytest.raises(ConditioningError):
        prescribe_spectrum(list(range(9)), 400, 1)


def test_banded_1x1():
    B = BandedSymmetric(1, 0, (np.array([3.5]),))
    assert banded_spectrum(B, 1, 1).tolist() == [3.5]


def test_inverse_spectral_map(W400):
    # delta^2 W + I = V^2: its smallest eigenvalues are squares of V's smallest |eigenvalues|
    tri = householder_tridiagonalize(W400.to_dense() + np.eye(400))
    top = eigenvalues_bisection(tri, 400, 400, 1e-13)[0]
    assert top == pytest.approx(2.0, abs=1e-10)  # (-sqrt2)^2
