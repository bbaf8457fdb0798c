from fractions import Fraction

import pytest

from fdhydrogen.closed_form import evaluate, grid_samples, solve
from fdhydrogen.errors import DomainError
from fdhydrogen.exactfield import QuadNumber, quad_to_float
from fdhydrogen.verify import (
    continuum_limit_order,
    exact_residual_identity,
    infinite_order_residual,
    matrix_residual_exact,
    residual_polynomial,
    sweep,
)

DELTAS = [Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(3)]


def test_identity_small_cases():
    assert exact_residual_identity(solve(1, 1)).passed
    g = residual_polynomial(solve(2, 1))
    assert g.is_zero()


def test_wrong_eigenvalue_breaks_identity():
    sol = solve(2, 1)
    # lambda = -s replaced by -1
    rep = exact_residual_identity(sol, lam=QuadNumber(-1, 0, 5))
    assert not rep.passed
    assert "2" in rep.data["nonzero_coefficients"]
    # s replaced by 1 everywhere
    assert not exact_residual_identity(sol, s=QuadNumber(1, 0, 5)).passed


def test_identity_holds_beyond_convergence_radius():
    for n in (1, 2):
        assert exact_residual_identity(solve(n, 3)).passed


@pytest.mark.parametrize("n", [1, 3])
def test_matrix_residual(n):
    assert matrix_residual_exact(solve(n, 1), 30).passed


def test_matrix_residual_locality():
    sol = solve(3, 1)
    u = grid_samples(sol, 30)
    u[0] = u[0] + 1
    rep = matrix_residual_exact(sol, 30, samples=u)
    assert not rep.passed
    assert rep.data["failed_rows"] == [1, 2]


def test_sweep_is_deterministic_under_threads():
    serial = sweep([1, 2, 5], DELTAS, j_max=20)
    threaded = sweep([1, 2, 5], DELTAS, j_max=20, workers=4)
    assert [(a.to_json(), b.to_json()) for a, b in serial] == [(a.to_json(), b.to_json()) for a, b in threaded]
    assert all(a.passed and b.passed for a, b in serial)


def test_infinite_order_small_residual():
    rep = infinite_order_residual(solve(2, Fraction(1, 2)), 25, [0.5, 1, 2, 5])
    assert rep.passed
    assert rep.data["max_residual"] < 1e-12


def test_infinite_order_decays_with_order():
    sol = solve(1, 1)
    z = [0.5, 1, 2, 5]
    r1 = infinite_order_residual(sol, 1, z).data["max_residual"]
    r5 = infinite_order_residual(sol, 5, z).data["max_residual"]
    assert r1 / r5 > 1e3


def test_infinite_order_history_geometric_until_floor():
    rep = infinite_order_residual(solve(3, 1), 25, [0.5, 1, 2, 5])
    hist = rep.data["history"]
    floor = rep.data["rounding_floor"]
    for a, b in zip(hist, hist[1:]):
        if a > 10 * floor:
            assert b < a / 2


def test_infinite_order_wrong_eigenvalue_plateaus():
    sol = solve(2, Fraction(1, 2))
    z = [0.5, 1, 2, 5]
    rep = infinite_order_residual(sol, 25, z, lam=float(sol.lam) + 1e-3)
    assert not rep.passed
    expected = max(1e-3 * abs(evaluate(sol, x)) for x in z)
    assert rep.data["max_residual"] == pytest.approx(expected, rel=1e-6)


def test_infinite_order_rejects_zero():
    with pytest.raises(DomainError):
        infinite_order_residual(solve(1, 1), 5, [0.0, 1.0])


def test_limit_n1_taylor():
    # (1 - sqrt(1+x))/x = -1/2 + x/8 - x^2/16 + ..., x = delta^2
    sol = solve(1, Fraction(1, 1000))
    value = quad_to_float((sol.lam + 1) / Fraction(1, 10**6))
    x = 1e-6
    assert value == pytest.approx(-0.5 + x / 8 - x * x / 16, abs=1e-18)


@pytest.mark.parametrize("n", range(1, 7))
def test_limit_order_second_order(n):
    rep = continuum_limit_order(n, ["1/10", "1/20", "1/40"], [0.5, 1.0, 2.0])
    assert rep.passed, rep.data


def test_limit_alpha_tends_to_one():
    rep = continuum_limit_order(4, ["1/100", "1/200", "1/400"])
    assert max(rep.data["alpha_error"]) < 1e-3


def test_limit_requires_decreasing():
    with pytest.raises(DomainError):
        continuum_limit_order(2, ["1/10", "1/5", "1/40"])
    with pytest.raises(DomainError):
        continuum_limit_order(2, ["1/10", "1/20"])


def test_report_json_shape():
    js = exact_residual_identity(solve(2, Fraction(3, 2))).to_json()
    assert set(js) == {"kind", "n", "delta", "passed", "payload"}
    assert js["delta"] == "3/2"
