import math
from fractions import Fraction

import pytest

from pruwalk.errors import NonDivisibleError, ValuationError
from pruwalk.kernel import (KernelContext, capital_lambda, full_solution, h_i_unsimplified,
                            h_series, i_series, kernel_fraction, kernel_pieces, lambda_series,
                            r_u0_series, verify_functional_equations, w_series)
from pruwalk.series import Poly, Series
from pruwalk.walks import WalkFamily, count_walks_dp, enumerate_walks

a, u, v = Poly.symbol("a"), Poly.symbol("u"), Poly.symbol("v")


@pytest.fixture(scope="module")
def ctx12():
    return KernelContext(12)


@pytest.fixture(scope="module")
def sol12(ctx12):
    return full_solution(ctx12)


# -- lambda and Lambda ------------------------------------------------------------

def test_lambda_leading_terms(ctx12):
    lam = lambda_series(ctx12)
    assert lam.valuation == 1
    assert (lam[1], lam[2], lam[3]) == (Poly(1), v, v ** 2)


def test_lambda_is_kernel_root(ctx12):
    num, _ = kernel_fraction(ctx12, "L", lambda_series(ctx12), None)
    assert num.is_zero()


def test_lambda_at_one_is_capital_lambda(ctx12):
    assert ctx12.lam(1) == capital_lambda(ctx12)


def test_capital_lambda_leading_terms(ctx12):
    lm = capital_lambda(ctx12)
    assert (lm[0], lm[1], lm[2]) == (Poly(0), Poly(1), Poly(1))


def test_capital_lambda_numeric():
    ctx = KernelContext(60)
    z = 0.2
    value = sum(float(c) * z ** k for k, c in enumerate(capital_lambda(ctx).numbers()))
    # smaller root of z x^2 - (1 - z + z^2 + z^3) x + z = 0
    b = 1 - z + z * z + z ** 3
    root = (b - math.sqrt(b * b - 4 * z * z)) / (2 * z)
    assert value == pytest.approx(root, rel=1e-13)


def test_J_at_one():
    ctx = KernelContext(20, a=1)
    assert ctx.J() == 1 - ctx.z * capital_lambda(ctx)


# -- kernel pieces ------------------------------------------------------------------

def test_H_leading_behaviour(ctx12):
    H = kernel_pieces(ctx12, "H")
    assert H[0] == 1 and H[1] == a


def test_I_leading_behaviour(ctx12):
    I = kernel_pieces(ctx12, "I")
    assert I.valuation == 4
    assert I[4] == 1 - a - u + u * a


def test_M_symmetric(ctx12):
    # with u and v both symbolic M is a ratio of series, so compare cross products
    n1, d1 = kernel_fraction(ctx12, "M", "u", "v")
    n2, d2 = kernel_fraction(ctx12, "M", "v", "u")
    assert n1 * d2 == n2 * d1
    assert d1 == d2


def test_M_vanishes_on_kernel_root(ctx12):
    num, _ = kernel_fraction(ctx12, "M", "vL", "v")
    assert num.is_zero()


def test_invalid_specialisation_fails_loudly(ctx12):
    with pytest.raises((NonDivisibleError, ValuationError)):
        kernel_pieces(ctx12, "L", Series.z(ctx12.work), None)


def test_unsimplified_H_and_I_agree(ctx12):
    (hn, hd), (i_n, i_d) = h_i_unsimplified(ctx12)
    N = ctx12.order
    assert (h_series(ctx12) * hd).truncate(N) == hn.truncate(N)
    assert (i_series(ctx12) * i_d).truncate(N) == i_n.truncate(N)


def test_recurrence_for_R_u0():
    ctx = KernelContext(16)
    lhs = r_u0_series(ctx)
    uL2 = ctx.value("uL", "u") * capital_lambda(ctx)
    rhs = h_series(ctx) + i_series(ctx) * r_u0_series(ctx, uL2)
    assert lhs.truncate(16) == rhs.truncate(16)


# -- R(u, 0) ---------------------------------------------------------------------------

def test_R_u0_low_orders(ctx12):
    r = r_u0_series(ctx12)
    assert r[0] == 1 and r[1] == a


def test_R_u0_matches_enumeration():
    ctx = KernelContext(12)
    r = r_u0_series(ctx, 1).truncate(12)
    dp = count_walks_dp(12)
    for n in range(13):
        want = sum((p for k, p in dp.refined[n].items() if k[0] == "R" and k[2] == 0), Poly())
        assert r[n] == want


# -- solution -------------------------------------------------------------------------

def test_W_low_orders():
    W = w_series(4)
    assert W[0] == 1 and W[1] == 1 + 2 * a


@pytest.mark.parametrize("v_value,endpoint", [(1, "tail"), (0, "loop")])
def test_W_matches_enumeration(v_value, endpoint):
    W = w_series(10, v=v_value)
    t = enumerate_walks(WalkFamily("two_sided", endpoint), 10)
    assert list(W.coeffs) == t.totals


def test_W_nonnegative_integer_coefficients():
    W = w_series(30)
    for p in W.coeffs:
        assert all(isinstance(c, int) and c >= 0 for c in p.terms().values())


def test_T0_equals_R0(sol12):
    assert sol12.T.substitute("u", 0) == sol12.R.substitute("u", 0)


def test_R_equation_at_v_zero(sol12, ctx12):
    z = Series.z(12)
    R0 = sol12.R.substitute("v", 0)
    Rzu = sol12.R.substitute("v", z * u)
    assert (1 + z - z * a) * R0 == 1 + z * Rzu


def test_solution_reports_short_order():
    ctx = KernelContext(12, pad=0)
    with pytest.raises(ValuationError):
        full_solution(ctx)


def test_numeric_fugacity_matches_symbolic():
    sym = w_series(15)
    num = w_series(15, a=Fraction(5, 2))
    assert [p.evaluate(a=Fraction(5, 2)) for p in sym.coeffs] == [p.constant() for p in num.coeffs]


# -- functional equations ---------------------------------------------------------------

def test_two_sided_residuals_vanish():
    reports = verify_functional_equations("two_sided", 12)
    assert [r.passed for r in reports] == [True, True]
    assert reports[0].describe().endswith("residual zero through z^12")


def test_two_sided_residuals_from_enumeration():
    reports = verify_functional_equations("two_sided", 9, source="enumeration")
    assert all(r.passed for r in reports)


def test_three_sided_residuals_vanish():
    reports = verify_functional_equations("three_sided", 8)
    assert len(reports) == 2 and all(r.passed for r in reports)


@pytest.mark.parametrize("which,k", [("T", 5), ("R", 7), ("T", 10)])
def test_fault_injection_two_sided(which, k):
    reports = verify_functional_equations("two_sided", 12, perturb=(which, k))
    target = {"T": "T-equation", "R": "R-equation"}[which]
    hit = [r for r in reports if r.equation == target][0]
    assert hit.first_failing_order == k
    assert min(r.first_failing_order for r in reports if not r.passed) == k


def test_fault_injection_three_sided():
    reports = verify_functional_equations("three_sided", 8, perturb=("R", 6))
    assert min(r.first_failing_order for r in reports if not r.passed) == 6


def test_report_json():
    rep = verify_functional_equations("two_sided", 6, perturb=("T", 3))[0]
    data = rep.to_json()
    assert data["passed"] is False and data["first_failing_order"] == 3
