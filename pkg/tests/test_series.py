from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, strategies as st

from gevrey.series import (
    FormalSeries,
    GevreySeries,
    arith_profile,
    borel_normalize,
    divide_linear,
    gevrey_weight,
    laplace_denormalize,
    multiply_linear,
    padic_radius_estimate,
    series_arith,
)
from gevrey.weyl import DiffOp, apply_op

coef = st.fractions(min_value=-20, max_value=20, max_denominator=9)


def series_st(n=12):
    return st.lists(coef, min_size=n, max_size=n).map(FormalSeries)


def test_known_products():
    geo = FormalSeries([1] * 10)
    one_minus_z = FormalSeries.polynomial([1, -1], 9)
    assert (geo * one_minus_z) == FormalSeries.one(9)
    exp = FormalSeries(Fraction(1, factorial(n)) for n in range(10))
    assert exp.derivative() == exp.truncate(8)
    assert (exp * exp).coeffs == tuple(Fraction(2**n, factorial(n)) for n in range(10))


@given(series_st(), series_st())
def test_division_inverts_multiplication(a, b):
    if b[0] == 0:
        b = b + FormalSeries.one(b.order)
    assert (a * b) / b == a


@given(series_st())
def test_theta_and_integrate(a):
    assert a.theta() == FormalSeries(n * c for n, c in enumerate(a))
    assert a.integrate().derivative() == a


@given(series_st(), st.fractions(min_value=-3, max_value=3, max_denominator=3))
def test_translate_evaluate(a, xi):
    t = a.translate(xi)
    assert t[0] == a.evaluate(xi)


def test_series_arith_dispatch():
    a = FormalSeries([1, 2, 3])
    b = FormalSeries([1, 1, 1])
    assert series_arith("add", a, b) == FormalSeries([2, 3, 4])
    assert series_arith("mul", a, b) == FormalSeries([1, 3, 6])
    assert series_arith("theta", a) == FormalSeries([0, 2, 6])
    with pytest.raises(ValueError):
        series_arith("%", a, b)


def test_gevrey_weight():
    assert gevrey_weight(5, -1) == Fraction(1, 120)
    assert gevrey_weight(5, 2) == 120**2
    # s = 1/2: ([n/2]!)^1
    assert [gevrey_weight(n, Fraction(1, 2)) for n in range(6)] == [1, 1, 1, 1, 2, 2]


def test_borel_round_trip():
    raw = FormalSeries(Fraction(1, factorial(n)) for n in range(15))
    F = GevreySeries.from_raw(raw, -1)
    assert borel_normalize(F) == FormalSeries([1] * 15)
    assert laplace_denormalize(borel_normalize(F), -1).raw == raw
    with pytest.raises(ValueError):
        borel_normalize(GevreySeries.from_raw(raw, 0))


@pytest.mark.parametrize("s", [Fraction(-1), Fraction(1, 2), Fraction(2), Fraction(-2, 3)])
@given(g=series_st(14), xi=st.sampled_from([Fraction(1), Fraction(-2), Fraction(3, 5)]))
def test_divide_linear_matches_generic_division(s, g, xi):
    G = GevreySeries(s, g)
    F = multiply_linear(G, xi)
    back = divide_linear(F, xi)
    assert back.normalized == g
    generic = F.raw / FormalSeries.polynomial([-xi, 1], F.order)
    assert back.raw == generic


def test_divide_linear_rejects_zero():
    with pytest.raises(ValueError):
        divide_linear(GevreySeries(-1, FormalSeries([1, 2])), 0)


@given(series_st(20))
def test_laplace_dictionary(g):
    G = GevreySeries(-1, g)
    F = multiply_linear(G, 1)
    L = DiffOp({(2, 1): 1, (1, 0): 1, (0, 0): -1})
    lhs = apply_op(L, g)
    assert lhs == F.normalized.truncate(lhs.order)
    assert lhs.order == g.order


def test_arith_profile_verdicts():
    geo = FormalSeries([Fraction(3) ** n for n in range(60)])
    assert arith_profile(geo).verdict == "consistent with (G)"
    inv_fact = FormalSeries(Fraction(1, factorial(n)) for n in range(60))
    assert arith_profile(inv_fact).verdict == "not (G)"
    log_like = FormalSeries([0] + [Fraction(1, n) for n in range(1, 60)])
    assert arith_profile(log_like).den_bounded


def test_padic_radius_estimate():
    exp = FormalSeries(Fraction(1, factorial(n)) for n in range(80))
    est = padic_radius_estimate(exp, 2, cap=False)
    # the exact radius of exp is p^(-1/(p-1)); the estimate approaches -1 from above
    assert Fraction(-1) <= est < Fraction(-3, 4)
    with pytest.raises(ValueError):
        padic_radius_estimate(FormalSeries([1, 1]), 2)
