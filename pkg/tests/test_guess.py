import random
from fractions import Fraction
from math import comb, factorial

import pytest

from gevrey.guess import (
    GuessConfig,
    InsufficientCoefficients,
    ansatz_monomials,
    expand_rational,
    guess_inhomogeneous,
    guess_operator,
    hermite_pade,
    homogenize,
    rational_reconstruct,
    residual_order,
)
from gevrey.pfrac import PartialFraction, PolePart
from gevrey.poly import Poly, RationalFunction
from gevrey.series import FormalSeries
from gevrey.weyl import DiffOp, apply_op

z, D = DiffOp.z(), DiffOp.D()


def test_guess_exponential():
    e = FormalSeries(Fraction(1, factorial(n)) for n in range(30))
    assert guess_operator(e, GuessConfig(1, 0, 29)) == D - 1


def test_guess_geometric():
    A = guess_operator(FormalSeries([1] * 30), GuessConfig(1, 1, 29))
    assert A == ((1 - z) * D - 1).normalized()


def test_guess_central_binomials():
    f = FormalSeries(comb(2 * n, n) for n in range(60))
    A = guess_operator(f, GuessConfig(1, 1, 59))
    assert A is not None and A.order == 1
    assert apply_op(A, f).is_zero()


def test_guess_order_two():
    f = FormalSeries(Fraction(1 + 2**n, factorial(n)) for n in range(60))
    A = guess_operator(f, GuessConfig(2, 0, 59))
    assert A == (D**2 - 3 * D + 2).normalized()


def test_guess_none_within_bounds():
    f = FormalSeries(Fraction(1, factorial(n) ** 2) for n in range(40))
    assert guess_operator(f, GuessConfig(1, 0, 39)) is None


def test_guess_insufficient():
    with pytest.raises(InsufficientCoefficients):
        GuessConfig(2, 3, 10)
    f = FormalSeries([1] * 10)
    with pytest.raises(InsufficientCoefficients):
        guess_operator(f, GuessConfig(1, 1, 20))


def test_ansatz_counts_degree_in_euler_form():
    monos = ansatz_monomials(2, 3)
    assert all(i - j <= 3 for i, j in monos)
    assert (5, 2) in monos and (4, 0) not in monos
    assert len(monos) == 4 + 5 + 6


def test_inhomogeneous_and_homogenize():
    f = FormalSeries([1] + [n * factorial(n) for n in range(1, 60)])
    L, rhs = guess_inhomogeneous(f, 1, 3, rhs_degree=2)
    assert L.order == 1
    lhs = apply_op(L, f)
    assert lhs == FormalSeries.polynomial(rhs.coeffs, lhs.order)
    H = homogenize(L, rhs)
    assert apply_op(H, f).is_zero()
    assert homogenize(L, Poly.const(3)) == (D * L).normalized()


def test_partial_fraction_round_trip(rng):
    for _ in range(20):
        poles = rng.sample(range(-6, 7), 3)
        terms = [PolePart(Fraction(a, 2) if a else Fraction(7), Fraction(rng.randint(1, 5)), rng.randint(1, 2)) for a in poles]
        pf = PartialFraction(Poly([rng.randint(-3, 3)]), tuple(terms))
        back = PartialFraction.from_rational(pf.to_rational())
        assert back == pf
        x = Fraction(1, 11)
        assert pf(x) == pf.to_rational()(x)


def test_partial_fraction_expansions():
    pf = PartialFraction.simple([(2, 1), (-1, 3)])
    taylor = pf.taylor(10)
    for n in range(11):
        # 1/(z-2) = -sum z^n / 2^(n+1) and 3/(z+1) = 3 sum (-z)^n
        assert taylor[n] == -Fraction(1, 2 ** (n + 1)) + 3 * (-1) ** n
    series = expand_rational(pf, 10)
    assert series.coeffs == tuple(taylor)
    inf = pf.laurent_at_infinity(6)
    assert inf == [1 * 2**k + 3 * (-1) ** k for k in range(7)]
    with pytest.raises(ValueError):
        PartialFraction.from_rational(RationalFunction(1, Poly([-2, 0, 1])))


def test_taylor_matches_division():
    pf = PartialFraction.simple([(2, 1), (-1, 3)])
    r = pf.to_rational()
    direct = FormalSeries.polynomial(r.num.coeffs, 12) / FormalSeries.polynomial(r.den.coeffs, 12)
    assert direct.coeffs == tuple(pf.taylor(12))


def test_rational_reconstruct():
    f = FormalSeries([2**n - 3**n for n in range(30)])
    r = rational_reconstruct(f)
    assert isinstance(r, PartialFraction)
    assert expand_rational(r, 29) == f
    fib = [0, 1]
    while len(fib) < 40:
        fib.append(fib[-1] + fib[-2])
    r = rational_reconstruct(FormalSeries(fib))
    assert isinstance(r, RationalFunction)  # 1 - z - z^2 does not split over Q
    assert expand_rational(r, 39) == FormalSeries(fib)
    exp = FormalSeries(Fraction(1, factorial(n)) for n in range(40))
    assert rational_reconstruct(exp) is None


def test_hermite_pade_exp():
    e = FormalSeries(Fraction(1, factorial(n)) for n in range(12))
    one = FormalSeries.one(11)
    polys = hermite_pade([one, e], 5, 2)
    assert polys is not None
    assert all(p.degree <= 2 for p in polys)
    assert residual_order(polys, [one, e]) >= 5


def test_hermite_pade_random(rng):
    for _ in range(15):
        m = rng.randint(2, 3)
        Dg = rng.randint(1, 3)
        N = m * (Dg + 1) - 1
        Z = [FormalSeries(Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(N + 4)) for _ in range(m)]
        polys = hermite_pade(Z, N, Dg)
        assert polys is not None
        assert any(polys)
        assert all(p.degree <= Dg for p in polys)
        assert residual_order(polys, Z) >= N


def test_hermite_pade_at_xi():
    xi = Fraction(1, 2)
    e = FormalSeries(Fraction(1, factorial(n)) for n in range(14))
    one = FormalSeries.one(13)
    local = [one.translate(xi), e.translate(xi)]
    polys = hermite_pade(local, 6, 3, xi)
    assert residual_order(polys, local, xi) >= 6


def test_hermite_pade_errors():
    with pytest.raises(ValueError):
        hermite_pade([], 3, 1)
    with pytest.raises(ValueError):
        hermite_pade([FormalSeries([1, 2])], 5, 1)
