from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gevrey.linalg import kernel, matvec, rank, rref
from gevrey.poly import Poly, RationalFunction, falling, poly_gcd, rising

small = st.fractions(min_value=-5, max_value=5, max_denominator=4)
polys = st.lists(small, max_size=6).map(Poly)


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a - a).is_zero()


@given(polys, polys.filter(bool))
def test_divmod(a, b):
    q, r = divmod(a, b)
    assert q * b + r == a
    assert r.degree < b.degree


@given(polys, small)
def test_shift_and_eval(a, t):
    assert a.shift(t)(Fraction(1, 3)) == a(Fraction(1, 3) + t)
    assert a.dilate(t)(Fraction(2)) == a(2 * t)


def test_roots_and_gcd():
    p = Poly.from_roots([1, 1, Fraction(-2, 3), 5])
    assert p.rational_roots() == [(Fraction(-2, 3), 1), (Fraction(1), 2), (Fraction(5), 1)]
    g = poly_gcd(p, Poly.from_roots([1, 7]))
    assert g == Poly.from_roots([1])
    assert Poly([1, 0, 1]).rational_roots() == []


def test_falling_rising():
    x = Poly.x()
    assert falling(x, 3)(5) == 5 * 4 * 3
    assert rising(x, 3)(5) == 5 * 6 * 7
    assert falling(x, 0) == Poly.const(1)


def test_rational_function_normal_form():
    z = Poly.x()
    r = RationalFunction(z * z - 1, Poly([2, 2]))
    assert r.den == Poly.const(1)
    assert r.num == Poly([Fraction(-1, 2), Fraction(1, 2)])
    s = RationalFunction(1, z) + RationalFunction(1, Poly([-1, 1]))
    assert s(Fraction(3)) == Fraction(1, 3) + Fraction(1, 2)
    assert s.degree() == -1
    with pytest.raises(ZeroDivisionError):
        RationalFunction(1, 0)


def test_kernel_and_rank():
    rows = [[1, 2, 3], [2, 4, 6], [1, 0, 1]]
    rows = [[Fraction(x) for x in r] for r in rows]
    assert rank(rows, 3) == 2
    ker = kernel(rows, 3)
    assert len(ker) == 1
    assert not any(matvec(rows, ker[0]))
    red, piv = rref(rows, 3)
    assert piv == [0, 1]


@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=1, max_size=5))
def test_kernel_property(rows):
    ker = kernel(rows, 4)
    assert len(ker) == 4 - rank(rows, 4)
    for v in ker:
        assert not any(matvec(rows, v))
