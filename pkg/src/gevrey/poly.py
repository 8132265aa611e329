"""Dense univariate polynomials and rational functions over Q.

Coefficients are stored low degree first as a tuple of ``Fraction``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

import sympy

Number = int | Fraction


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class Poly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        c = [_frac(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(c)

    @classmethod
    def const(cls, a: Number) -> Poly:
        return cls([a])

    @classmethod
    def x(cls) -> Poly:
        return cls([0, 1])

    @classmethod
    def monomial(cls, k: int, a: Number = 1) -> Poly:
        return cls([0] * k + [a])

    @classmethod
    def from_roots(cls, roots: Iterable[Number]) -> Poly:
        p = cls([1])
        for r in roots:
            p = p * cls([-_frac(r), 1])
        return p

    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def valuation(self) -> int | None:
        for i, a in enumerate(self.coeffs):
            if a:
                return i
        return None

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        return self.to_string("x")

    def to_string(self, var: str = "x") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            a = self.coeffs[k]
            if not a:
                continue
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            sign = "-" if a < 0 else "+"
            mag = abs(a)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = str(mag)
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def _coerce(self, other) -> Poly:
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(other)
        return NotImplemented

    def __add__(self, other) -> Poly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self[k] + other[k] for k in range(n))

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly(-a for a in self.coeffs)

    def __sub__(self, other) -> Poly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> Poly:
        return (-self) + other

    def __mul__(self, other) -> Poly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Poly:
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly([1])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, a: Number) -> Poly:
        a = _frac(a)
        return Poly(a * c for c in self.coeffs)

    def __divmod__(self, other: Poly) -> tuple[Poly, Poly]:
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.lc()
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] / lead
            if c:
                quot[k - dq] = c
                for j, b in enumerate(other.coeffs):
                    rem[k - dq + j] -= c * b
        return Poly(quot), Poly(rem[:dq] if dq > 0 else [])

    def __floordiv__(self, other: Poly) -> Poly:
        return divmod(self, other)[0]

    def __mod__(self, other: Poly) -> Poly:
        return divmod(self, other)[1]

    def exact_div(self, other: Poly) -> Poly:
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def monic(self) -> Poly:
        if not self.coeffs:
            return self
        return self.scale(1 / self.lc())

    def __call__(self, x):
        acc = 0
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def shift(self, a: Number) -> Poly:
        """Return ``p(x + a)``."""
        a = _frac(a)
        out = Poly()
        lin = Poly([a, 1])
        for c in reversed(self.coeffs):
            out = out * lin + c
        return out

    def dilate(self, a: Number) -> Poly:
        """Return ``p(a*x)``."""
        a = _frac(a)
        return Poly(c * a**k for k, c in enumerate(self.coeffs))

    def derivative(self) -> Poly:
        return Poly(k * c for k, c in enumerate(self.coeffs) if k)

    def compose(self, inner: Poly) -> Poly:
        out = Poly()
        for c in reversed(self.coeffs):
            out = out * inner + c
        return out

    def denominator_lcm(self) -> int:
        return reduce(lambda a, b: a * b // _gcd(a, b), (c.denominator for c in self.coeffs), 1)

    def primitive(self) -> Poly:
        """Scale to integer coefficients with content 1 and positive leading coefficient."""
        if not self.coeffs:
            return self
        ints = [c * self.denominator_lcm() for c in self.coeffs]
        g = reduce(_gcd, (int(c) for c in ints), 0)
        sgn = 1 if ints[-1] > 0 else -1
        return Poly(c / (g * sgn) for c in ints)

    def rational_roots(self) -> list[tuple[Fraction, int]]:
        """Rational roots with multiplicity, in increasing order."""
        if self.degree <= 0:
            return []
        x = sympy.Symbol("x")
        sp = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(self.coeffs)], x, domain="QQ")
        roots = []
        for fac, mult in sp.factor_list()[1]:
            if fac.degree() == 1:
                a, b = fac.all_coeffs()
                r = -sympy.Rational(b) / sympy.Rational(a)
                roots.append((Fraction(int(r.p), int(r.q)), int(mult)))
        return sorted(roots)

    def root_count(self) -> int:
        """Number of roots over C counted with multiplicity, i.e. the degree."""
        return max(self.degree, 0)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd (zero if both are zero)."""
    while b:
        a, b = b, a % b
    return a.monic()


def poly_gcd_many(polys: Iterable[Poly]) -> Poly:
    return reduce(poly_gcd, polys, Poly())


def falling(x: Poly, k: int) -> Poly:
    """``x (x-1) ... (x-k+1)`` as a polynomial in the variable of ``x``."""
    out = Poly([1])
    for i in range(k):
        out = out * (x - i)
    return out


def rising(x: Poly, k: int) -> Poly:
    """``x (x+1) ... (x+k-1)``."""
    out = Poly([1])
    for i in range(k):
        out = out * (x + i)
    return out


class RationalFunction:
    """Quotient ``num/den`` in lowest terms with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly | Number, den: Poly | Number = 1):
        num = num if isinstance(num, Poly) else Poly.const(num)
        den = den if isinstance(den, Poly) else Poly.const(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        g = poly_gcd(num, den) if num else den.monic()
        num, den = num.exact_div(g), den.exact_div(g)
        lead = den.lc()
        self.num = num.scale(1 / lead)
        self.den = den.scale(1 / lead)

    @classmethod
    def z(cls) -> RationalFunction:
        return cls(Poly.x())

    def __repr__(self) -> str:
        return f"RationalFunction({self.num.to_string('z')}, {self.den.to_string('z')})"

    def __str__(self) -> str:
        if self.den == 1:
            return self.num.to_string("z")
        return f"({self.num.to_string('z')})/({self.den.to_string('z')})"

    def _coerce(self, other) -> RationalFunction:
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (int, Fraction, Poly)):
            return RationalFunction(other)
        return NotImplemented

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __bool__(self) -> bool:
        return bool(self.num)

    def __add__(self, other) -> RationalFunction:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> RationalFunction:
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other) -> RationalFunction:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> RationalFunction:
        return (-self) + other

    def __mul__(self, other) -> RationalFunction:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> RationalFunction:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other:
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> RationalFunction:
        return self._coerce(other) / self

    def __pow__(self, k: int) -> RationalFunction:
        if k >= 0:
            return RationalFunction(self.num**k, self.den**k)
        return RationalFunction(self.den ** (-k), self.num ** (-k))

    def __call__(self, x):
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError(f"pole at {x}")
        return self.num(x) / _frac(d)

    def dilate(self, a: Number) -> RationalFunction:
        """Return ``f(a*z)``."""
        return RationalFunction(self.num.dilate(a), self.den.dilate(a))

    def degree(self) -> int:
        """Degree at infinity: ``deg num - deg den`` (zero function raises)."""
        if not self.num:
            raise ValueError("degree of the zero rational function")
        return self.num.degree - self.den.degree

    def order_at_zero(self) -> int:
        if not self.num:
            raise ValueError("order of the zero rational function")
        return self.num.valuation() - self.den.valuation()

    def is_polynomial(self) -> bool:
        return self.den.degree == 0


def polys_equal_up_to_scalar(a: Sequence[Fraction], b: Sequence[Fraction]) -> bool:
    """Whether two coefficient vectors are proportional by a nonzero scalar."""
    if len(a) != len(b):
        return False
    ratio = None
    for x, y in zip(a, b):
        if (x == 0) != (y == 0):
            return False
        if x:
            r = Fraction(y) / Fraction(x)
            if ratio is None:
                ratio = r
            elif r != ratio:
                return False
    return True
