"""Rational scalars, fixed-precision p-adic values and q-integers."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from sympy import isprime

Rational = Fraction


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def check_prime(p: int) -> int:
    if not isinstance(p, int) or p < 2 or not isprime(p):
        raise ValueError(f"{p!r} is not a prime")
    return p


def int_valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero is infinite")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation(x, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    x = as_rational(x)
    if x == 0:
        raise ValueError("valuation of zero is infinite")
    return int_valuation(x.numerator, p) - int_valuation(x.denominator, p)


def legendre_valuation(n: int, p: int) -> int:
    """``val_p(n!)`` via Legendre's formula ``sum floor(n / p^i)``."""
    check_prime(p)
    if n < 0:
        raise ValueError("n must be nonnegative")
    total = 0
    while n:
        n //= p
        total += n
    return total


def digit_sum(n: int, p: int) -> int:
    s = 0
    while n:
        n, r = divmod(n, p)
        s += r
    return s


@dataclass(frozen=True)
class PAdicValue:
    """An element of Q_p known modulo ``p**precision``.

    ``precision`` is absolute: the represented set is ``x + p^precision Z_p``.
    Nonzero values are ``p^valuation * u`` with ``u`` a unit known modulo
    ``p^(precision - valuation)``. A value that is zero to the available
    precision has ``unit_residue == 0`` and ``valuation == precision``;
    ``exact_zero`` marks a value known to be exactly zero.
    """

    prime: int
    precision: int
    valuation: int
    unit_residue: int
    exact_zero: bool = False

    @classmethod
    def zero(cls, p: int, precision: int | None = None) -> PAdicValue:
        return cls(p, precision if precision is not None else 0, 0, 0, exact_zero=True)

    @classmethod
    def from_rational(cls, x, p: int, precision: int) -> PAdicValue:
        x = as_rational(x)
        if x == 0:
            return cls.zero(p, precision)
        v = valuation(x, p)
        if v >= precision:
            return cls(p, precision, precision, 0)
        mod = p ** (precision - v)
        num = x.numerator // p ** max(v, 0)
        den = x.denominator // p ** max(-v, 0)
        return cls(p, precision, v, num * pow(den, -1, mod) % mod)

    @classmethod
    def _approx(cls, x: Fraction, p: int, precision: int) -> PAdicValue:
        """Like :meth:`from_rational` for a computed residue: zero stays inexact."""
        if x == 0:
            return cls(p, precision, precision, 0)
        return cls.from_rational(x, p, precision)

    @property
    def is_zero(self) -> bool:
        """Zero to the known precision (or exactly)."""
        return self.exact_zero or self.unit_residue == 0

    def relative_precision(self) -> int:
        return 0 if self.is_zero else self.precision - self.valuation

    def residue(self) -> Fraction:
        """Canonical representative: ``p^v * u`` with ``0 <= u < p^(k - v)``."""
        if self.is_zero:
            return Fraction(0)
        return Fraction(self.unit_residue) * Fraction(self.prime) ** self.valuation

    def congruent(self, x) -> bool:
        """Whether the rational ``x`` lies in the represented residue class."""
        if self.exact_zero:
            return as_rational(x) == 0
        diff = as_rational(x) - self.residue()
        return diff == 0 or valuation(diff, self.prime) >= self.precision

    def _check(self, other: PAdicValue) -> None:
        if self.prime != other.prime:
            raise ValueError("p-adic values over different primes")

    def __add__(self, other: PAdicValue) -> PAdicValue:
        self._check(other)
        if self.exact_zero:
            return other
        if other.exact_zero:
            return self
        k = min(self.precision, other.precision)
        return PAdicValue._approx(self.residue() + other.residue(), self.prime, k)

    def __neg__(self) -> PAdicValue:
        if self.exact_zero:
            return self
        return PAdicValue._approx(-self.residue(), self.prime, self.precision)

    def __sub__(self, other: PAdicValue) -> PAdicValue:
        return self + (-other)

    def __mul__(self, other: PAdicValue) -> PAdicValue:
        self._check(other)
        if self.exact_zero or other.exact_zero:
            return PAdicValue.zero(self.prime)
        # absolute precision of a product: min(v_x + k_y, v_y + k_x)
        k = min(self.valuation + other.precision, other.valuation + self.precision)
        return PAdicValue._approx(self.residue() * other.residue(), self.prime, k)

    def reduce(self, precision: int) -> PAdicValue:
        if precision > self.precision and not self.exact_zero:
            raise ValueError("cannot increase precision")
        if self.exact_zero:
            return self
        return PAdicValue._approx(self.residue(), self.prime, precision)

    def to_json(self) -> dict:
        return {
            "prime": self.prime,
            "precision": self.precision,
            "valuation": None if self.is_zero else self.valuation,
            "residue": str(self.residue()),
            "exact_zero": self.exact_zero,
        }


@dataclass(frozen=True)
class QContext:
    """A rational ``q`` (nonzero, not a root of unity) with cached q-integers."""

    q: Fraction
    _ints: list = field(default_factory=lambda: [Fraction(0)], repr=False, compare=False, hash=False)
    _facts: list = field(default_factory=lambda: [Fraction(1)], repr=False, compare=False, hash=False)

    def __post_init__(self):
        q = as_rational(self.q)
        if q == 0 or q == 1 or q == -1:
            raise ValueError(f"q={q} must be nonzero and not a root of unity")
        object.__setattr__(self, "q", q)

    def q_int(self, n: int) -> Fraction:
        """``n_q = (1 - q^n)/(1 - q)``; defined for negative ``n`` as well."""
        if n < 0:
            return (1 - self.q**n) / (1 - self.q)
        while len(self._ints) <= n:
            m = len(self._ints)
            self._ints.append(self._ints[-1] + self.q ** (m - 1))
        return self._ints[n]

    def q_factorial(self, n: int) -> Fraction:
        if n < 0:
            raise ValueError("q-factorial of a negative integer")
        while len(self._facts) <= n:
            m = len(self._facts)
            self._facts.append(self._facts[-1] * self.q_int(m))
        return self._facts[n]

    def inverse(self) -> QContext:
        return QContext(1 / self.q)


def q_factorial(n: int, ctx: QContext) -> Fraction:
    return ctx.q_factorial(n)


def q_factorial_valuation(n: int, ctx: QContext, p: int) -> int:
    """Exact ``val_p(n_q!)`` for a prime ``p`` not dividing ``q``."""
    check_prime(p)
    q = ctx.q
    if q.numerator % p == 0 or q.denominator % p == 0:
        raise ValueError(f"p={p} divides q={q}")
    return sum(q_int_valuations(n, ctx, p))


def q_int_valuations(n: int, ctx: QContext, p: int) -> list[int]:
    """``[val_p(m_q) for m in 1..n]``; requires ``p`` prime to ``q``."""
    a, b = ctx.q.numerator, ctx.q.denominator
    if a % p == 0 or b % p == 0:
        raise ValueError(f"p={p} divides q={ctx.q}")
    # m_q = (a^m - b^m) / (b^(m-1) (a - b)), and p does not divide b
    v_step = int_valuation(a - b, p)
    out = []
    am, bm = 1, 1
    for _ in range(n):
        am, bm = am * a, bm * b
        out.append(int_valuation(am - bm, p) - v_step)
    return out
