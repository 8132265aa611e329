"""Truncated power series, Gevrey normalization and division by ``z - xi``.

A Gevrey series of order ``s = p/q`` is stored through its normalized
coefficients ``a_n``; the raw coefficient of ``z^n`` is ``([n/q]!)^p * a_n``
(floor division, so for integral ``s`` this is ``n!^s * a_n``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .exact import as_rational, check_prime, int_valuation, valuation


class FormalSeries:
    """``sum c_n z^n`` known exactly for ``n <= order``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        self.coeffs: tuple[Fraction, ...] = tuple(as_rational(c) for c in coeffs)
        if not self.coeffs:
            raise ValueError("a truncated series needs at least one coefficient")

    @classmethod
    def from_function(cls, f: Callable[[int], object], order: int) -> FormalSeries:
        return cls(f(n) for n in range(order + 1))

    @classmethod
    def zero(cls, order: int) -> FormalSeries:
        return cls([0] * (order + 1))

    @classmethod
    def one(cls, order: int) -> FormalSeries:
        return cls([1] + [0] * order)

    @classmethod
    def polynomial(cls, coeffs: Sequence, order: int) -> FormalSeries:
        c = list(coeffs)[: order + 1]
        return cls(c + [0] * (order + 1 - len(c)))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, n):
        return self.coeffs[n]

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, FormalSeries) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        head = ", ".join(str(c) for c in self.coeffs[:6])
        more = ", ..." if len(self.coeffs) > 6 else ""
        return f"FormalSeries([{head}{more}], order={self.order})"

    def truncate(self, order: int) -> FormalSeries:
        if order > self.order:
            raise ValueError(f"cannot extend a series known to order {self.order} to {order}")
        return FormalSeries(self.coeffs[: order + 1])

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def valuation(self) -> int | None:
        return next((n for n, c in enumerate(self.coeffs) if c), None)

    def __add__(self, other: FormalSeries) -> FormalSeries:
        n = min(self.order, other.order)
        return FormalSeries(a + b for a, b in zip(self.coeffs[: n + 1], other.coeffs[: n + 1]))

    def __neg__(self) -> FormalSeries:
        return FormalSeries(-a for a in self.coeffs)

    def __sub__(self, other: FormalSeries) -> FormalSeries:
        return self + (-other)

    def scale(self, c) -> FormalSeries:
        c = as_rational(c)
        return FormalSeries(c * a for a in self.coeffs)

    def __mul__(self, other) -> FormalSeries:
        if not isinstance(other, FormalSeries):
            return self.scale(other)
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = []
        for k in range(n + 1):
            out.append(sum((a[i] * b[k - i] for i in range(k + 1) if a[i] and b[k - i]), Fraction(0)))
        return FormalSeries(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> FormalSeries:
        if not isinstance(other, FormalSeries):
            return self.scale(1 / as_rational(other))
        if other.coeffs[0] == 0:
            raise ZeroDivisionError("divisor must have a nonzero constant term")
        n = min(self.order, other.order)
        d = other.coeffs
        out: list[Fraction] = []
        for k in range(n + 1):
            acc = self.coeffs[k] - sum((d[i] * out[k - i] for i in range(1, k + 1) if i < len(d) and d[i]), Fraction(0))
            out.append(acc / d[0])
        return FormalSeries(out)

    def shift(self, k: int) -> FormalSeries:
        """Multiply by ``z^k`` (``k >= 0``); the known order grows by ``k``."""
        return FormalSeries([0] * k + list(self.coeffs))

    def derivative(self) -> FormalSeries:
        if self.order == 0:
            raise ValueError("derivative of an order-0 truncation carries no information")
        return FormalSeries(n * c for n, c in enumerate(self.coeffs) if n)

    def integrate(self, constant=0) -> FormalSeries:
        return FormalSeries([as_rational(constant)] + [c / (n + 1) for n, c in enumerate(self.coeffs)])

    def theta(self) -> FormalSeries:
        return FormalSeries(n * c for n, c in enumerate(self.coeffs))

    def dilate(self, a) -> FormalSeries:
        """``f(a z)``."""
        a = as_rational(a)
        return FormalSeries(c * a**n for n, c in enumerate(self.coeffs))

    def evaluate(self, x) -> Fraction:
        """Value of the truncated polynomial at ``x``."""
        x = as_rational(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def translate(self, xi) -> FormalSeries:
        """Re-expand the truncated polynomial in powers of ``z - xi``."""
        xi = as_rational(xi)
        c = list(self.coeffs)
        n = len(c)
        for i in range(n):
            for j in range(n - 2, i - 1, -1):
                c[j] += xi * c[j + 1]
        return FormalSeries(c)


def series_arith(op: str, *operands):
    """Dispatch ``add | mul | derivative | theta`` on formal series."""
    if op == "add":
        a, b = operands
        return a + b
    if op == "mul":
        a, b = operands
        return a * b
    if op == "derivative":
        (a,) = operands
        return a.derivative()
    if op == "theta":
        (a,) = operands
        return a.theta()
    raise ValueError(f"unknown series operation {op!r}")


def gevrey_weight(n: int, s) -> Fraction:
    """``([n/q]!)^p`` for ``s = p/q``."""
    s = as_rational(s)
    base = math.factorial(n // s.denominator)
    p = s.numerator
    return Fraction(base**p) if p >= 0 else Fraction(1, base ** (-p))


@dataclass(frozen=True)
class GevreySeries:
    order_s: Fraction
    normalized: FormalSeries

    def __post_init__(self):
        object.__setattr__(self, "order_s", as_rational(self.order_s))

    @classmethod
    def from_raw(cls, raw: FormalSeries, s) -> GevreySeries:
        s = as_rational(s)
        return cls(s, FormalSeries(c / gevrey_weight(n, s) for n, c in enumerate(raw)))

    @property
    def order(self) -> int:
        return self.normalized.order

    @property
    def raw(self) -> FormalSeries:
        s = self.order_s
        return FormalSeries(gevrey_weight(n, s) * a for n, a in enumerate(self.normalized))

    def weights(self) -> list[Fraction]:
        return [gevrey_weight(n, self.order_s) for n in range(self.order + 1)]


def borel_normalize(F: GevreySeries) -> FormalSeries:
    """The associated order-0 series ``sum a_n z^n``."""
    if F.order_s == 0:
        raise ValueError("order s must be nonzero")
    return F.normalized


def laplace_denormalize(f: FormalSeries, s) -> GevreySeries:
    return GevreySeries(as_rational(s), f)


def divide_linear(F: GevreySeries, xi) -> GevreySeries:
    """``G = (z - xi)^{-1} F`` computed on normalized coefficients.

    ``b_n = -sum_{k<=n} (w_k / w_n) xi^(k-n-1) a_k`` with ``w_n`` the Gevrey
    weight; for ``s < 0`` integral this is ``(n!/k!)^|s|``, for ``s = p/q > 0``
    it is ``([k/q]!/[n/q]!)^p``.
    """
    xi = as_rational(xi)
    if xi == 0:
        raise ValueError("xi must be nonzero (division by z is a shift)")
    w = F.weights()
    a = F.normalized.coeffs
    inv = 1 / xi
    b = []
    for n in range(len(a)):
        acc = Fraction(0)
        xpow = inv  # xi^(k-n-1) for k = n
        for k in range(n, -1, -1):
            if a[k]:
                acc += (w[k] / w[n]) * xpow * a[k]
            xpow *= inv
        b.append(-acc)
    return GevreySeries(F.order_s, FormalSeries(b))


def multiply_linear(G: GevreySeries, xi) -> GevreySeries:
    """``(z - xi) G`` on raw coefficients, returned in the same order."""
    xi = as_rational(xi)
    raw = G.raw
    prod = [-xi * raw[0]] + [raw[n - 1] - xi * raw[n] for n in range(1, len(raw))]
    return GevreySeries.from_raw(FormalSeries(prod), G.order_s)


@dataclass(frozen=True)
class ArithProfile:
    """Running growth statistics of a coefficient sequence.

    ``max_abs[n]`` is ``max |a_0..a_n|`` and ``den_lcm[n]`` the lcm of the
    denominators of ``a_0..a_n``; :meth:`conj_stat` and :meth:`den_stat` take
    their ``1/n``-th roots. The verdict is a finite-window heuristic: both root
    statistics must not keep growing over the second half of the window.
    """

    max_abs: tuple[Fraction, ...]
    den_lcm: tuple[int, ...]
    growth_tolerance: float = 1.25

    def conj_stat(self, n: int) -> float:
        return _root(self.max_abs[n], n)

    def den_stat(self, n: int) -> float:
        return _root(Fraction(self.den_lcm[n]), n)

    def _bounded(self, stat: Callable[[int], float]) -> bool:
        N = len(self.max_abs) - 1
        if N < 4:
            return True
        half = N // 2
        early = max(stat(n) for n in range(1, half + 1))
        late = max(stat(n) for n in range(half + 1, N + 1))
        return late <= self.growth_tolerance * max(early, 1.0)

    @property
    def conj_bounded(self) -> bool:
        return self._bounded(self.conj_stat)

    @property
    def den_bounded(self) -> bool:
        return self._bounded(self.den_stat)

    @property
    def verdict(self) -> str:
        if self.conj_bounded and self.den_bounded:
            return "consistent with (G)"
        return "not (G)"

    def to_json(self) -> dict:
        N = len(self.max_abs) - 1
        return {
            "order": N,
            "max_abs": str(self.max_abs[N]),
            "den_lcm": str(self.den_lcm[N]),
            "conj_bounded": self.conj_bounded,
            "den_bounded": self.den_bounded,
            "verdict": self.verdict,
            "heuristic": True,
        }


def _root(x: Fraction, n: int) -> float:
    if n == 0:
        return float(x)
    if x == 0:
        return 0.0
    # logs of big integers stay finite where float(x) would overflow
    return math.exp((math.log(x.numerator) - math.log(x.denominator)) / n)


def arith_profile(F: GevreySeries | FormalSeries, growth_tolerance: float = 1.25) -> ArithProfile:
    a = F.normalized if isinstance(F, GevreySeries) else F
    max_abs, den = [], []
    m, l = Fraction(0), 1
    for c in a:
        m = max(m, abs(c))
        l = l * c.denominator // math.gcd(l, c.denominator)
        max_abs.append(m)
        den.append(l)
    return ArithProfile(tuple(max_abs), tuple(den), growth_tolerance)


def padic_radius_estimate(f: FormalSeries, p: int, cap: bool = True) -> Fraction:
    """Estimate of ``log_p`` of the p-adic radius of convergence of ``f``.

    Returns ``min val_p(a_n)/n`` over the upper half of the nonzero
    coefficients; with ``cap`` the radius is limited to 1, i.e. the estimate
    to 0. This reads truncated data and certifies nothing.
    """
    check_prime(p)
    support = [n for n, c in enumerate(f) if c and n > 0]
    if not support and (f.coeffs[0] == 0):
        raise ValueError("all-zero series has no radius estimate")
    if len(support) < 8:
        raise ValueError("need at least 8 nonzero coefficients")
    tail = support[len(support) // 2 :]
    est = min(Fraction(valuation(f[n], p), n) for n in tail)
    return min(est, Fraction(0)) if cap else est


def lcm_denominator_valuations(coeffs: Sequence[Fraction], primes: Iterable[int]) -> dict[int, int]:
    """``val_p`` of the lcm of the denominators, per prime."""
    out = {}
    for p in primes:
        out[p] = max((int_valuation(c.denominator, p) for c in coeffs if c), default=0)
    return out
