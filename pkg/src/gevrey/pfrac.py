"""Exact partial-fraction decompositions with rational poles."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .exact import as_rational
from .poly import Poly, RationalFunction


@dataclass(frozen=True)
class PolePart:
    pole: Fraction
    coeff: Fraction
    multiplicity: int = 1


@dataclass(frozen=True)
class PartialFraction:
    """``poly(z) + sum coeff / (z - pole)^multiplicity``."""

    poly: Poly = field(default_factory=Poly)
    terms: tuple[PolePart, ...] = ()

    def __post_init__(self):
        terms = tuple(t for t in self.terms if t.coeff != 0)
        keys = [(t.pole, t.multiplicity) for t in terms]
        if len(set(keys)) != len(keys):
            raise ValueError("repeated (pole, multiplicity) entry")
        for t in terms:
            if t.multiplicity < 1:
                raise ValueError("multiplicity must be >= 1")
        object.__setattr__(self, "terms", tuple(sorted(terms, key=lambda t: (t.pole, t.multiplicity))))

    @classmethod
    def simple(cls, pairs, poly: Poly | None = None) -> PartialFraction:
        """From ``[(pole, coeff), ...]`` with simple poles."""
        return cls(poly or Poly(), tuple(PolePart(as_rational(a), as_rational(b)) for a, b in pairs))

    @classmethod
    def from_rational(cls, r: RationalFunction) -> PartialFraction:
        """Decompose; raises ``ValueError`` if the denominator does not split over Q."""
        quo, rem = divmod(r.num, r.den)
        roots = r.den.rational_roots()
        if sum(m for _, m in roots) != r.den.degree:
            raise ValueError("denominator has irrational roots")
        terms = []
        for a, m in roots:
            # g(w) = rem(w + a) / (den(w + a) / w^m), expanded to order m - 1 around w = 0
            num_w = rem.shift(a)
            den_w = Poly(r.den.shift(a).coeffs[m:])
            g = _series_quotient(num_w, den_w, m - 1)
            for k in range(m):
                # coefficient of w^k in g is the coefficient of (z - a)^(k - m)
                if g[k]:
                    terms.append(PolePart(a, g[k], m - k))
        return cls(quo, tuple(terms))

    def is_zero(self) -> bool:
        return not self.poly and not self.terms

    def poles(self) -> list[Fraction]:
        return sorted({t.pole for t in self.terms})

    def to_rational(self) -> RationalFunction:
        out = RationalFunction(self.poly)
        for t in self.terms:
            out = out + RationalFunction(Poly.const(t.coeff), Poly([-t.pole, 1]) ** t.multiplicity)
        return out

    def __call__(self, x) -> Fraction:
        x = as_rational(x)
        val = Fraction(self.poly(x))
        for t in self.terms:
            val += t.coeff / (x - t.pole) ** t.multiplicity
        return val

    def __add__(self, other: PartialFraction) -> PartialFraction:
        acc: dict[tuple[Fraction, int], Fraction] = {}
        for t in self.terms + other.terms:
            acc[(t.pole, t.multiplicity)] = acc.get((t.pole, t.multiplicity), Fraction(0)) + t.coeff
        return PartialFraction(self.poly + other.poly, tuple(PolePart(a, c, m) for (a, m), c in acc.items()))

    def scale(self, c) -> PartialFraction:
        c = as_rational(c)
        return PartialFraction(self.poly.scale(c), tuple(PolePart(t.pole, c * t.coeff, t.multiplicity) for t in self.terms))

    def taylor(self, order: int) -> list[Fraction]:
        """Coefficients of the expansion at 0 through ``z^order``."""
        out = [self.poly[n] for n in range(order + 1)]
        for t in self.terms:
            if t.pole == 0:
                raise ValueError("pole at the origin: no Taylor expansion")
            # (z - a)^-m = (-a)^-m (1 - z/a)^-m = (-a)^-m sum C(n+m-1, m-1) (z/a)^n
            base = t.coeff / (-t.pole) ** t.multiplicity
            for n in range(order + 1):
                out[n] += base * comb(n + t.multiplicity - 1, t.multiplicity - 1) / t.pole**n
        return out

    def laurent_at_infinity(self, order: int) -> list[Fraction]:
        """Coefficients ``c_n`` of ``z^(-n-1)``, ``n = 0..order``; requires no polynomial part."""
        if self.poly:
            raise ValueError("polynomial part does not vanish at infinity")
        out = [Fraction(0)] * (order + 1)
        for t in self.terms:
            # (z - a)^-m = z^-m sum_k C(k+m-1, m-1) a^k z^-k
            m = t.multiplicity
            for k in range(order + 2 - m):
                out[k + m - 1] += t.coeff * comb(k + m - 1, m - 1) * t.pole**k
        return out

    def to_json(self) -> dict:
        return {
            "polynomial": [str(c) for c in self.poly.coeffs],
            "terms": [
                {"pole": str(t.pole), "coeff": str(t.coeff), "multiplicity": t.multiplicity} for t in self.terms
            ],
        }

    def __str__(self) -> str:
        parts = [self.poly.to_string("z")] if self.poly else []
        for t in self.terms:
            den = f"(z - {t.pole})" if t.pole >= 0 else f"(z + {-t.pole})"
            if t.multiplicity > 1:
                den += f"^{t.multiplicity}"
            parts.append(f"{t.coeff}/{den}")
        return " + ".join(parts) if parts else "0"


def _series_quotient(num: Poly, den: Poly, order: int) -> list[Fraction]:
    if den[0] == 0:
        raise ZeroDivisionError("zero constant term")
    out: list[Fraction] = []
    for k in range(order + 1):
        acc = num[k] - sum((den[i] * out[k - i] for i in range(1, k + 1)), Fraction(0))
        out.append(acc / den[0])
    return out
