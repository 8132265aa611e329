"""p-adic sums of divergent factorial series ``sum P(n) n!^s xi^n``.

For every prime ``p`` the terms tend to zero p-adically because
``val_p(n!)`` grows like ``n/(p-1)``. A few polynomials ``P`` give the same
rational value at every prime; for ``s = 1`` and ``xi = 1`` these are
exactly the ones in the image of the telescope map
``Q -> (n+1) Q(n+1) - Q(n)``, and the common value is ``-Q(0)``.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .exact import PAdicValue, as_rational, check_prime, int_valuation, legendre_valuation, valuation
from .guess import GuessConfig, InsufficientCoefficients, guess_inhomogeneous, guess_operator
from .poly import Poly
from .series import FormalSeries
from .weyl import DiffOp, apply_op, trivial_singularity_check


@dataclass(frozen=True)
class FactorialSeriesSpec:
    """``sum_{n >= 0} P(n) * n!^s * xi^n``."""

    P: Poly
    s: int = 1
    xi: Fraction = Fraction(1)

    def __post_init__(self):
        if not isinstance(self.P, Poly):
            object.__setattr__(self, "P", Poly(self.P))
        if not isinstance(self.s, int) or self.s < 1:
            raise ValueError("weight exponent s must be a positive integer")
        object.__setattr__(self, "xi", as_rational(self.xi))

    def term(self, n: int) -> Fraction:
        return self.P(n) * factorial(n) ** self.s * self.xi**n

    def partial_sum(self, N: int) -> Fraction:
        """Exact ``sum_{n=0}^{N}``."""
        total = Fraction(0)
        fact = 1
        power = Fraction(1)
        for n in range(N + 1):
            if n:
                fact *= n
                power *= self.xi
            total += self.P(n) * fact**self.s * power
        return total

    def to_json(self) -> dict:
        return {"P": [str(c) for c in self.P.coeffs], "s": self.s, "xi": str(self.xi)}


@dataclass(frozen=True)
class TelescopeResult:
    Q: Poly
    c: Fraction

    @property
    def universal_value(self) -> Fraction | None:
        return -self.Q(0) if self.c == 0 else None

    def to_json(self) -> dict:
        v = self.universal_value
        return {
            "Q": [str(a) for a in self.Q.coeffs],
            "c": str(self.c),
            "universal_value": None if v is None else str(v),
        }


def _telescope_image(Q: Poly) -> Poly:
    """``(n+1) Q(n+1) - Q(n)``."""
    return Poly([1, 1]) * Q.shift(1) - Q


def telescope_decompose(P) -> TelescopeResult:
    """Write ``P(n) = (n+1) Q(n+1) - Q(n) + c`` (unique).

    If ``deg Q = d`` the image has degree ``d + 1`` with leading coefficient
    ``lc(Q)``, so the system is triangular and is solved from the top down;
    whatever constant is left over is ``c``.
    """
    P = P if isinstance(P, Poly) else Poly(P)
    rest = P
    q = [Fraction(0)] * max(P.degree, 0)
    for m in range(P.degree - 1, -1, -1):
        q[m] = rest[m + 1]
        if q[m]:
            rest = rest - _telescope_image(Poly.monomial(m, q[m]))
    assert rest.degree <= 0
    return TelescopeResult(Poly(q), rest[0])


def normalize_shifted_factorial(P, shift: int) -> Poly:
    """``P(n) (n + shift)!`` rewritten as ``P'(n) n!`` for ``shift >= 0``."""
    if shift < 0:
        raise ValueError("only nonnegative shifts are polynomial")
    P = P if isinstance(P, Poly) else Poly(P)
    for k in range(1, shift + 1):
        P = P * Poly([k, 1])
    return P


def truncation_index(spec: FactorialSeriesSpec, p: int, k: int) -> int:
    """Smallest ``N`` past which every term is ``0 mod p^k``.

    Uses ``val_p(P(n)) >= -val_p(den P)`` as the slack and the fact that
    ``s val_p(n!) + n val_p(xi)`` is nondecreasing when ``val_p(xi) >= 0``.
    """
    v_xi = valuation(spec.xi, p) if spec.xi else 0
    slack = int_valuation(spec.P.denominator_lcm(), p)
    N = 0
    while spec.s * legendre_valuation(N, p) + N * v_xi - slack < k:
        N += 1
    return N


def padic_sum(spec: FactorialSeriesSpec, p: int, k: int) -> PAdicValue:
    """The p-adic value of the series modulo ``p^k`` (absolute precision)."""
    check_prime(p)
    if k < 1:
        raise ValueError("precision must be at least 1")
    if not spec.P:
        return PAdicValue.zero(p, k)
    if spec.xi == 0:
        return PAdicValue.from_rational(spec.P(0), p, k)
    if valuation(spec.xi, p) < 0:
        raise ValueError(f"divergent regime: val_{p}(xi) < 0")
    N = truncation_index(spec, p, k)
    D = spec.P.denominator_lcm()
    v_D = int_valuation(D, p)
    mod = p ** (k + v_D)
    Pint = [int(c * D) for c in spec.P.coeffs]
    xi = spec.xi.numerator * pow(spec.xi.denominator, -1, mod) % mod
    total, fact, power = 0, 1, 1
    for n in range(N):
        if n:
            fact = fact * n % mod
            power = power * xi % mod
        pn = 0
        for c in reversed(Pint):
            pn = (pn * n + c) % mod
        total = (total + pn * pow(fact, spec.s, mod) * power) % mod
    # the integer sum is known mod p^(k + v_D); dividing by D leaves precision k
    return PAdicValue.from_rational(Fraction(total, D), p, k)


def partial_sum_oracle(spec: FactorialSeriesSpec, p: int, k: int, max_terms: int = 5000) -> Fraction:
    """Rational fixed by stabilization of exact partial sums modulo ``p^k``.

    Independent of the truncation bound: adds terms until the residue of
    the partial sum has not moved for ``p * k`` further terms and the last
    term is divisible by ``p^k``, then returns that residue.
    """
    total = Fraction(0)
    fact = 1
    power = Fraction(1)
    last = None
    stable = 0
    for n in range(max_terms):
        if n:
            fact *= n
            power *= spec.xi
        term = spec.P(n) * fact**spec.s * power
        total += term
        res = PAdicValue.from_rational(total, p, k)
        if last is not None and res == last and (term == 0 or valuation(term, p) >= k):
            stable += 1
            if stable >= p * k:
                return res.residue()
        else:
            stable = 0
        last = res
    raise RuntimeError("partial sums did not stabilize")


def _one(args):
    spec, p, k = args
    return padic_sum(spec, p, k)


def padic_sums(spec: FactorialSeriesSpec, primes, k: int, jobs: int = 1) -> list[PAdicValue]:
    """Per-prime values, in the order of ``primes``; ``jobs > 1`` uses processes."""
    work = [(spec, p, k) for p in primes]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_one, work))
    return [_one(w) for w in work]


@dataclass
class UniversalReport:
    spec: FactorialSeriesSpec
    precision: int
    telescope: TelescopeResult | None
    values: list[PAdicValue] = field(default_factory=list)
    agree: list[bool] = field(default_factory=list)
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.telescope is not None and self.telescope.universal_value is not None and all(self.agree)

    def to_json(self) -> dict:
        uv = self.telescope.universal_value if self.telescope else None
        entries = []
        for i, v in enumerate(self.values):
            e = v.to_json()
            if self.agree:
                e["agrees"] = self.agree[i]
            entries.append(e)
        out = {"spec": self.spec.to_json(), "precision": self.precision, "results": entries}
        if uv is not None:
            out["universal_value"] = str(uv)
        if self.note:
            out["note"] = self.note
        return out


def verify_universal(spec: FactorialSeriesSpec, primes, k: int, jobs: int = 1) -> UniversalReport:
    """Compare each per-prime sum with the telescope value when there is one."""
    primes = list(primes)
    tele = telescope_decompose(spec.P) if spec.s == 1 and spec.xi == 1 else None
    values = padic_sums(spec, primes, k, jobs)
    report = UniversalReport(spec, k, tele, values)
    if tele is None:
        report.note = "telescope applies only to s = 1, xi = 1"
    elif tele.universal_value is None:
        report.note = "no universal value; per-prime sums differ as rationals"
    else:
        report.agree = [v.congruent(tele.universal_value) for v in values]
    return report


class GuesserFailure(RuntimeError):
    pass


EXAMPLE33_MIN_TRUNC = 60


def example33_series(trunc: int) -> FormalSeries:
    return FormalSeries([1] + [n * factorial(n) for n in range(1, trunc + 1)])


@dataclass
class PipelineResult:
    verdict: str
    operator: DiffOp
    dimension: int | None
    inhomogeneous: tuple[DiffOp, Poly] | None

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "operator": str(self.operator), "dimension": self.dimension}
        if self.inhomogeneous:
            L, rhs = self.inhomogeneous
            out["inhomogeneous"] = {"operator": str(L), "rhs": rhs.to_string("z")}
        return out


def example33_pipeline(trunc: int = 120, series: FormalSeries | None = None) -> PipelineResult:
    """Guess an operator for ``1 + sum n n! z^n`` and test ``z = 1`` for triviality.

    ``series`` replaces the default input (used for negative controls).
    """
    if trunc < EXAMPLE33_MIN_TRUNC:
        raise InsufficientCoefficients(
            f"insufficient coefficients: the pipeline needs truncation >= {EXAMPLE33_MIN_TRUNC}, got {trunc}"
        )
    f = series if series is not None else example33_series(trunc)
    A = guess_operator(f, GuessConfig(2, 3, trunc))
    if A is None:
        raise GuesserFailure("no operator of order <= 2 and degree <= 3 annihilates the series")
    assert apply_op(A, f).is_zero()
    inh = guess_inhomogeneous(f, 1, 3, rhs_degree=2)
    verdict = trivial_singularity_check(A, 1, vanish_order=1)
    return PipelineResult(verdict.verdict, A, verdict.dimension, inh)
