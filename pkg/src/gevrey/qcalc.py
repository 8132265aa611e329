"""q-series, the two q-Laplace transforms and q-difference operators.

Throughout, ``sigma_r f(z) = f(r z)`` and
``delta_r f(z) = (f(r z) - f(z)) / ((r - 1) z)``, so ``delta_r z^k = k_r z^(k-1)``
with ``k_r = (1 - r^k)/(1 - r)``. Everything stays in Q: the exponent
``n(n-1)/2`` is always an integer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .exact import QContext, as_rational
from .linalg import kernel, rref
from .pfrac import PartialFraction, PolePart
from .poly import Poly, RationalFunction
from .series import FormalSeries
from .weyl import NewtonPolygon, lower_hull_edges


def _tri(n: int) -> int:
    return n * (n - 1) // 2


def _ctx(q) -> QContext:
    return q if isinstance(q, QContext) else QContext(as_rational(q))


def _r_int(r: Fraction, k: int) -> Fraction:
    """``k_r`` for any integer ``k``."""
    return (1 - r**k) / (1 - r)


class QLaurentSeries:
    """``sum_{n=0}^{N} c_n z^(-n-1)``, a truncated expansion at infinity."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs: tuple[Fraction, ...] = tuple(as_rational(c) for c in coeffs)
        if not self.coeffs:
            raise ValueError("empty Laurent tail")

    @classmethod
    def from_rational(cls, r, order: int) -> QLaurentSeries:
        """Expansion at infinity of a rational function vanishing there."""
        if isinstance(r, RationalFunction):
            r = PartialFraction.from_rational(r)
        return cls(r.laurent_at_infinity(order))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> Fraction:
        return self.coeffs[n]

    def __eq__(self, other) -> bool:
        return isinstance(other, QLaurentSeries) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"QLaurentSeries({[str(c) for c in self.coeffs[:6]]}{'...' if len(self.coeffs) > 6 else ''})"

    def truncate(self, order: int) -> QLaurentSeries:
        if order > self.order:
            raise ValueError("cannot extend a truncation")
        return QLaurentSeries(self.coeffs[: order + 1])

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other: QLaurentSeries) -> QLaurentSeries:
        n = min(self.order, other.order)
        return QLaurentSeries(a + b for a, b in zip(self.coeffs[: n + 1], other.coeffs))

    def __neg__(self) -> QLaurentSeries:
        return QLaurentSeries(-c for c in self.coeffs)

    def __sub__(self, other: QLaurentSeries) -> QLaurentSeries:
        return self + (-other)

    def scale(self, c) -> QLaurentSeries:
        c = as_rational(c)
        return QLaurentSeries(c * a for a in self.coeffs)

    def div_z(self) -> QLaurentSeries:
        """Multiplication by ``1/z``; one more coefficient becomes known."""
        return QLaurentSeries((Fraction(0),) + self.coeffs)

    def sigma(self, r) -> QLaurentSeries:
        r = as_rational(r)
        return QLaurentSeries(c * r ** (-n - 1) for n, c in enumerate(self.coeffs))

    def delta(self, r) -> QLaurentSeries:
        """``delta_r``: ``z^(-n-1)`` goes to ``(-n-1)_r z^(-n-2)``."""
        r = as_rational(r)
        if r == 1:
            raise ValueError("ratio 1 has no q-derivative")
        return QLaurentSeries([Fraction(0)] + [c * _r_int(r, -n - 1) for n, c in enumerate(self.coeffs)])


def q_special_series(kind: str, ctx, trunc: int) -> FormalSeries:
    """``Tq``, ``Eq`` or ``Eq_product`` truncated at ``z^trunc``.

    ``Eq_product`` expands ``prod_{m >= 1} (1 + (q-1) z / q^m)`` without the
    series definition: the first ``trunc`` factors are multiplied out, and the
    remaining factors form a product ``P(z) = prod_{m >= 1} (1 + u t^m z)`` with
    ``t = 1/q``, whose coefficients follow from ``P(z) = (1 + u t z) P(t z)``:
    ``e_k = u t^k e_(k-1) / (1 - t^k)``. This is an identity of formal series
    in ``t``, so it is used for every admissible ``q``.
    """
    ctx = _ctx(ctx)
    q = ctx.q
    if trunc < 0:
        raise ValueError("truncation must be nonnegative")
    if kind == "Tq":
        return FormalSeries(q ** (-_tri(n)) for n in range(trunc + 1))
    if kind == "Eq":
        return FormalSeries(1 / ctx.q_factorial(n) for n in range(trunc + 1))
    if kind == "Eq_product":
        M = trunc
        head = FormalSeries.one(trunc)
        for m in range(1, M + 1):
            head = head * FormalSeries.polynomial([1, (q - 1) / q**m], trunc)
        t = 1 / q
        u = (q - 1) * t**M
        tail = [Fraction(1)]
        for k in range(1, trunc + 1):
            tail.append(u * t**k * tail[-1] / (1 - t**k))
        return head * FormalSeries(tail)
    raise ValueError(f"unknown series kind {kind!r}")


def q_laplace(F: FormalSeries, mode: str, ctx) -> QLaurentSeries:
    """``F^#`` (``mode='sharp'``) or ``F^+`` (``mode='plus'``) of the truncation."""
    ctx = _ctx(ctx)
    if mode == "sharp":
        return QLaurentSeries(ctx.q ** _tri(n) * a for n, a in enumerate(F.coeffs))
    if mode == "plus":
        return QLaurentSeries(ctx.q_factorial(n) * a for n, a in enumerate(F.coeffs))
    raise ValueError(f"mode must be 'sharp' or 'plus', not {mode!r}")


def sigma_delta_apply(op: str, ratio, f):
    """Apply ``sigma_ratio`` or ``delta_ratio`` to a power series or a Laurent tail."""
    r = as_rational(ratio)
    if r == 1 or r == 0:
        raise ValueError("ratio must be nonzero and different from 1")
    if op not in ("sigma", "delta"):
        raise ValueError(f"unknown operator {op!r}")
    if isinstance(f, QLaurentSeries):
        return f.sigma(r) if op == "sigma" else f.delta(r)
    if op == "sigma":
        return f.dilate(r)
    if f.order == 0:
        return FormalSeries.zero(0)
    return FormalSeries(c * _r_int(r, n) for n, c in enumerate(f.coeffs) if n > 0)


def apply_rational(op: str, ratio, f: RationalFunction) -> RationalFunction:
    """``sigma_ratio`` or ``delta_ratio`` acting on a rational function."""
    r = as_rational(ratio)
    shifted = f.dilate(r)
    if op == "sigma":
        return shifted
    return (shifted - f) / RationalFunction(Poly([0, r - 1]))


# ---------------------------------------------------------------- operators


class QDiffOp:
    """``sum_i c_i(z) sigma_q^i`` with rational-function coefficients.

    Powers of ``sigma_{1/q}`` are stored as negative powers of ``sigma_q``.
    """

    __slots__ = ("q", "terms")

    def __init__(self, q, terms: Mapping[int, RationalFunction | Poly | int | Fraction] | None = None):
        self.q = as_rational(q)
        if self.q in (0, 1, -1):
            raise ValueError("q must be nonzero and not a root of unity")
        clean = {}
        for i, c in (terms or {}).items():
            c = c if isinstance(c, RationalFunction) else RationalFunction(c)
            if c:
                clean[int(i)] = c
        self.terms: dict[int, RationalFunction] = clean

    @classmethod
    def const(cls, q, c) -> QDiffOp:
        return cls(q, {0: RationalFunction(as_rational(c))})

    @classmethod
    def coeff(cls, q, c: RationalFunction) -> QDiffOp:
        return cls(q, {0: c})

    @classmethod
    def sigma(cls, q, power: int = 1) -> QDiffOp:
        return cls(q, {power: RationalFunction(1)})

    @classmethod
    def sigma_ratio(cls, q, ratio) -> QDiffOp:
        """``sigma_ratio`` for ``ratio`` an integral power of ``q``."""
        k = q_log(as_rational(ratio), as_rational(q))
        if k is None:
            raise ValueError(f"{ratio} is not an integral power of q={q}")
        return cls.sigma(q, k)

    @classmethod
    def delta_ratio(cls, q, ratio) -> QDiffOp:
        r = as_rational(ratio)
        inv = RationalFunction(1, Poly([0, r - 1]))
        return cls.coeff(q, inv) * (cls.sigma_ratio(q, r) - cls.const(q, 1))

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, QDiffOp) and self.q == other.q and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.q, tuple(sorted(self.terms.items(), key=lambda t: t[0]))))

    def _check(self, other: QDiffOp) -> None:
        if self.q != other.q:
            raise ValueError("operators over different q")

    def __add__(self, other) -> QDiffOp:
        if not isinstance(other, QDiffOp):
            other = QDiffOp.const(self.q, other)
        self._check(other)
        out = dict(self.terms)
        for i, c in other.terms.items():
            out[i] = out.get(i, RationalFunction(0)) + c
        return QDiffOp(self.q, out)

    __radd__ = __add__

    def __neg__(self) -> QDiffOp:
        return QDiffOp(self.q, {i: -c for i, c in self.terms.items()})

    def __sub__(self, other) -> QDiffOp:
        if not isinstance(other, QDiffOp):
            other = QDiffOp.const(self.q, other)
        return self + (-other)

    def __rsub__(self, other) -> QDiffOp:
        return (-self) + other

    def __mul__(self, other) -> QDiffOp:
        if not isinstance(other, QDiffOp):
            other = QDiffOp.const(self.q, other)
        self._check(other)
        out: dict[int, RationalFunction] = {}
        for i, a in self.terms.items():
            for j, b in other.terms.items():
                # sigma^i b(z) = b(q^i z) sigma^i
                c = a * b.dilate(self.q**i)
                out[i + j] = out.get(i + j, RationalFunction(0)) + c
        return QDiffOp(self.q, out)

    def __rmul__(self, other) -> QDiffOp:
        return QDiffOp.const(self.q, other) * self

    def __pow__(self, k: int) -> QDiffOp:
        out = QDiffOp.const(self.q, 1)
        for _ in range(k):
            out = out * self
        return out

    def apply(self, f: RationalFunction) -> RationalFunction:
        total = RationalFunction(0)
        for i, c in self.terms.items():
            total = total + c * f.dilate(self.q**i)
        return total

    def __repr__(self) -> str:
        return f"QDiffOp(q={self.q}, {str(self)})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for i in sorted(self.terms, reverse=True):
            c = self.terms[i]
            if i == 0:
                parts.append(str(c))
                continue
            sig = f"S{{{self.q ** i}}}"
            parts.append(sig if c == 1 else f"{c}*{sig}")
        return " + ".join(parts)


def q_log(x: Fraction, q: Fraction) -> int | None:
    """The integer ``m`` with ``q^m == x``, if any."""
    x, q = as_rational(x), as_rational(q)
    if x == 0:
        return None
    if abs(q) < 1:
        m = q_log(x, 1 / q)
        return None if m is None else -m
    # |q| > 1: |q^m| is strictly increasing in m
    m, lo = 0, Fraction(1)
    if abs(x) >= 1:
        while abs(lo) < abs(x):
            lo *= q
            m += 1
    else:
        while abs(lo) > abs(x):
            lo /= q
            m -= 1
    return m if lo == x else None


def homogenize_q(A: QDiffOp, rhs: RationalFunction) -> QDiffOp:
    """An operator killing every solution of ``A y = rhs``.

    ``rhs(z) sigma_q - rhs(q z)`` annihilates ``rhs``; it is composed on the left.
    """
    if not rhs:
        return A
    K = QDiffOp(A.q, {1: rhs, 0: -rhs.dilate(A.q)})
    return K * A


def qdiff_newton_polygon(A: QDiffOp, rhs: RationalFunction | None = None) -> NewtonPolygon:
    """Newton polygon at infinity of ``sum c_i(z) sigma_q^i``.

    At infinity the dominant terms are those of largest degree, so the
    polygon is the upper boundary of the points ``(i, deg c_i)``; its slopes
    are reported in increasing order. With a nonzero ``rhs`` the polygon is
    that of the homogenized equation ``A y = rhs``.
    """
    if A.is_zero():
        raise ValueError("zero operator")
    B = homogenize_q(A, rhs) if rhs else A
    # upper hull of (i, deg) = lower hull of (i, -deg) with slopes negated
    flipped = {i: -c.degree() for i, c in B.terms.items()}
    edges = [(-s, n) for s, n in lower_hull_edges(flipped)]
    return NewtonPolygon(tuple(sorted(edges)), "inf")


# ---------------------------------------------------------------- division


def transform_rational(beta: Sequence, alpha: Sequence) -> PartialFraction:
    """``beta_0/z + sum beta_j/(z - alpha_j)``: the common shape of ``F^#`` and ``F^+``."""
    beta = [as_rational(b) for b in beta]
    alpha = [as_rational(a) for a in alpha]
    if len(beta) != len(alpha) + 1:
        raise ValueError("need len(beta) == len(alpha) + 1")
    acc: dict[Fraction, Fraction] = {}
    for a, b in zip([Fraction(0)] + alpha, beta):
        acc[a] = acc.get(a, Fraction(0)) + b
    return PartialFraction(Poly(), tuple(PolePart(a, b) for a, b in acc.items()))


def _moments(beta, alpha, n: int) -> list[Fraction]:
    """``A_k = sum_j beta_j alpha_j^k`` with the convention ``alpha_0^k = [k == 0]``."""
    out = []
    for k in range(n + 1):
        s = beta[0] if k == 0 else Fraction(0)
        for a, b in zip(alpha, beta[1:]):
            s += b * a**k
        out.append(s)
    return out


def _check_alpha(alpha) -> list[Fraction]:
    alpha = [as_rational(a) for a in alpha]
    if any(a == 0 for a in alpha):
        raise ValueError("alpha_j must be nonzero")
    if len(set(alpha)) != len(alpha):
        raise ValueError("coincident alpha_j")
    return alpha


def source_series(beta, alpha, ctx, mode: str, trunc: int) -> FormalSeries:
    """``F = beta_0 + sum beta_j S(alpha_j z)`` with ``S = T_q`` (sharp) or ``E_q`` (plus)."""
    ctx = _ctx(ctx)
    beta = [as_rational(b) for b in beta]
    alpha = [as_rational(a) for a in alpha]
    kind = "Tq" if mode == "sharp" else "Eq"
    base = q_special_series(kind, ctx, trunc)
    out = FormalSeries.polynomial([beta[0]], trunc)
    for a, b in zip(alpha, beta[1:]):
        out = out + base.dilate(a).scale(b)
    return out


def q_divide_transform(beta, alpha, xi, ctx, mode: str, N: int) -> QLaurentSeries:
    """``G^#`` or ``G^+`` for ``G = F/(z - xi)``, coefficients of ``z^(-n-1)``, ``n <= N``.

    With ``A_k`` as in :func:`_moments`,
    ``h_n = -sum_{k<=n} w(n, k) xi^(k-n-1) A_k`` where
    ``w = q^((n(n-1) - k(k-1))/2)`` in sharp mode and ``n_q!/k_q!`` in plus mode.
    """
    ctx = _ctx(ctx)
    alpha = _check_alpha(alpha)
    beta = [as_rational(b) for b in beta]
    if len(beta) != len(alpha) + 1:
        raise ValueError("need len(beta) == len(alpha) + 1")
    xi = as_rational(xi)
    if xi == 0:
        raise ValueError("xi must be nonzero")
    if mode not in ("sharp", "plus"):
        raise ValueError(f"mode must be 'sharp' or 'plus', not {mode!r}")
    A = _moments(beta, alpha, N)
    q = ctx.q
    out = []
    for n in range(N + 1):
        s = Fraction(0)
        for k in range(n + 1):
            if not A[k]:
                continue
            if mode == "sharp":
                w = q ** (_tri(n) - _tri(k))
            else:
                w = ctx.q_factorial(n) / ctx.q_factorial(k)
            s += w * xi ** (k - n - 1) * A[k]
        out.append(-s)
    return QLaurentSeries(out)


def divide_relation_residual(H: QLaurentSeries, beta, alpha, xi, ctx, mode: str) -> QLaurentSeries:
    """``L H - F^T`` with ``L = (1/(qz)) sigma_{1/q} - xi`` (sharp) or ``-(1/q) delta_{1/q} - xi`` (plus)."""
    ctx = _ctx(ctx)
    q = ctx.q
    xi = as_rational(xi)
    if mode == "sharp":
        LH = H.sigma(1 / q).div_z().scale(1 / q)
    else:
        LH = H.delta(1 / q).scale(-1 / q)
    LH = LH - H.scale(xi)
    F = QLaurentSeries(transform_rational(beta, alpha).laurent_at_infinity(LH.order))
    return LH - F


def iterated_delta_partial_fraction(alpha, n: int, ctx) -> RationalFunction:
    """``((1/q) delta_{1/q})^n 1/(z - alpha) = (-1)^n n_q! / prod_{i=0}^{n} (z - alpha q^i)``."""
    ctx = _ctx(ctx)
    alpha = as_rational(alpha)
    if alpha == 0:
        raise ValueError("alpha must be nonzero")
    if n < 0:
        raise ValueError("n must be nonnegative")
    den = Poly.from_roots(alpha * ctx.q**i for i in range(n + 1))
    return RationalFunction(Poly.const((-1) ** n * ctx.q_factorial(n)), den)


def literal_iterated_delta(alpha, n: int, ctx) -> RationalFunction:
    """The same quantity by ``n`` literal applications of ``(1/q) delta_{1/q}``."""
    ctx = _ctx(ctx)
    f = RationalFunction(1, Poly([-as_rational(alpha), 1]))
    for _ in range(n):
        f = apply_rational("delta", 1 / ctx.q, f) * (1 / ctx.q)
    return f


# ---------------------------------------------------------------- the gamma equation


@dataclass
class Lemma454Result:
    status: str
    alpha: Fraction
    xi: Fraction
    q: Fraction
    M: int
    N: int
    gammas: dict[int, Fraction] = field(default_factory=dict)
    certificate: dict | None = None
    closed_form_m: int | None = None
    verified: bool = False

    def to_json(self) -> dict:
        out = {
            "status": self.status,
            "alpha": str(self.alpha),
            "xi": str(self.xi),
            "q": str(self.q),
            "window": [-self.M, self.N],
            "closed_form_m": self.closed_form_m,
        }
        if self.status == "SOLVABLE":
            out["gamma"] = {str(n): str(g) for n, g in sorted(self.gammas.items())}
            out["verified"] = self.verified
        if self.certificate is not None:
            out["certificate"] = self.certificate
        return out


def closed_form_exponent(alpha, xi, ctx) -> int | None:
    """``m > 0`` with ``alpha xi (1 - q) = q^m``, or ``None``."""
    ctx = _ctx(ctx)
    x = as_rational(alpha) * as_rational(xi) * (1 - ctx.q)
    m = q_log(x, ctx.q)
    return m if m is not None and m > 0 else None


def lemma454_apply(gammas: Mapping[int, Fraction], alpha, xi, ctx) -> RationalFunction:
    """``(-(1/q) delta_{1/q} - xi) sum gamma_n / (z - alpha q^n)``, computed literally."""
    ctx = _ctx(ctx)
    alpha, xi = as_rational(alpha), as_rational(xi)
    f = RationalFunction(0)
    for n, g in gammas.items():
        if g:
            f = f + RationalFunction(Poly.const(g), Poly([-alpha * ctx.q**n, 1]))
    return apply_rational("delta", 1 / ctx.q, f) * (-1 / ctx.q) - f * xi


def lemma454_solve(alpha, xi, ctx, M: int, N: int) -> Lemma454Result:
    """Solve ``1/(z - alpha) = (-(1/q) delta_{1/q} - xi) sum_{n=-M}^{N} gamma_n/(z - alpha q^n)``.

    Since ``(-(1/q) delta_{1/q}) 1/(z - a) = (1/(z - a) - 1/(z - a q)) / (a (1 - q))``,
    matching the coefficient of ``1/(z - alpha q^n)`` for ``-M <= n <= N + 1``
    gives a linear system in the ``gamma_n``; it is solved exactly. An
    inconsistent system yields a certificate: a combination ``y`` of the
    equations with ``y A = 0`` and ``y b != 0``. ``UNSOLVABLE_WINDOW`` marks
    the case where the closed-form condition holds but the window is too small.
    """
    ctx = _ctx(ctx)
    q = ctx.q
    alpha, xi = as_rational(alpha), as_rational(xi)
    if alpha == 0 or xi == 0:
        raise ValueError("alpha and xi must be nonzero")
    if M < 0 or N < 0:
        raise ValueError("window bounds must be nonnegative")
    idx = list(range(-M, N + 1))
    eq_idx = list(range(-M, N + 2))
    ncols = len(idx)
    rows = []
    rhs = []
    for n in eq_idx:
        row = [Fraction(0)] * ncols
        a_n = alpha * q**n
        if n <= N:
            row[idx.index(n)] = 1 / (a_n * (1 - q)) - xi
        if n - 1 >= -M:
            row[idx.index(n - 1)] = -1 / (alpha * q ** (n - 1) * (1 - q))
        rows.append(row)
        rhs.append(Fraction(1 if n == 0 else 0))
    m_closed = closed_form_exponent(alpha, xi, ctx)
    result = Lemma454Result("UNSOLVABLE", alpha, xi, q, M, N, closed_form_m=m_closed)
    aug = [r + [b] for r, b in zip(rows, rhs)]
    red, piv = rref(aug, ncols + 1)
    if ncols in piv:
        # certificate: left kernel vector y of the coefficient matrix with y.b != 0
        transpose = [[rows[i][j] for i in range(len(rows))] for j in range(ncols)]
        left = kernel(transpose, len(rows))
        for y in left:
            yb = sum((a * b for a, b in zip(y, rhs)), Fraction(0))
            if yb:
                result.certificate = {
                    "equations": [f"1/(z - alpha*q^{n})" for n in eq_idx],
                    "combination": [str(c) for c in y],
                    "value": str(yb),
                }
                break
        if m_closed is not None:
            result.status = "UNSOLVABLE_WINDOW"
        return result
    sol = [Fraction(0)] * ncols
    for r, c in zip(red, piv):
        sol[c] = r[ncols]
    result.status = "SOLVABLE"
    result.gammas = {n: g for n, g in zip(idx, sol)}
    lhs = lemma454_apply(result.gammas, alpha, xi, ctx)
    result.verified = lhs == RationalFunction(1, Poly([-alpha, 1]))
    return result


# ---------------------------------------------------------------- theta


@dataclass
class ThetaReport:
    c: Fraction
    xi: Fraction
    N: int
    bilateral: Fraction
    two_t: Fraction
    tail_bilateral: Fraction
    tail_two_t: Fraction
    gap: Fraction
    shrinking: bool

    @property
    def passed(self) -> bool:
        return self.gap <= self.tail_bilateral + self.tail_two_t and self.shrinking

    def to_json(self) -> dict:
        return {
            "c": str(self.c),
            "xi": str(self.xi),
            "N": self.N,
            "bilateral": str(self.bilateral),
            "two_t": str(self.two_t),
            "gap": str(self.gap),
            "tail_bound": str(self.tail_bilateral + self.tail_two_t),
            "tail_bound_log2_floor": _floor_log2(self.tail_bilateral + self.tail_two_t),
            "verdict": "PASS" if self.passed else "FAIL",
        }


def _floor_log2(x: Fraction) -> int | None:
    """Exact ``floor(log2 x)`` for a positive rational."""
    if x <= 0:
        return None
    e = x.numerator.bit_length() - x.denominator.bit_length()
    while Fraction(2) ** e > x:
        e -= 1
    while Fraction(2) ** (e + 1) <= x:
        e += 1
    return e


def tschakaloff_partial(ratio, w, N: int) -> Fraction:
    """``sum_{n<N} ratio^(-n(n-1)/2) w^n``, the first ``N`` terms of ``T_ratio(w)``."""
    ratio, w = as_rational(ratio), as_rational(w)
    total, power = Fraction(0), Fraction(1)
    for n in range(N):
        total += ratio ** (-_tri(n)) * power
        power *= w
    return total


def _one_sided_tail(c: Fraction, x: Fraction, N: int) -> Fraction:
    """Bound for ``sum_{n >= N} |c|^(n(n+1)/2) |x|^n``.

    Successive terms have ratio ``|c|^(n+1) |x|``, which is decreasing in
    ``n``; once it drops below 1 the tail is at most a geometric series.
    """
    c, x = abs(c), abs(x)
    n = N
    extra = Fraction(0)
    # add terms exactly until the ratio is below 1/2
    while c ** (n + 1) * x >= Fraction(1, 2):
        extra += c ** (n * (n + 1) // 2) * x**n
        n += 1
    return extra + 2 * c ** (n * (n + 1) // 2) * x**n


def theta_bilateral_check(c, xi, N: int) -> ThetaReport:
    """Compare ``sum_{n=-N}^{N-1} c^(n(n+1)/2) xi^n`` with ``T_{1/c}(c xi) + T_{1/c}(c/xi)/xi``.

    Both truncations cover the same index set, so the exact gap should be
    zero; the tail bounds enclose the full bilateral sum. PASS requires the
    gap to be within the bounds and the bound at ``2N`` to be smaller.
    """
    c, xi = as_rational(c), as_rational(xi)
    if c == 0 or abs(c) >= 1:
        raise ValueError("need 0 < |c| < 1")
    if xi == 0:
        raise ValueError("xi must be nonzero")
    if N < 1:
        raise ValueError("N must be positive")
    bil = sum((c ** (n * (n + 1) // 2) * xi**n for n in range(-N, N)), Fraction(0))
    inv = 1 / c
    two_t = tschakaloff_partial(inv, c * xi, N) + tschakaloff_partial(inv, c / xi, N) / xi
    # the negative side, n = -m-1, is sum_m c^(m(m+1)/2) xi^(-m-1)
    tail = _one_sided_tail(c, xi, N) + _one_sided_tail(c, 1 / xi, N) / abs(xi)
    tail2 = _one_sided_tail(c, xi, 2 * N) + _one_sided_tail(c, 1 / xi, 2 * N) / abs(xi)
    return ThetaReport(c, xi, N, bil, two_t, tail, tail, abs(bil - two_t), tail2 < tail)


# ---------------------------------------------------------------- profile


@dataclass
class QGevreyProfile:
    s: Fraction
    roots: list[float]
    bounded_above: bool
    bounded_below: bool

    @property
    def precise(self) -> bool:
        return self.bounded_above and self.bounded_below

    def to_json(self) -> dict:
        return {
            "s": str(self.s),
            "bounded_above": self.bounded_above,
            "bounded_below": self.bounded_below,
            "precise": self.precise,
        }


def q_gevrey_profile(f: FormalSeries, ctx, s, tolerance: float = 1.25) -> QGevreyProfile:
    """Finite-window test of ``a_n q^(s n(n-1)/2)`` having exponential size.

    Uses ``rho_n = |a'_n|^(1/n)`` over the nonzero coefficients; bounded above
    (below) means the late half never exceeds (drops under) the early half
    by more than ``tolerance``. Both together mean ``s`` is the precise order.
    """
    ctx = _ctx(ctx)
    s = as_rational(s)
    logs = []
    lq = math.log(abs(ctx.q.numerator)) - math.log(abs(ctx.q.denominator))
    for n, a in enumerate(f.coeffs):
        if n and a:
            la = math.log(abs(a.numerator)) - math.log(a.denominator)
            logs.append((n, (la + float(s) * _tri(n) * lq) / n))
    if len(logs) < 4:
        raise ValueError("too few nonzero coefficients")
    half = len(logs) // 2
    early = [v for _, v in logs[:half]]
    late = [v for _, v in logs[half:]]
    lt = math.log(tolerance)
    above = max(late) <= max(max(early), 0.0) + lt
    below = min(late) >= min(min(early), 0.0) - lt
    return QGevreyProfile(s, [math.exp(v) for _, v in logs], above, below)
