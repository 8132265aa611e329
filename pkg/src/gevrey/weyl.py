"""Linear differential operators with polynomial coefficients.

Operators live in the Weyl algebra ``Q[z, D]`` with ``D z = z D + 1`` and are
stored in normal order: a map ``(i, j) -> c`` for the monomial ``c z^i D^j``.
Much of the analysis goes through the *theta form*
``sum_a z^a P_a(theta)`` with ``theta = z D``; there ``a`` may be negative
since ``z^i D^j = z^(i-j) theta (theta - 1) ... (theta - j + 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping

from .exact import as_rational
from .pfrac import PartialFraction, PolePart
from .poly import Poly, falling, poly_gcd_many, rising
from .series import FormalSeries, gevrey_weight


class DiffOp:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None):
        clean = {}
        for (i, j), c in (terms or {}).items():
            if i < 0 or j < 0:
                raise ValueError("negative exponent in a normal-ordered monomial")
            c = as_rational(c)
            if c:
                clean[(i, j)] = c
        self.terms: dict[tuple[int, int], Fraction] = clean

    @classmethod
    def z(cls) -> DiffOp:
        return cls({(1, 0): 1})

    @classmethod
    def D(cls) -> DiffOp:
        return cls({(0, 1): 1})

    @classmethod
    def const(cls, c) -> DiffOp:
        return cls({(0, 0): c})

    @classmethod
    def theta(cls) -> DiffOp:
        return cls({(1, 1): 1})

    @classmethod
    def from_coefficients(cls, coeffs: Iterable[Poly]) -> DiffOp:
        """``sum_j coeffs[j](z) D^j``."""
        return cls({(i, j): c for j, p in enumerate(coeffs) for i, c in enumerate(p.coeffs)})

    @property
    def order(self) -> int:
        return max((j for _, j in self.terms), default=-1)

    @property
    def degree(self) -> int:
        return max((i for i, _ in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, j: int) -> Poly:
        """Polynomial coefficient of ``D^j``."""
        deg = max((i for i, jj in self.terms if jj == j), default=-1)
        return Poly(self.terms.get((i, j), 0) for i in range(deg + 1))

    def leading_coefficient(self) -> Poly:
        return self.coefficient(self.order)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = DiffOp.const(other)
        return isinstance(other, DiffOp) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        return f"DiffOp({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = ""
        for (i, j) in sorted(self.terms, key=lambda t: (-t[1], -t[0])):
            c = self.terms[(i, j)]
            mono = "*".join(
                x for x in ((("z" if i == 1 else f"z^{i}") if i else ""), (("D" if j == 1 else f"D^{j}") if j else "")) if x
            )
            mag = abs(c)
            body = mono if (mono and mag == 1) else (f"{mag}*{mono}" if mono else str(mag))
            if not out:
                out = ("-" if c < 0 else "") + body
            else:
                out += (" - " if c < 0 else " + ") + body
        return out

    def _coerce(self, other) -> DiffOp:
        if isinstance(other, DiffOp):
            return other
        if isinstance(other, (int, Fraction)):
            return DiffOp.const(other)
        return NotImplemented

    def __add__(self, other) -> DiffOp:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return DiffOp(out)

    __radd__ = __add__

    def __neg__(self) -> DiffOp:
        return DiffOp({k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> DiffOp:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> DiffOp:
        return (-self) + other

    def __mul__(self, other) -> DiffOp:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return weyl_multiply(self, other)

    def __rmul__(self, other) -> DiffOp:
        return weyl_multiply(self._coerce(other), self)

    def __pow__(self, k: int) -> DiffOp:
        out = DiffOp.const(1)
        for _ in range(k):
            out = out * self
        return out

    def scale(self, c) -> DiffOp:
        c = as_rational(c)
        return DiffOp({k: c * v for k, v in self.terms.items()})

    def normalized(self) -> DiffOp:
        """Primitive integer coefficients, leading monomial (max order, then max degree) positive."""
        if not self.terms:
            return self
        lead = max(self.terms, key=lambda t: (t[1], t[0]))
        from math import gcd, lcm

        den = lcm(*(c.denominator for c in self.terms.values()))
        g = gcd(*(int(c * den) for c in self.terms.values()))
        s = Fraction(den, g) * (1 if self.terms[lead] > 0 else -1)
        return self.scale(s)

    def strip_left_z(self) -> DiffOp:
        """Remove the largest left factor ``z^k`` (same power-series solutions)."""
        if not self.terms:
            return self
        k = min(i for i, _ in self.terms)
        return DiffOp({(i - k, j): c for (i, j), c in self.terms.items()})

    def translate(self, xi) -> DiffOp:
        """Rewrite in the variable ``w = z - xi`` (``D`` is unchanged)."""
        xi = as_rational(xi)
        out: dict[tuple[int, int], Fraction] = {}
        for (i, j), c in self.terms.items():
            for k in range(i + 1):
                key = (k, j)
                out[key] = out.get(key, Fraction(0)) + c * comb(i, k) * xi ** (i - k)
        return DiffOp(out)

    def theta_form(self) -> dict[int, Poly]:
        return to_theta_form(self)


@lru_cache(maxsize=None)
def _falling_theta(j: int) -> Poly:
    return falling(Poly.x(), j)


@lru_cache(maxsize=None)
def _stirling2(k: int, l: int) -> int:
    if k == l:
        return 1
    if l == 0 or l > k:
        return 0
    return l * _stirling2(k - 1, l) + _stirling2(k - 1, l - 1)


def weyl_multiply(A: DiffOp, B: DiffOp) -> DiffOp:
    """Product in normal order, using ``D^b z^c = sum_k C(b,k) c!/(c-k)! z^(c-k) D^(b-k)``."""
    out: dict[tuple[int, int], Fraction] = {}
    for (a, b), x in A.terms.items():
        for (c, d), y in B.terms.items():
            ff = 1
            for k in range(min(b, c) + 1):
                if k:
                    ff *= c - k + 1
                key = (a + c - k, b - k + d)
                out[key] = out.get(key, Fraction(0)) + x * y * comb(b, k) * ff
    return DiffOp(out)


def to_theta_form(A: DiffOp) -> dict[int, Poly]:
    out: dict[int, Poly] = {}
    for (i, j), c in A.terms.items():
        a = i - j
        out[a] = out.get(a, Poly()) + _falling_theta(j).scale(c)
    return {a: p for a, p in out.items() if p}


def from_theta_form(form: Mapping[int, Poly], allow_shift: bool = True) -> DiffOp:
    """Normal form of ``sum_a z^a P_a(theta)``.

    ``z^a theta^k = sum_l S(k, l) z^(a+l) D^l``. If negative powers of ``z``
    remain, the result is left-multiplied by the needed power of ``z``.
    """
    acc: dict[tuple[int, int], Fraction] = {}
    for a, p in form.items():
        for k, c in enumerate(p.coeffs):
            if not c:
                continue
            for l in range(k + 1):
                s = _stirling2(k, l)
                if s:
                    key = (a + l, l)
                    acc[key] = acc.get(key, Fraction(0)) + c * s
    acc = {k: v for k, v in acc.items() if v}
    low = min((i for i, _ in acc), default=0)
    if low < 0:
        if not allow_shift:
            raise ValueError("theta form is not an operator with polynomial coefficients")
        acc = {(i - low, j): v for (i, j), v in acc.items()}
    return DiffOp(acc)


def apply_op(A: DiffOp, f: FormalSeries) -> FormalSeries:
    """``A f`` as a truncated series; the known order drops to ``min(N - j + i)``."""
    if A.is_zero():
        return FormalSeries.zero(f.order)
    if f.order < A.order:
        raise ValueError(f"truncation order {f.order} is below the operator order {A.order}")
    N = f.order
    valid = min(N - j + i for i, j in A.terms)
    out = [Fraction(0)] * (valid + 1)
    c = f.coeffs
    for (i, j), a in A.terms.items():
        for m in range(i, valid + 1):
            n = m - i + j
            if n <= N and c[n]:
                out[m] += a * _falling_int(n, j) * c[n]
    return FormalSeries(out)


def _falling_int(n: int, j: int) -> int:
    out = 1
    for k in range(j):
        out *= n - k
    return out


@dataclass(frozen=True)
class Recurrence:
    """``sum_t polys[t](n) u_(n+t) = 0`` for ``n >= offset`` (``u_k = 0`` for ``k < 0``)."""

    polys: tuple[Poly, ...]
    offset: int

    @property
    def span(self) -> int:
        return len(self.polys) - 1

    def residual(self, u, n: int) -> Fraction:
        total = Fraction(0)
        for t, p in enumerate(self.polys):
            k = n + t
            if 0 <= k < len(u):
                total += p(n) * u[k]
        return total

    def holds_for(self, u) -> bool:
        """Check every instance whose indices fall inside ``u``."""
        return all(self.residual(u, n) == 0 for n in range(self.offset, len(u) - self.span))

    def to_json(self) -> dict:
        return {"offset": self.offset, "polys": [[str(c) for c in p.coeffs] for p in self.polys]}

    def __str__(self) -> str:
        parts = []
        for t, p in enumerate(self.polys):
            if p:
                idx = "n" if t == 0 else f"n+{t}"
                parts.append(f"({p.to_string('n')})*u[{idx}]")
        return " + ".join(parts) + f" = 0  (n >= {self.offset})"


def op_to_recurrence(A: DiffOp) -> Recurrence:
    if A.is_zero():
        raise ValueError("zero operator has no recurrence")
    form = to_theta_form(A)
    top = max(form)
    low = min(form)
    polys = []
    for t in range(top - low + 1):
        p = form.get(top - t)
        polys.append(p.shift(t) if p else Poly())
    return Recurrence(tuple(polys), -top)


def recurrence_to_op(R: Recurrence) -> DiffOp:
    if not any(R.polys):
        raise ValueError("zero recurrence has no operator")
    top = -R.offset
    form = {top - t: p.shift(-t) for t, p in enumerate(R.polys) if p}
    return from_theta_form(form)


def _nonneg_theta_form(A: DiffOp) -> dict[int, Poly]:
    form = to_theta_form(A)
    low = min(form)
    if low < 0:
        form = {a - low: p for a, p in form.items()}
    return form


def _remove_theta_content(form: dict[int, Poly]) -> dict[int, Poly]:
    """Drop a left factor ``C(theta)`` without changing power-series solutions.

    ``z^a q_a(theta) = C(theta) z^a q'_a(theta)`` needs ``C(theta) | q_a(theta - a)``.
    Factors of ``C`` without nonnegative integer roots are always removable; a
    root ``r >= 0`` is removable when every ``q'_a(r - a)``, ``0 <= a <= r``,
    vanishes, since then the ``z^r`` coefficient of ``A' f`` is identically zero.
    """
    g = poly_gcd_many(p.shift(-a) for a, p in form.items())
    if g.degree <= 0:
        return form
    keep = Poly([1])
    candidate = g
    for r, mult in g.rational_roots():
        if r.denominator == 1 and r >= 0:
            factor = Poly([-r, 1]) ** mult
            reduced = {a: p.exact_div(candidate.shift(a)) for a, p in form.items()}
            safe = all(reduced[a](r - a) == 0 for a in reduced if 0 <= a <= r)
            if not safe:
                keep = keep * factor
    C = g.exact_div(keep)
    return {a: p.exact_div(C.shift(a)) for a, p in form.items()}


def borel_transfer(A: DiffOp, s: int, simplify: bool = True) -> DiffOp:
    """Operator for the normalized series ``sum a_n z^n`` given ``A`` for ``sum n!^s a_n z^n``.

    With ``A`` in nonnegative theta form ``sum_a z^a P_a(theta)`` of top power
    ``I``, the transferred operator is ``sum_a z^a P_a(theta) W_a(theta)`` with
    ``W_a = ((theta+1)...(theta+a))^|s|`` for ``s < 0`` and
    ``W_a = (theta (theta-1) ... (theta-I+a+1))^s`` for ``s > 0``.
    """
    if not isinstance(s, int) or isinstance(s, bool):
        s_r = as_rational(s)
        if s_r.denominator != 1:
            raise ValueError("borel_transfer is defined for integral s only")
        s = int(s_r)
    if s == 0:
        raise ValueError("s must be nonzero")
    if A.is_zero():
        raise ValueError("zero operator")
    form = _nonneg_theta_form(A)
    top = max(form)
    th = Poly.x()
    out = {}
    for a, p in form.items():
        if s < 0:
            w = rising(th + 1, a) ** (-s)
        else:
            w = falling(th, top - a) ** s
        out[a] = p * w
    if simplify:
        out = _remove_theta_content(out)
    op = from_theta_form(out).strip_left_z()
    return op.normalized() if simplify else op


@dataclass(frozen=True)
class IndicialData:
    point: Fraction
    polynomial: Poly
    exponents: tuple[tuple[Fraction, int], ...]

    @property
    def all_rational(self) -> bool:
        return sum(m for _, m in self.exponents) == self.polynomial.degree

    def to_json(self) -> dict:
        return {
            "point": str(self.point),
            "polynomial": [str(c) for c in self.polynomial.coeffs],
            "exponents": [{"value": str(r), "multiplicity": m} for r, m in self.exponents],
            "all_rational": self.all_rational,
        }


def _local_theta_form(A: DiffOp, xi) -> dict[int, Poly]:
    return to_theta_form(A.translate(xi))


def indicial_polynomial(A: DiffOp, xi) -> IndicialData:
    if A.is_zero():
        raise ValueError("zero operator")
    xi = as_rational(xi)
    form = _local_theta_form(A, xi)
    poly = form[min(form)].primitive()
    return IndicialData(xi, poly, tuple(poly.rational_roots()))


@dataclass(frozen=True)
class SingularPoints:
    leading: Poly
    roots: tuple[tuple[Fraction, int], ...]

    @property
    def points(self) -> list[Fraction]:
        return [r for r, _ in self.roots]


def singular_points(A: DiffOp) -> SingularPoints:
    if A.is_zero():
        raise ValueError("zero operator")
    lead = A.leading_coefficient()
    return SingularPoints(lead, tuple(lead.rational_roots()))


@dataclass(frozen=True)
class NewtonPolygon:
    """Edges ``(slope, length)`` in increasing slope order."""

    edges: tuple[tuple[Fraction, int], ...]
    location: str

    @property
    def slopes(self) -> list[Fraction]:
        return [s for s, _ in self.edges]

    @property
    def is_regular(self) -> bool:
        return all(s == 0 for s in self.slopes)

    def to_json(self) -> dict:
        return {
            "location": self.location,
            "slopes": [_num_json(s) for s in self.slopes],
            "edges": [{"slope": _num_json(s), "length": n} for s, n in self.edges],
            "regular": self.is_regular,
        }


def _num_json(x: Fraction):
    return int(x) if x.denominator == 1 else str(x)


def lower_hull_edges(points: Mapping[int, int | Fraction]) -> list[tuple[Fraction, int]]:
    """Edges of the lower convex hull, left to right, over the given abscissae."""
    pts = sorted((x, Fraction(y)) for x, y in points.items())
    hull: list[tuple[int, Fraction]] = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point unless it lies strictly below the chord
            if (y2 - y1) * (p[0] - x1) >= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    edges: list[tuple[Fraction, int]] = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slope = (y2 - y1) / (x2 - x1)
        if edges and edges[-1][0] == slope:
            edges[-1] = (slope, edges[-1][1] + x2 - x1)
        else:
            edges.append((slope, x2 - x1))
    return edges


def newton_polygon(A: DiffOp, at: str | int = 0) -> NewtonPolygon:
    """Newton polygon at ``0`` or ``"inf"``.

    Built from the theta form ``sum_k b_k(z) theta^k``: at 0 the points are
    ``(k, ord_0 b_k)``, at infinity ``(k, -deg b_k)``. The polygon is the lower
    boundary of the union of the quadrants to the upper left of the points, so
    it starts with a horizontal edge of length ``j0`` (the last index reaching
    the minimal height) followed by edges of positive slope.
    """
    if A.is_zero():
        raise ValueError("zero operator")
    loc = "inf" if str(at).lower() in ("inf", "infinity", "oo") else "0"
    if loc == "0" and str(at) != "0":
        raise ValueError(f"unsupported location {at!r}")
    by_power: dict[int, dict[int, Fraction]] = {}
    for a, p in to_theta_form(A).items():
        for k, c in enumerate(p.coeffs):
            if c:
                by_power.setdefault(k, {})[a] = by_power.get(k, {}).get(a, Fraction(0)) + c
    heights = {}
    for k, coeffs in by_power.items():
        support = [a for a, c in coeffs.items() if c]
        if support:
            heights[k] = min(support) if loc == "0" else -max(support)
    vmin = min(heights.values())
    j0 = max(k for k, v in heights.items() if v == vmin)
    edges: list[tuple[Fraction, int]] = []
    if j0 > 0:
        edges.append((Fraction(0), j0))
    right = {k: v for k, v in heights.items() if k >= j0}
    edges.extend(lower_hull_edges(right))
    return NewtonPolygon(tuple(edges), loc)


@dataclass
class SingularityVerdict:
    verdict: str
    dimension: int | None
    order: int
    point: Fraction
    vanish_order: int
    indicial: IndicialData
    basis: list[FormalSeries] = field(default_factory=list)
    note: str = ""

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "dimension": self.dimension,
            "order": self.order,
            "point": str(self.point),
            "vanish_order": self.vanish_order,
            "indicial": self.indicial.to_json(),
            "note": self.note,
        }


def local_solutions(A: DiffOp, xi, vanish_order: int, trunc: int) -> tuple[int, list[FormalSeries]]:
    """Formal power-series solutions at ``xi`` with valuation ``>= vanish_order``.

    Runs the local recurrence ``P_low(n) u_n = -sum_{a > low} P_a(n + low - a) u_(n+low-a)``
    with symbolic free parameters at the nonnegative integer roots of the
    indicial polynomial ``P_low``. Past the largest such root every coefficient
    is determined, so the returned dimension is exact; the basis is truncated
    at ``trunc`` (in powers of ``z - xi``).
    """
    form = _local_theta_form(A, xi)
    low = min(form)
    ind = form[low]
    roots = [int(r) for r, _ in ind.rational_roots() if r.denominator == 1 and r >= 0]
    stop = max([vanish_order] + [r + 1 for r in roots])
    trunc = max(trunc, stop)
    others = [(a - low, p) for a, p in form.items() if a != low]

    # coefficients as vectors over the free parameters
    u: list[list[Fraction]] = []
    nparams = 0
    constraints: list[list[Fraction]] = []

    def pad(v, n):
        return v + [Fraction(0)] * (n - len(v))

    for n in range(trunc + 1):
        rhs = [Fraction(0)] * nparams
        for d, p in others:
            k = n - d
            if k >= 0:
                c = p(n - d)
                if c:
                    for idx, val in enumerate(u[k]):
                        rhs[idx] -= c * val
        lead = ind(n)
        if n < vanish_order or lead == 0:
            if any(rhs):
                constraints.append(rhs)
            if n >= vanish_order and lead == 0:
                nparams += 1
                u = [pad(v, nparams) for v in u]
                constraints = [pad(c, nparams) for c in constraints]
                new = [Fraction(0)] * nparams
                new[-1] = Fraction(1)
                u.append(new)
            else:
                u.append([Fraction(0)] * nparams)
        else:
            u.append([x / lead for x in rhs])
    from .linalg import kernel

    if nparams == 0:
        return 0, []
    rows = [pad(c, nparams) for c in constraints]
    ker = kernel(rows, nparams) if rows else [[Fraction(int(i == j)) for i in range(nparams)] for j in range(nparams)]
    basis = []
    for vec in ker:
        basis.append(FormalSeries(sum((a * b for a, b in zip(pad(row, nparams), vec)), Fraction(0)) for row in u))
    return len(ker), basis


def trivial_singularity_check(A: DiffOp, xi, vanish_order: int = 1, trunc: int | None = None) -> SingularityVerdict:
    """Is there a full basis of solutions in ``(z - xi)^N Q[[z - xi]]``?

    PASS iff the exact dimension from :func:`local_solutions` equals the
    order of ``A``. The returned basis, truncated at ``trunc``, is re-checked
    against ``A``; that part is evidence about the truncation only.
    """
    if A.is_zero():
        raise ValueError("zero operator")
    xi = as_rational(xi)
    r = A.order
    if trunc is None:
        trunc = 4 * (r + vanish_order) + 20
    ind = indicial_polynomial(A, xi)
    singular = A.leading_coefficient()(xi) == 0
    if singular and not ind.all_rational:
        return SingularityVerdict("INDETERMINATE", None, r, xi, vanish_order, ind, note="non-rational exponents")
    dim, basis = local_solutions(A, xi, vanish_order, trunc)
    local = A.translate(xi)
    for b in basis:
        if not apply_op(local, b).is_zero():
            raise AssertionError("local solution failed to satisfy the operator")
    verdict = "PASS" if dim == r else "FAIL"
    return SingularityVerdict(verdict, dim, r, xi, vanish_order, ind, basis)


@dataclass(frozen=True)
class ExpPolyBorel:
    partial_fraction: PartialFraction
    series: FormalSeries


def exp_poly_borel(pairs, order: int = 20) -> ExpPolyBorel:
    """Borel image of ``F = sum b_i e^(a_i z)``: ``f = sum b_i / (1 - a_i z)``."""
    pairs = [(as_rational(a), as_rational(b)) for a, b in pairs]
    alphas = [a for a, _ in pairs]
    if len(set(alphas)) != len(alphas):
        raise ValueError("exponents a_i must be pairwise distinct")
    const = Fraction(0)
    terms = []
    for a, b in pairs:
        if a == 0:
            const += b
        else:
            # b / (1 - a z) = (-b/a) / (z - 1/a)
            terms.append(PolePart(1 / a, -b / a))
    pf = PartialFraction(Poly([const]), tuple(terms))
    coeffs = [sum((b * a**n for a, b in pairs), Fraction(0)) for n in range(order + 1)]
    return ExpPolyBorel(pf, FormalSeries(coeffs))


def exp_poly_series(pairs, order: int) -> FormalSeries:
    """Raw Taylor coefficients ``sum b_i a_i^n / n!`` of the exponential polynomial."""
    pairs = [(as_rational(a), as_rational(b)) for a, b in pairs]
    return FormalSeries(sum((b * a**n for a, b in pairs), Fraction(0)) * gevrey_weight(n, -1) for n in range(order + 1))
