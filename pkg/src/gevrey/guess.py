"""Recovering operators and rational functions from truncated series."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import as_rational
from .linalg import kernel, matvec
from .pfrac import PartialFraction
from .poly import Poly, RationalFunction
from .series import FormalSeries
from .weyl import DiffOp, apply_op


class InsufficientCoefficients(ValueError):
    pass


@dataclass(frozen=True)
class GuessConfig:
    max_order: int
    max_degree: int
    trunc: int
    margin: int = 5

    def __post_init__(self):
        need = (self.max_order + 1) * (self.max_degree + 1) + self.margin
        if self.trunc < need:
            raise InsufficientCoefficients(
                f"insufficient coefficients: truncation {self.trunc} < (r+1)(d+1)+m = {need}"
            )


def _falling(n: int, j: int) -> int:
    out = 1
    for k in range(j):
        out *= n - k
    return out


def ansatz_monomials(r: int, d: int) -> list[tuple[int, int]]:
    """Monomials ``z^i D^j`` with ``j <= r`` and ``i - j <= d``.

    The degree bound is the top power of ``z`` in the Euler form
    ``sum_a z^a P_a(theta)``, where ``z^i D^j`` contributes to ``a = i - j``.
    """
    return [(i, j) for j in range(r + 1) for i in range(d + j + 1)]


def _operator_rows(f: Sequence[Fraction], monos, upto: int) -> list[list[Fraction]]:
    """Row ``m`` holds the coefficient of ``z^m`` in ``z^i D^j f`` for each monomial."""
    N = len(f) - 1
    rows = []
    for m in range(upto + 1):
        row = []
        for i, j in monos:
            n = m - i + j
            row.append(Fraction(_falling(n, j)) * f[n] if 0 <= n <= N else Fraction(0))
        rows.append(row)
    return rows


def _certified_kernel(rows, held, ncols):
    """Kernel of ``rows`` if the held-out rows impose nothing further, else ``[]``."""
    ker = kernel(rows, ncols)
    if not ker:
        return []
    for v in ker:
        if any(matvec(held, v)):
            return []
    return ker


def guess_operator(f: FormalSeries, cfg: GuessConfig) -> DiffOp | None:
    """Annihilating operator of minimal order, then minimal degree, within bounds.

    Degree is counted in Euler form, see :func:`ansatz_monomials`.
    The kernel is computed from all but the last ``cfg.margin`` usable
    coefficients; it is accepted only if every kernel vector also kills the
    held-out ones. Among several candidates the first reduced-echelon kernel
    vector is returned, normalized to primitive integer coefficients. The
    result is "minimal within bounds", nothing more.
    """
    if f.order < cfg.trunc:
        raise InsufficientCoefficients(f"insufficient coefficients: series known to {f.order}, need {cfg.trunc}")
    coeffs = f.coeffs[: cfg.trunc + 1]
    for r in range(cfg.max_order + 1):
        for d in range(cfg.max_degree + 1):
            upto = cfg.trunc - r
            monos = ansatz_monomials(r, d)
            ncols = len(monos)
            rows = _operator_rows(coeffs, monos, upto)
            solve, held = rows[: len(rows) - cfg.margin], rows[len(rows) - cfg.margin :]
            if len(solve) < ncols:
                raise InsufficientCoefficients("insufficient coefficients for the requested bounds")
            ker = _certified_kernel(solve, held, ncols)
            if not ker:
                continue
            op = DiffOp(dict(zip(monos, ker[0])))
            if op.order < r:
                # a lower-order operator would have been found already
                continue
            return op.normalized()
    return None


def guess_inhomogeneous(f: FormalSeries, order: int, degree: int, rhs_degree: int = 0, margin: int = 5):
    """Find ``L`` with ``L f = P`` for a polynomial ``P`` of degree ``<= rhs_degree``.

    Returns ``(L, P)`` or ``None``; ``L`` has order exactly ``order``.
    """
    N = f.order
    upto = N - order
    monos = [(i, j) for j in range(order + 1) for i in range(degree + 1)]
    ncols = len(monos) + rhs_degree + 1
    rows = _operator_rows(f.coeffs, monos, upto)
    for m, row in enumerate(rows):
        row.extend(Fraction(-1) if m == k else Fraction(0) for k in range(rhs_degree + 1))
    solve, held = rows[: len(rows) - margin], rows[len(rows) - margin :]
    for v in _certified_kernel(solve, held, ncols):
        L = DiffOp(dict(zip(monos, v)))
        if L.order == order:
            return L, Poly(v[len(monos) :])
    return None


def homogenize(L: DiffOp, rhs: Poly) -> DiffOp:
    """An operator killing every solution of ``L y = rhs``.

    ``rhs`` is annihilated by ``rhs(z) D - rhs'(z)``, so that operator times
    ``L`` works; for a constant right-hand side this is ``D L`` up to scalar.
    """
    if not rhs:
        return L
    if rhs.degree == 0:
        return (DiffOp.D() * L).normalized()
    P = DiffOp.from_coefficients([-rhs.derivative(), rhs])
    return (P * L).normalized()


def hermite_pade(Z, N: int, D: int, xi=0) -> list[Poly] | None:
    """Polynomials ``P_h`` of degree ``<= D``, not all zero, with ``ord_xi sum P_h Z_h >= N``.

    ``Z`` is a list of ``m`` series expanded in powers of ``z - xi``, or a list
    of such lists (one per row ``j``, all of length ``m``) when several
    vanishing conditions are imposed at once. The polynomials are returned in
    the variable ``z``.
    """
    xi = as_rational(xi)
    rows_in = [Z] if Z and isinstance(Z[0], FormalSeries) else list(Z)
    if not rows_in or not rows_in[0]:
        raise ValueError("need at least one series")
    m = len(rows_in[0])
    if any(len(r) != m for r in rows_in):
        raise ValueError("all rows must hold the same number of series")
    if N < 0 or D < 0:
        raise ValueError("inconsistent bounds: N and D must be nonnegative")
    for row in rows_in:
        for s in row:
            if s.order < N - 1:
                raise ValueError(f"series known to order {s.order}, need {N - 1}")
    ncols = m * (D + 1)
    eqs = []
    for row in rows_in:
        for t in range(N):
            eqs.append([row[h][t - k] if t - k >= 0 else Fraction(0) for h in range(m) for k in range(D + 1)])
    ker = kernel(eqs, ncols)
    if not ker:
        return None
    v = ker[0]
    return [Poly(v[h * (D + 1) : (h + 1) * (D + 1)]).shift(-xi) for h in range(m)]


def residual_order(polys: Sequence[Poly], Z: Sequence[FormalSeries], xi=0) -> int:
    """``ord_xi sum P_h Z_h`` as far as the truncations can tell (returns the known order + 1 if all vanish)."""
    xi = as_rational(xi)
    order = min(s.order for s in Z)
    total = FormalSeries.zero(order)
    for p, s in zip(polys, Z):
        local = FormalSeries.polynomial(p.shift(xi).coeffs, order)
        total = total + local * s
    v = total.valuation()
    return order + 1 if v is None else v


def rational_reconstruct(f: FormalSeries, d_max: int = 10, margin: int = 4):
    """A rational function of minimal denominator degree matching ``f``.

    For each denominator degree ``e`` and numerator degree ``p <= d_max`` the
    denominator is solved from ``sum_k q_k f_(n-k) = 0`` over ``p < n``, keeping
    the last ``margin`` equations out of the solve; a candidate is accepted
    only if the held-out equations hold too. Returns a :class:`PartialFraction`
    when the denominator splits over Q, a :class:`RationalFunction` otherwise,
    and ``None`` if nothing stabilizes.
    """
    c = f.coeffs
    N = f.order
    if N + 1 < 2 * (d_max + 1):
        raise ValueError(f"need at least {2 * (d_max + 1)} coefficients for d_max={d_max}")
    for e in range(d_max + 1):
        for p in range(d_max + 1):
            eq_idx = list(range(p + 1, N + 1))
            if len(eq_idx) < e + margin:
                continue
            rows = [[c[n - k] if n - k >= 0 else Fraction(0) for k in range(e + 1)] for n in eq_idx]
            solve, held = rows[: len(rows) - margin], rows[len(rows) - margin :]
            ker = _certified_kernel(solve, held, e + 1)
            good = [v for v in ker if v[0] != 0]
            if not good:
                continue
            q = Poly(good[0]).scale(1 / good[0][0])
            num = Poly((FormalSeries(c) * FormalSeries.polynomial(q.coeffs, N)).coeffs[: p + 1])
            rf = RationalFunction(num, q)
            try:
                return PartialFraction.from_rational(rf)
            except ValueError:
                return rf
    return None


def expand_rational(r, order: int) -> FormalSeries:
    if isinstance(r, PartialFraction):
        return FormalSeries(r.taylor(order))
    num = FormalSeries.polynomial(r.num.coeffs, order)
    den = FormalSeries.polynomial(r.den.coeffs, order)
    return num / den
