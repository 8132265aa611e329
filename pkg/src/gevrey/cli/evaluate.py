"""Evaluators from the expression AST to library objects."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from ..exact import QContext
from ..padic_sum import FactorialSeriesSpec
from ..poly import Poly, RationalFunction
from ..qcalc import QDiffOp
from ..series import FormalSeries
from ..weyl import DiffOp
from .parser import BinOp, Call, Dilation, Fact, Neg, Node, Num, Pow, Var, parse_list, parse_spec


class EvalError(ValueError):
    pass


def _int_exponent(x, what: str = "exponent") -> int:
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    raise EvalError(f"{what} must be an integer")


def eval_number(node: Node, env: dict, q: Fraction | None = None) -> Fraction:
    """Rational value with the variables in ``env`` bound to rationals."""
    ev = lambda n: eval_number(n, env, q)  # noqa: E731
    if isinstance(node, Num):
        return Fraction(node.value)
    if isinstance(node, Var):
        if node.name in env:
            return Fraction(env[node.name])
        raise EvalError(f"unbound name {node.name!r}")
    if isinstance(node, Neg):
        return -ev(node.arg)
    if isinstance(node, BinOp):
        a, b = ev(node.left), ev(node.right)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if b == 0:
            raise EvalError("division by zero")
        return a / b
    if isinstance(node, Pow):
        base = ev(node.base)
        k = _int_exponent(ev(node.exp))
        if base == 0 and k < 0:
            raise EvalError("zero to a negative power")
        return base**k
    if isinstance(node, Fact):
        k = _int_exponent(ev(node.arg), "factorial argument")
        if k < 0:
            raise EvalError("factorial of a negative integer")
        return Fraction(factorial(k))
    if isinstance(node, Call) and node.name == "qfac":
        if q is None:
            raise EvalError("qfac needs --q")
        k = _int_exponent(ev(node.arg), "q-factorial argument")
        return QContext(q).q_factorial(k)
    raise EvalError(f"{node} is not a number")


def number(text: str) -> Fraction:
    return eval_number(parse_spec(text), {})


def numbers(text: str) -> list[Fraction]:
    return [eval_number(n, {}) for n in parse_list(text)]


# ---------------------------------------------------------------- factorial terms


@dataclass(frozen=True)
class _Term:
    """``P(n) * n!^s * xi^n``."""

    P: Poly
    s: int = 0
    xi: Fraction = Fraction(1)

    def is_constant(self) -> bool:
        return self.s == 0 and self.xi == 1 and self.P.degree <= 0

    def mul(self, other: _Term) -> _Term:
        return _Term(self.P * other.P, self.s + other.s, self.xi * other.xi)

    def add(self, other: _Term, sign: int) -> _Term:
        if not self.P:
            return _Term(other.P.scale(sign), other.s, other.xi)
        if not other.P:
            return self
        if (self.s, self.xi) != (other.s, other.xi):
            raise EvalError("summands must share the factorial weight and the geometric ratio")
        return _Term(self.P + other.P.scale(sign), self.s, self.xi)


def _term(node: Node) -> _Term:
    if isinstance(node, Num):
        return _Term(Poly.const(node.value))
    if isinstance(node, Var):
        if node.name == "n":
            return _Term(Poly.x())
        raise EvalError(f"unknown name {node.name!r} in a term (only n)")
    if isinstance(node, Neg):
        t = _term(node.arg)
        return _Term(-t.P, t.s, t.xi)
    if isinstance(node, BinOp):
        a, b = _term(node.left), _term(node.right)
        if node.op == "+":
            return a.add(b, 1)
        if node.op == "-":
            return a.add(b, -1)
        if node.op == "*":
            return a.mul(b)
        if not b.is_constant() or not b.P:
            raise EvalError("division only by nonzero constants in a term")
        return _Term(a.P.scale(1 / b.P[0]), a.s, a.xi)
    if isinstance(node, Pow):
        if node.exp == Var("n"):
            base = eval_number(node.base, {})
            return _Term(Poly.const(1), 0, base)
        k = _int_exponent(eval_number(node.exp, {}))
        if k < 0:
            raise EvalError("negative powers are not polynomial")
        base = _term(node.base)
        out = _Term(Poly.const(1))
        for _ in range(k):
            out = out.mul(base)
        return out
    if isinstance(node, Fact):
        inner = _term(node.arg)
        P = inner.P
        if inner.s or inner.xi != 1 or P.degree != 1 or P[1] != 1 or P[0].denominator != 1 or P[0] < 0:
            raise EvalError("factorials must have the form (n + k)! with an integer k >= 0")
        shift = int(P[0])
        out = Poly.const(1)
        for k in range(1, shift + 1):
            out = out * Poly([k, 1])
        return _Term(out, 1)
    raise EvalError(f"{node} is not allowed in a factorial term")


def eval_factorial_term(node: Node) -> FactorialSeriesSpec:
    """Normalize a term generator to ``P(n) n!^s xi^n``."""
    t = _term(node)
    if t.s < 1:
        raise EvalError("the term needs a factorial weight n!")
    return FactorialSeriesSpec(t.P, t.s, t.xi)


def factorial_term(text: str) -> FactorialSeriesSpec:
    return eval_factorial_term(parse_spec(text))


# ---------------------------------------------------------------- differential operators


def eval_diffop(node: Node) -> DiffOp:
    if isinstance(node, Num):
        return DiffOp.const(node.value)
    if isinstance(node, Var):
        if node.name == "z":
            return DiffOp.z()
        if node.name == "D":
            return DiffOp.D()
        if node.name == "theta":
            return DiffOp.theta()
        raise EvalError(f"unknown name {node.name!r} in an operator (z, D, theta)")
    if isinstance(node, Neg):
        return -eval_diffop(node.arg)
    if isinstance(node, BinOp):
        a = eval_diffop(node.left)
        if node.op == "/":
            c = eval_number(node.right, {})
            if c == 0:
                raise EvalError("division by zero")
            return a.scale(1 / c)
        b = eval_diffop(node.right)
        return a + b if node.op == "+" else a - b if node.op == "-" else a * b
    if isinstance(node, Pow):
        k = _int_exponent(eval_number(node.exp, {}))
        if k < 0:
            raise EvalError("negative operator powers")
        return eval_diffop(node.base) ** k
    raise EvalError(f"{node} is not allowed in a differential operator")


def diffop(text: str) -> DiffOp:
    return eval_diffop(parse_spec(text))


# ---------------------------------------------------------------- rational functions, q-operators


def eval_rational(node: Node, env: dict) -> RationalFunction:
    """Rational function of ``z``; other names come from ``env``."""
    if isinstance(node, Var) and node.name == "z":
        return RationalFunction.z()
    if isinstance(node, (Num, Var)):
        return RationalFunction(eval_number(node, env))
    if isinstance(node, Neg):
        return -eval_rational(node.arg, env)
    if isinstance(node, BinOp):
        a, b = eval_rational(node.left, env), eval_rational(node.right, env)
        if node.op == "/" and not b:
            raise EvalError("division by zero")
        return {"+": a.__add__, "-": a.__sub__, "*": a.__mul__, "/": a.__truediv__}[node.op](b)
    if isinstance(node, Pow):
        k = _int_exponent(eval_number(node.exp, env))
        return eval_rational(node.base, env) ** k
    raise EvalError(f"{node} is not a rational function of z")


def rational(text: str, env: dict | None = None) -> RationalFunction:
    return eval_rational(parse_spec(text), env or {})


def eval_qop(node: Node, q: Fraction, env: dict) -> QDiffOp:
    """``sum c_i(z) S{q}^i``; ``q`` and the names in ``env`` are constants."""
    scope = dict(env, q=q)
    if isinstance(node, Dilation):
        r = eval_number(node.ratio, scope)
        return QDiffOp.sigma_ratio(q, r) if node.kind == "S" else QDiffOp.delta_ratio(q, r)
    if isinstance(node, Var) and node.name == "z":
        return QDiffOp.coeff(q, RationalFunction.z())
    if isinstance(node, (Num, Var)):
        return QDiffOp.const(q, eval_number(node, scope))
    if isinstance(node, Neg):
        return -eval_qop(node.arg, q, env)
    if isinstance(node, BinOp):
        a = eval_qop(node.left, q, env)
        b = eval_qop(node.right, q, env)
        if node.op == "/":
            if set(b.terms) != {0}:
                raise EvalError("division only by coefficients, not by dilations")
            return a * QDiffOp.coeff(q, 1 / b.terms[0])
        return a + b if node.op == "+" else a - b if node.op == "-" else a * b
    if isinstance(node, Pow):
        k = _int_exponent(eval_number(node.exp, scope))
        base = eval_qop(node.base, q, env)
        if k < 0:
            if set(base.terms) != {0}:
                raise EvalError("negative powers only of coefficients")
            return QDiffOp.coeff(q, base.terms[0] ** k)
        return base**k
    raise EvalError(f"{node} is not allowed in a q-difference operator")


def qop(text: str, q: Fraction, env: dict | None = None) -> QDiffOp:
    return eval_qop(parse_spec(text), q, env or {})


# ---------------------------------------------------------------- series


def series(text: str, trunc: int, q: Fraction | None = None) -> FormalSeries:
    """A comma list of coefficients, or a formula in ``n`` evaluated for ``n = 0..trunc``.

    A list shorter than ``trunc + 1`` is taken as it is.
    """
    nodes = parse_list(text)
    if len(nodes) > 1:
        return FormalSeries(eval_number(nd, {}, q) for nd in nodes)
    node = nodes[0]
    return FormalSeries(eval_number(node, {"n": n}, q) for n in range(trunc + 1))


def series_list(text: str, trunc: int, q: Fraction | None = None) -> list[FormalSeries]:
    """Several series separated by ``;``."""
    return [series(part, trunc, q) for part in text.split(";") if part.strip()]
