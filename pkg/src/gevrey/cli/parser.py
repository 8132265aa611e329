"""A small expression language for terms, series and operators.

Grammar (LL(1); juxtaposition means multiplication)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/")? unary)*
    unary   := "-" unary | power
    power   := postfix ("^" unary)?
    postfix := primary "!"?
    primary := INT | IDENT | IDENT "(" expr ")" | "(" expr ")"
             | "S" "{" expr "}" | "d" "{" expr "}"

``S{r}`` is the dilation ``f(z) -> f(r z)``, ``d{r}`` the matching
q-derivative, ``D`` is ``d/dz`` and ``qfac(x)`` the q-factorial.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union


class SpecError(ValueError):
    """Base class for diagnostics with a source position."""

    kind = "error"

    def __init__(self, message: str, text: str, pos: int):
        self.message = message
        self.text = text
        self.pos = pos
        self.line = text.count("\n", 0, pos) + 1
        self.column = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{self.kind} at {self.line}:{self.column}: {message}")


class LexError(SpecError):
    kind = "lexical error"


class ParseError(SpecError):
    kind = "syntax error"


@dataclass(frozen=True)
class Token:
    kind: str  # INT, IDENT, OP, EOF
    value: str
    pos: int


_OPS = set("!^*+-/(){},")
_ALIASES = {"−": "-", "·": "*", "×": "*"}


def tokenize(text: str) -> list[Token]:
    out = []
    i = 0
    while i < len(text):
        ch = _ALIASES.get(text[i], text[i])
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            out.append(Token("INT", text[i:j], i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(Token("IDENT", text[i:j], i))
            i = j
        elif ch in _OPS:
            out.append(Token("OP", ch, i))
            i += 1
        else:
            raise LexError(f"unexpected character {text[i]!r}", text, i)
    out.append(Token("EOF", "", len(text)))
    return out


# ---------------------------------------------------------------- AST


@dataclass(frozen=True)
class Num:
    value: int

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Neg:
    arg: "Node"

    def __str__(self) -> str:
        return f"-{_wrap(self.arg)}"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"

    def __str__(self) -> str:
        return f"{_wrap(self.left)} {self.op} {_wrap(self.right)}"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exp: "Node"

    def __str__(self) -> str:
        return f"{_wrap(self.base)}^{_wrap(self.exp)}"


@dataclass(frozen=True)
class Fact:
    arg: "Node"

    def __str__(self) -> str:
        return f"{_wrap(self.arg)}!"


@dataclass(frozen=True)
class Call:
    name: str
    arg: "Node"

    def __str__(self) -> str:
        return f"{self.name}({self.arg})"


@dataclass(frozen=True)
class Dilation:
    """``S{ratio}`` (``kind='S'``) or ``d{ratio}`` (``kind='d'``)."""

    kind: str
    ratio: "Node"

    def __str__(self) -> str:
        return f"{self.kind}{{{self.ratio}}}"


Node = Union[Num, Var, Neg, BinOp, Pow, Fact, Call, Dilation]

FUNCTIONS = {"qfac"}


def _wrap(node: Node) -> str:
    if isinstance(node, (Num, Var, Call, Dilation)):
        return str(node)
    return f"({node})"


def pretty(node: Node) -> str:
    return str(node)


# ---------------------------------------------------------------- parser


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def _is(self, value: str) -> bool:
        return self.tok.kind == "OP" and self.tok.value == value

    def _expect(self, value: str) -> Token:
        if not self._is(value):
            self._fail(f"expected {value!r}")
        t = self.tok
        self.i += 1
        return t

    def _fail(self, what: str):
        t = self.tok
        found = "end of input" if t.kind == "EOF" else repr(t.value)
        raise ParseError(f"{what}, found {found}", self.text, t.pos)

    def _starts_primary(self) -> bool:
        t = self.tok
        return t.kind in ("INT", "IDENT") or (t.kind == "OP" and t.value == "(")

    def parse(self) -> Node:
        if self.tok.kind == "EOF":
            self._fail("expected an expression")
        node = self.expr()
        if self.tok.kind != "EOF":
            self._fail("unexpected token")
        return node

    def expr(self) -> Node:
        node = self.term()
        while self._is("+") or self._is("-"):
            op = self.tok.value
            self.i += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while True:
            if self._is("*") or self._is("/"):
                op = self.tok.value
                self.i += 1
                node = BinOp(op, node, self.unary())
            elif self._starts_primary():
                node = BinOp("*", node, self.unary())
            else:
                return node

    def unary(self) -> Node:
        if self._is("-"):
            self.i += 1
            return Neg(self.unary())
        return self.power()

    def power(self) -> Node:
        base = self.postfix()
        if self._is("^"):
            self.i += 1
            return Pow(base, self.unary())
        return base

    def postfix(self) -> Node:
        node = self.primary()
        if self._is("!"):
            self.i += 1
            node = Fact(node)
        return node

    def primary(self) -> Node:
        t = self.tok
        if t.kind == "INT":
            self.i += 1
            return Num(int(t.value))
        if t.kind == "IDENT":
            self.i += 1
            if t.value in ("S", "d") and self._is("{"):
                self.i += 1
                inner = self.expr()
                self._expect("}")
                return Dilation(t.value, inner)
            if t.value in FUNCTIONS:
                self._expect("(")
                inner = self.expr()
                self._expect(")")
                return Call(t.value, inner)
            return Var(t.value)
        if self._is("("):
            self.i += 1
            inner = self.expr()
            self._expect(")")
            return inner
        self._fail("expected a number, a name or '('")


def parse_spec(text: str) -> Node:
    """Parse ``text``; raises :class:`LexError` or :class:`ParseError`."""
    return _Parser(text).parse()


def parse_list(text: str) -> list[Node]:
    """Comma-separated expressions."""
    parts = []
    start = 0
    depth = 0
    for i, ch in enumerate(text + ","):
        if ch in "({":
            depth += 1
        elif ch in ")}":
            depth -= 1
        elif ch == "," and depth == 0:
            chunk = text[start:i]
            if not chunk.strip():
                raise ParseError("empty list entry", text, i)
            try:
                parts.append(parse_spec(chunk))
            except SpecError as e:
                raise type(e)(e.message, text, start + e.pos) from None
            start = i + 1
    return parts


def as_number(node: Node) -> Fraction:
    """Evaluate a closed arithmetic expression (no variables)."""
    from .evaluate import eval_number

    return eval_number(node, {})
