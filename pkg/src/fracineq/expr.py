"""A tiny single-variable arithmetic language for declaring f and f'.

Grammar (EBNF)::

    expr    = term { ("+" | "-") term } ;
    term    = unary { ("*" | "/") unary } ;
    unary   = "-" unary | power ;
    power   = atom [ "^" unary ] ;
    atom    = NUMBER | "x" | CALL "(" expr { "," expr } ")" | "(" expr ")" ;
    CALL    = "exp" | "log" | "sqrt" | "abs" | "pow" ;
    NUMBER  = digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ]
            | "." digits [ exponent ] ;

``^`` binds tighter than unary minus (``-x^2`` is ``-(x^2)``) and is
right-associative; ``+ - * /`` are left-associative.

Evaluation is IEEE double precision and vectorised over numpy arrays.  Any
non-finite intermediate value, division by zero or out-of-domain call raises
:class:`EvaluationError` instead of propagating NaN/Inf.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

__all__ = [
    "Const",
    "Var",
    "Neg",
    "BinOp",
    "Call",
    "Expr",
    "ExprSyntaxError",
    "EvaluationError",
    "parse",
    "evaluate",
    "evaluate_array",
    "to_source",
    "DerivativeReport",
    "check_derivative_consistency",
    "FUNCTIONS",
]


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple["Expr", ...]


Expr = Union[Const, Var, Neg, BinOp, Call]

# name -> arity
FUNCTIONS = {"exp": 1, "log": 1, "sqrt": 1, "abs": 1, "pow": 2}


class ExprSyntaxError(ValueError):
    """Malformed source; ``offset`` is the byte offset of the offending token."""

    def __init__(self, message: str, offset: int, expected: str | None = None):
        self.offset = offset
        self.expected = expected
        detail = f"{message} at offset {offset}"
        if expected:
            detail += f" (expected {expected})"
        super().__init__(detail)


class UnknownIdentifierError(ExprSyntaxError):
    pass


class EvaluationError(ValueError):
    """Raised for domain errors, division by zero and overflow."""

    def __init__(self, kind: str, message: str):
        self.kind = kind
        super().__init__(f"{kind}: {message}")


# --------------------------------------------------------------------------
# tokenizer / parser

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str  # num, ident, op, end
    text: str
    offset: int  # byte offset


def _tokenize(source: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos = 0
    byte_pos = 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {source[pos]!r}", byte_pos)
        text = m.group()
        if m.lastgroup != "ws":
            toks.append(_Tok(m.lastgroup, text, byte_pos))
        pos = m.end()
        byte_pos += len(text.encode("utf-8"))
    toks.append(_Tok("end", "", byte_pos))
    return toks


class _Parser:
    def __init__(self, source: str):
        self.toks = _tokenize(source)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> None:
        if self.tok.text != text:
            self.fail(f"'{text}'")
        self.advance()

    def fail(self, expected: str):
        t = self.tok
        what = "end of input" if t.kind == "end" else f"token {t.text!r}"
        raise ExprSyntaxError(f"unexpected {what}", t.offset, expected)

    def parse(self) -> Expr:
        node = self.expr()
        if self.tok.kind != "end":
            self.fail("operator or end of input")
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.tok.text in ("+", "-") and self.tok.kind == "op":
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.tok.text in ("*", "/") and self.tok.kind == "op":
            op = self.advance().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Expr:
        if self.tok.kind == "op" and self.tok.text == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return Const(float(t.text))
        if t.kind == "ident":
            self.advance()
            if t.text == "x":
                return Var()
            if t.text not in FUNCTIONS:
                raise UnknownIdentifierError(f"unknown identifier {t.text!r}", t.offset)
            self.expect("(")
            args = [self.expr()]
            while self.tok.text == ",":
                self.advance()
                args.append(self.expr())
            close = self.tok
            self.expect(")")
            if len(args) != FUNCTIONS[t.text]:
                raise ExprSyntaxError(
                    f"{t.text} takes {FUNCTIONS[t.text]} argument(s), got {len(args)}",
                    close.offset,
                )
            return Call(t.text, tuple(args))
        if t.kind == "op" and t.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        self.fail("number, 'x', function call or '('")


def parse(source: str) -> Expr:
    """Parse ``source`` into an immutable expression tree."""
    return _Parser(source).parse()


def to_source(node: Expr) -> str:
    """Fully parenthesised source text; ``parse(to_source(e)) == e``."""
    if isinstance(node, Const):
        return repr(float(node.value))
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Neg):
        return f"(-{to_source(node.operand)})"
    if isinstance(node, BinOp):
        return f"({to_source(node.left)} {node.op} {to_source(node.right)})"
    if isinstance(node, Call):
        return f"{node.name}({', '.join(to_source(a) for a in node.args)})"
    raise TypeError(f"not an expression node: {node!r}")


# --------------------------------------------------------------------------
# evaluation


def _finite(v: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(v)):
        raise EvaluationError("overflow", f"non-finite result in {what}")
    return v


def _eval(node: Expr, xs: np.ndarray) -> np.ndarray:
    if isinstance(node, Const):
        return np.full_like(xs, node.value)
    if isinstance(node, Var):
        return xs
    if isinstance(node, Neg):
        return -_eval(node.operand, xs)
    if isinstance(node, BinOp):
        lhs = _eval(node.left, xs)
        rhs = _eval(node.right, xs)
        if node.op == "+":
            return _finite(lhs + rhs, "+")
        if node.op == "-":
            return _finite(lhs - rhs, "-")
        if node.op == "*":
            return _finite(lhs * rhs, "*")
        if node.op == "/":
            if np.any(rhs == 0.0):
                raise EvaluationError("division by zero", to_source(node))
            return _finite(lhs / rhs, "/")
        return _power(lhs, rhs, node)
    if isinstance(node, Call):
        args = [_eval(a, xs) for a in node.args]
        name = node.name
        if name == "exp":
            return _finite(np.exp(args[0]), "exp")
        if name == "log":
            if np.any(args[0] <= 0.0):
                raise EvaluationError("domain", f"log of non-positive value in {to_source(node)}")
            return np.log(args[0])
        if name == "sqrt":
            if np.any(args[0] < 0.0):
                raise EvaluationError("domain", f"sqrt of negative value in {to_source(node)}")
            return np.sqrt(args[0])
        if name == "abs":
            return np.abs(args[0])
        if name == "pow":
            return _power(args[0], args[1], node)
    raise TypeError(f"not an expression node: {node!r}")


def _power(base: np.ndarray, expo: np.ndarray, node: Expr) -> np.ndarray:
    if np.any((base < 0.0) & (expo != np.round(expo))):
        raise EvaluationError("domain", f"negative base with non-integer exponent in {to_source(node)}")
    if np.any((base == 0.0) & (expo < 0.0)):
        raise EvaluationError("division by zero", f"zero to a negative power in {to_source(node)}")
    return _finite(np.power(base, expo), "^")


def evaluate_array(node: Expr, xs) -> np.ndarray:
    """Evaluate at every point of ``xs`` (any shape)."""
    arr = np.asarray(xs, dtype=np.float64)
    with np.errstate(all="ignore"):
        return _eval(node, arr)


def evaluate(node: Expr, x: float) -> float:
    return float(evaluate_array(node, np.array([x], dtype=np.float64))[0])


def compile_expr(node: Expr) -> Callable[[np.ndarray], np.ndarray]:
    return lambda xs: evaluate_array(node, xs)


# --------------------------------------------------------------------------
# derivative sanity check


@dataclass(frozen=True)
class DerivativeReport:
    max_deviation: float
    worst_point: float
    tolerance: float
    step: float

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance


def check_derivative_consistency(
    f: Expr,
    fprime: Expr,
    interval: tuple[float, float],
    n: int = 11,
    tol: float = 1e-6,
    rel_step: float = 1e-5,
) -> DerivativeReport:
    """Compare ``fprime`` with central differences of ``f`` at ``n`` interior points."""
    a, b = map(float, interval)
    if n < 3:
        raise ValueError("need at least 3 probe points")
    if not b > a:
        raise ValueError(f"degenerate interval [{a}, {b}]")
    h = rel_step * (b - a)
    pts = a + (b - a) * np.arange(1, n + 1) / (n + 1)
    fd = (evaluate_array(f, pts + h) - evaluate_array(f, pts - h)) / (2.0 * h)
    dev = np.abs(fd - evaluate_array(fprime, pts))
    k = int(np.argmax(dev))
    return DerivativeReport(float(dev[k]), float(pts[k]), tol, h)
