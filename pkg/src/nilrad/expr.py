"""Expression trees for smooth functions: parsing, printing, differentiation, real evaluation.

Grammar (lowest to highest precedence)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := "-" unary | power
    power   := atom ("^" exponent)?           # right associative
    exponent:= "-"? power                     # must fold to a real constant
    atom    := NUMBER | NAME | NAME "(" expr ")" | "(" expr ")"
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Mapping

from .errors import DomainError, ExprSyntaxError, UnboundVariable

FUNCTIONS = ("exp", "log", "sin", "cos", "tan", "atan", "sqrt")


class Expr:
    """Base node.  Operators build trees through the folding constructors below."""

    def __add__(self, other):
        return add(self, as_expr(other))

    def __radd__(self, other):
        return add(as_expr(other), self)

    def __sub__(self, other):
        return sub(self, as_expr(other))

    def __rsub__(self, other):
        return sub(as_expr(other), self)

    def __mul__(self, other):
        return mul(self, as_expr(other))

    def __rmul__(self, other):
        return mul(as_expr(other), self)

    def __truediv__(self, other):
        return div(self, as_expr(other))

    def __rtruediv__(self, other):
        return div(as_expr(other), self)

    def __neg__(self):
        return neg(self)

    def __pow__(self, p):
        return power(self, float(p))

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True, eq=True, repr=True)
class Const(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: float


@dataclass(frozen=True)
class Func(Expr):
    name: str
    arg: Expr

    def __post_init__(self):
        if self.name not in FUNCTIONS:
            raise ValueError(f"unknown function {self.name!r}")


def as_expr(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, float)):
        return Const(float(x))
    if isinstance(x, str):
        return Var(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an expression")


def _is(e: Expr, value: float) -> bool:
    return isinstance(e, Const) and e.value == value


# constant-folding constructors; no simplification beyond this


def add(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    if _is(a, 0):
        return b
    if _is(b, 0):
        return a
    return Add(a, b)


def sub(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value - b.value)
    if _is(b, 0):
        return a
    if _is(a, 0):
        return neg(b)
    return Sub(a, b)


def mul(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    if _is(a, 0) or _is(b, 0):
        return Const(0.0)
    if _is(a, 1):
        return b
    if _is(b, 1):
        return a
    return Mul(a, b)


def div(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const) and b.value != 0:
        return Const(a.value / b.value)
    if _is(a, 0) and not _is(b, 0):
        return Const(0.0)
    if _is(b, 1):
        return a
    return Div(a, b)


def neg(a: Expr) -> Expr:
    if isinstance(a, Const):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def power(a: Expr, p: float) -> Expr:
    p = float(p)
    if p == 0:
        return Const(1.0)
    if p == 1:
        return a
    if isinstance(a, Const):
        try:
            return Const(eval_real(Pow(a, p), {}))
        except DomainError:
            pass
    return Pow(a, p)


def func(name: str, a: Expr) -> Expr:
    return Func(name, a)


def free_vars(e: Expr) -> frozenset[str]:
    if isinstance(e, Var):
        return frozenset({e.name})
    if isinstance(e, Const):
        return frozenset()
    if isinstance(e, (Add, Sub, Mul, Div)):
        return free_vars(e.left) | free_vars(e.right)
    if isinstance(e, Neg):
        return free_vars(e.arg)
    if isinstance(e, Pow):
        return free_vars(e.base)
    if isinstance(e, Func):
        return free_vars(e.arg)
    raise TypeError(e)


def substitute(e: Expr, name: str, value: Expr) -> Expr:
    """Replace every occurrence of variable ``name`` by ``value`` (composition in the tree)."""
    if isinstance(e, Var):
        return value if e.name == name else e
    if isinstance(e, Const):
        return e
    if isinstance(e, (Add, Sub, Mul, Div)):
        return type(e)(substitute(e.left, name, value), substitute(e.right, name, value))
    if isinstance(e, Neg):
        return Neg(substitute(e.arg, name, value))
    if isinstance(e, Pow):
        return Pow(substitute(e.base, name, value), e.exponent)
    if isinstance(e, Func):
        return Func(e.name, substitute(e.arg, name, value))
    raise TypeError(e)


# differentiation


def differentiate(e: Expr, var: str) -> Expr:
    if isinstance(e, Const):
        return Const(0.0)
    if isinstance(e, Var):
        return Const(1.0 if e.name == var else 0.0)
    if isinstance(e, Add):
        return add(differentiate(e.left, var), differentiate(e.right, var))
    if isinstance(e, Sub):
        return sub(differentiate(e.left, var), differentiate(e.right, var))
    if isinstance(e, Neg):
        return neg(differentiate(e.arg, var))
    if isinstance(e, Mul):
        return add(mul(differentiate(e.left, var), e.right),
                   mul(e.left, differentiate(e.right, var)))
    if isinstance(e, Div):
        du, dv = differentiate(e.left, var), differentiate(e.right, var)
        return sub(div(du, e.right), div(mul(e.left, dv), power(e.right, 2)))
    if isinstance(e, Pow):
        du = differentiate(e.base, var)
        return mul(mul(Const(e.exponent), power(e.base, e.exponent - 1)), du)
    if isinstance(e, Func):
        du = differentiate(e.arg, var)
        if _is(du, 0):
            return Const(0.0)
        u = e.arg
        outer = {
            "exp": lambda: e,
            "log": lambda: div(Const(1.0), u),
            "sin": lambda: Func("cos", u),
            "cos": lambda: neg(Func("sin", u)),
            "tan": lambda: add(Const(1.0), power(e, 2)),
            "atan": lambda: div(Const(1.0), add(Const(1.0), power(u, 2))),
            "sqrt": lambda: div(Const(1.0), mul(Const(2.0), e)),
        }[e.name]()
        return mul(outer, du)
    raise TypeError(e)


# real evaluation


def _checked(name: str, fn: Callable[[float], float], x: float) -> float:
    if name in ("log", "sqrt") and not x > 0:
        raise DomainError(f"{name} needs a positive argument, got {x!r}")
    try:
        return fn(x)
    except (OverflowError, ValueError) as exc:
        raise DomainError(f"{name}({x!r}): {exc}") from None


REAL_FUNCTIONS: dict[str, Callable[[float], float]] = {
    "exp": math.exp, "log": math.log, "sin": math.sin, "cos": math.cos,
    "tan": math.tan, "atan": math.atan, "sqrt": math.sqrt,
}


def real_pow(x: float, p: float) -> float:
    if p.is_integer():
        if x == 0 and p < 0:
            raise DomainError("zero to a negative power")
    elif x < 0 or (x == 0 and p < 0):
        raise DomainError(f"{x!r} ** {p!r} is not a real number")
    try:
        return math.pow(x, p)
    except (OverflowError, ValueError) as exc:
        raise DomainError(str(exc)) from None


def eval_real(e: Expr, env: Mapping[str, float]) -> float:
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        try:
            return float(env[e.name])
        except KeyError:
            raise UnboundVariable(e.name) from None
    if isinstance(e, Add):
        return eval_real(e.left, env) + eval_real(e.right, env)
    if isinstance(e, Sub):
        return eval_real(e.left, env) - eval_real(e.right, env)
    if isinstance(e, Mul):
        return eval_real(e.left, env) * eval_real(e.right, env)
    if isinstance(e, Div):
        den = eval_real(e.right, env)
        if den == 0:
            raise DomainError("division by zero")
        return eval_real(e.left, env) / den
    if isinstance(e, Neg):
        return -eval_real(e.arg, env)
    if isinstance(e, Pow):
        return real_pow(eval_real(e.base, env), e.exponent)
    if isinstance(e, Func):
        return _checked(e.name, REAL_FUNCTIONS[e.name], eval_real(e.arg, env))
    raise TypeError(e)


def compile_real(e: Expr) -> Callable[[Mapping[str, float]], float]:
    """Closure form of ``eval_real`` for repeated evaluation (stencils, quadrature)."""
    return lambda env: eval_real(e, env)


# printing


_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3, Pow: 4}


def _num(x: float) -> str:
    text = repr(float(x))
    if text in ("inf", "-inf", "nan"):
        raise ValueError(f"{text} has no literal form")
    return text


def to_text(e: Expr) -> str:
    """Printed text parses back to a tree that evaluates identically."""
    return _text(e, 0)


def _text(e: Expr, ctx: int) -> str:
    if isinstance(e, Const):
        s = _num(e.value)
        return f"({s})" if s.startswith("-") and ctx > 0 else s
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Func):
        return f"{e.name}({_text(e.arg, 0)})"
    prec = _PREC[type(e)]
    if isinstance(e, (Add, Sub, Mul, Div)):
        sym = {Add: " + ", Sub: " - ", Mul: "*", Div: "/"}[type(e)]
        # left associative: the right operand needs parentheses at equal precedence
        s = _text(e.left, prec) + sym + _text(e.right, prec + 1)
    elif isinstance(e, Neg):
        s = "-" + _text(e.arg, prec)
    else:
        exp = _num(e.exponent)
        s = _text(e.base, prec + 1) + "^" + (f"({exp})" if exp.startswith("-") else exp)
    return f"({s})" if prec < ctx else s


# parsing

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>\*\*|[-+*/^(),·−])
""", re.VERBOSE)


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos,
                                  frozenset({"number", "name", "operator"}))
        if m.lastgroup != "ws":
            val = m.group()
            val = {"**": "^", "·": "*", "−": "-"}.get(val, val)
            toks.append(_Tok(m.lastgroup, val, pos))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def fail(self, expected):
        tok = self.tok
        what = repr(tok.text) if tok.kind != "end" else "end of input"
        raise ExprSyntaxError(f"unexpected {what}", tok.pos, frozenset(expected))

    def expect(self, text: str):
        if self.tok.text != text or self.tok.kind != "op":
            self.fail({text})
        self.i += 1

    def parse(self) -> Expr:
        e = self.expr()
        if self.tok.kind != "end":
            self.fail({"+", "-", "*", "/", "^", "end of input"})
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.tok.text
            self.i += 1
            rhs = self.term()
            e = Add(e, rhs) if op == "+" else Sub(e, rhs)
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.tok.text
            self.i += 1
            rhs = self.unary()
            e = Mul(e, rhs) if op == "*" else Div(e, rhs)
        return e

    def unary(self) -> Expr:
        if self.tok.kind == "op" and self.tok.text == "-":
            self.i += 1
            return Neg(self.unary())
        if self.tok.kind == "op" and self.tok.text == "+":
            self.i += 1
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.i += 1
            at = self.tok.pos
            sign = 1.0
            while self.tok.kind == "op" and self.tok.text in "+-":
                sign = -sign if self.tok.text == "-" else sign
                self.i += 1
            exponent = self.power()
            try:
                value = sign * eval_real(exponent, {})
            except (UnboundVariable, DomainError):
                raise ExprSyntaxError("exponent must be a real constant", at,
                                      frozenset({"number", "(constant)"})) from None
            return Pow(base, value)
        return base

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return Const(float(tok.text))
        if tok.kind == "name":
            self.i += 1
            if self.tok.kind == "op" and self.tok.text == "(":
                if tok.text not in FUNCTIONS:
                    raise ExprSyntaxError(f"unknown function {tok.text!r}", tok.pos,
                                          frozenset(FUNCTIONS))
                self.i += 1
                arg = self.expr()
                self.expect(")")
                return Func(tok.text, arg)
            if tok.text in FUNCTIONS:
                self.fail({"("})
            return Var(tok.text)
        if tok.kind == "op" and tok.text == "(":
            self.i += 1
            e = self.expr()
            self.expect(")")
            return e
        self.fail({"number", "name", "("})


def parse(text: str) -> Expr:
    return _Parser(text).parse()
