"""A deliberately tiny arithmetic expression language over the variable x.

Grammar (infix, whitespace insignificant)::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | power
    power  := atom ('^' factor)?          # right associative
    atom   := NUMBER | 'x' | NAME '(' expr ')' | '(' expr ')'

with NAME one of exp, log, sqrt.  Anything richer belongs in scenario
preprocessing, not here.  The parse tree supports exact symbolic
differentiation of every construct in the grammar, printing with minimal
parentheses, and vectorized evaluation; parse(print(tree)) reproduces the
tree exactly.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

_TOKEN = re.compile(r"\s*(?:(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?|([A-Za-z_]\w*)|(\S))")

_FUNCS = ("exp", "log", "sqrt")


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: object
    right: object


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Call:
    name: str
    arg: object


X = Var()
ZERO = Num(0.0)
ONE = Num(1.0)


def tokenize(text: str) -> list[str]:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        num, exp_part, name, sym = m.groups()
        if num is not None:
            out.append(num + (exp_part or ""))
        elif name is not None:
            out.append(name)
        else:
            out.append(sym)
        pos = m.end()
    if text[pos:].strip():
        raise DomainError(f"cannot tokenize expression near {text[pos:]!r}")
    return out


class _Parser:
    def __init__(self, tokens: list[str]):
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise DomainError(f"expected {expected!r}, found {tok!r}")
        self.i += 1
        return tok

    def expr(self):
        node = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek() in ("*", "/"):
            op = self.take()
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        if self.peek() == "-":
            self.take()
            return Neg(self.factor())
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.take()
            return BinOp("^", base, self.factor())
        return base

    def atom(self):
        tok = self.peek()
        if tok is None:
            raise DomainError("unexpected end of expression")
        if tok == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        if tok == "x":
            self.take()
            return X
        if tok in _FUNCS:
            self.take()
            self.take("(")
            arg = self.expr()
            self.take(")")
            return Call(tok, arg)
        try:
            value = float(tok)
        except ValueError:
            raise DomainError(f"unknown token {tok!r} in expression") from None
        self.take()
        return Num(value)


def parse(text: str):
    parser = _Parser(tokenize(text))
    node = parser.expr()
    if parser.peek() is not None:
        raise DomainError(f"trailing tokens in expression: {parser.toks[parser.i:]}")
    return node


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def to_text(node) -> str:
    """Print with parentheses chosen so parse(to_text(t)) == t."""
    text, _ = _render(node)
    return text


def _render(node) -> tuple[str, int]:
    if isinstance(node, Num):
        if node.value >= 0:
            return _fmt(node.value), 5
        return f"-{_fmt(-node.value)}", _PREC["neg"]
    if isinstance(node, Var):
        return "x", 5
    if isinstance(node, Call):
        inner, _ = _render(node.arg)
        return f"{node.name}({inner})", 5
    if isinstance(node, Neg):
        inner, prec = _render(node.arg)
        if prec < _PREC["neg"] or isinstance(node.arg, Neg):
            inner = f"({inner})"
        return f"-{inner}", _PREC["neg"]
    op = node.op
    lt, lp = _render(node.left)
    rt, rp = _render(node.right)
    prec = _PREC[op]
    if op == "^":
        # right associative; negative literals on the left must re-parse as atoms
        if lp <= prec or isinstance(node.left, (Neg,)) or _is_negative_num(node.left):
            lt = f"({lt})"
        if rp < prec:
            rt = f"({rt})"
    else:
        if lp < prec:
            lt = f"({lt})"
        if rp <= prec and op in ("-", "/"):
            rt = f"({rt})"
        elif rp < prec:
            rt = f"({rt})"
    return f"{lt} {op} {rt}" if op in "+-" else f"{lt}{op}{rt}", prec


def _is_negative_num(node) -> bool:
    return isinstance(node, Num) and node.value < 0


def _fmt(v: float) -> str:
    if v == int(v) and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def diff(node):
    """Exact derivative tree with light constant folding."""
    if isinstance(node, Num):
        return ZERO
    if isinstance(node, Var):
        return ONE
    if isinstance(node, Neg):
        return _neg(diff(node.arg))
    if isinstance(node, Call):
        du = diff(node.arg)
        if node.name == "exp":
            return _mul(Call("exp", node.arg), du)
        if node.name == "log":
            return _div(du, node.arg)
        if node.name == "sqrt":
            return _div(du, _mul(Num(2.0), Call("sqrt", node.arg)))
        raise DomainError(f"unknown function {node.name}")
    u, v = node.left, node.right
    du, dv = diff(u), diff(v)
    if node.op == "+":
        return _add(du, dv)
    if node.op == "-":
        return _sub(du, dv)
    if node.op == "*":
        return _add(_mul(du, v), _mul(u, dv))
    if node.op == "/":
        return _div(_sub(_mul(du, v), _mul(u, dv)), BinOp("^", v, Num(2.0)))
    if node.op == "^":
        if isinstance(v, Num):
            return _mul(_mul(v, BinOp("^", u, Num(v.value - 1.0))), du)
        # general power via u^v = exp(v log u)
        term1 = _mul(dv, Call("log", u))
        term2 = _div(_mul(v, du), u)
        return _mul(node, _add(term1, term2))
    raise DomainError(f"unknown operator {node.op}")


def _is_zero(n):
    return isinstance(n, Num) and n.value == 0.0


def _is_one(n):
    return isinstance(n, Num) and n.value == 1.0


def _add(a, b):
    if _is_zero(a):
        return b
    if _is_zero(b):
        return a
    return BinOp("+", a, b)


def _sub(a, b):
    if _is_zero(b):
        return a
    if _is_zero(a):
        return _neg(b)
    return BinOp("-", a, b)


def _mul(a, b):
    if _is_zero(a) or _is_zero(b):
        return ZERO
    if _is_one(a):
        return b
    if _is_one(b):
        return a
    return BinOp("*", a, b)


def _div(a, b):
    if _is_zero(a):
        return ZERO
    if _is_one(b):
        return a
    return BinOp("/", a, b)


def _neg(a):
    if _is_zero(a):
        return ZERO
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def evaluate(node, x):
    """Evaluate at a scalar or numpy array; domain violations raise."""
    if isinstance(node, Num):
        return node.value if np.isscalar(x) else np.full_like(np.asarray(x, float), node.value)
    if isinstance(node, Var):
        return x
    if isinstance(node, Neg):
        return -evaluate(node.arg, x)
    if isinstance(node, Call):
        u = evaluate(node.arg, x)
        if node.name == "exp":
            return np.exp(u) if not np.isscalar(u) else math.exp(u)
        if node.name == "log":
            if np.any(np.asarray(u) <= 0):
                raise DomainError("log of a non-positive value")
            return np.log(u) if not np.isscalar(u) else math.log(u)
        if node.name == "sqrt":
            if np.any(np.asarray(u) < 0):
                raise DomainError("sqrt of a negative value")
            return np.sqrt(u) if not np.isscalar(u) else math.sqrt(u)
    u = evaluate(node.left, x)
    v = evaluate(node.right, x)
    if node.op == "+":
        return u + v
    if node.op == "-":
        return u - v
    if node.op == "*":
        return u * v
    if node.op == "/":
        if np.any(np.asarray(v) == 0):
            raise DomainError("division by zero in expression")
        return u / v
    if node.op == "^":
        return np.power(u, v) if not (np.isscalar(u) and np.isscalar(v)) else u ** v
    raise DomainError(f"unknown operator {node.op}")
