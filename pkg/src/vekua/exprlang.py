"""A small expression language for coefficient functions and boundary data.

Grammar (recursive descent, loosest binding first)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | power
    power  := atom ('^' ['-'] INTEGER)?
    atom   := NUMBER | 'i' | NAME | NAME '(' expr (',' expr)* ')' | '(' expr ')'

``^`` binds tighter than unary minus, so ``-x^2`` is ``-(x^2)``.  The only
complex literal is ``i``.  Names are coordinates (``x``, ``y``, ``z3`` by
default, or whatever the caller declares), declared parameters, or ``pi``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Mapping, Union

import numpy as np

from .errors import ExprDomainError, ExprSyntaxError
from .jets import Jet, variables

COORDINATES = ("x", "y", "z3")
UNARY_FUNCTIONS = ("exp", "sin", "cos", "sinh", "cosh", "sqrt", "log")
BINARY_FUNCTIONS = ("atan2",)


# ---------- AST ----------

@dataclass(frozen=True)
class Num:
    value: complex


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Param:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple


Expr = Union[Num, Var, Param, Neg, BinOp, Pow, Call]


# ---------- lexer ----------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^(),]))"
)


def _tokenize(text):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", _byte_offset(text, pos))
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


def _byte_offset(text, pos):
    return len(text[:pos].encode("utf-8"))


class _Parser:
    def __init__(self, text, params, coordinates):
        self.text = text
        self.params = frozenset(params)
        self.coordinates = tuple(coordinates)
        self.tokens = _tokenize(text)
        self.i = 0

    def error(self, message, token=None):
        token = token or self.tokens[self.i]
        return ExprSyntaxError(message, _byte_offset(self.text, token[2]))

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        tok = self.peek()
        if tok[1] != value or tok[0] == "end":
            raise self.error(f"expected {value!r}")
        return self.take()

    def parse(self):
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            if tok[1] == ")":
                raise self.error("unbalanced parentheses")
            raise self.error(f"unexpected token {tok[1]!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            self.take()
            return Neg(self.unary())
        if tok[0] == "op" and tok[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            sign = 1
            if self.peek()[1] == "-":
                self.take()
                sign = -1
            tok = self.peek()
            if tok[0] != "num" or not tok[1].isdigit():
                raise self.error("exponent of '^' must be an integer literal")
            self.take()
            base = Pow(base, sign * int(tok[1]))
            if self.peek()[1] == "^":
                raise self.error("chained '^' is not supported; use parentheses")
        return base

    def atom(self):
        tok = self.peek()
        kind, text = tok[0], tok[1]
        if kind == "num":
            self.take()
            return Num(complex(float(text)))
        if kind == "name":
            self.take()
            if self.peek()[1] == "(":
                return self.call(text, tok)
            if text == "i":
                return Num(1j)
            if text in self.coordinates:
                return Var(text)
            if text in self.params:
                return Param(text)
            if text == "pi":
                return Num(complex(math.pi))
            raise self.error(f"unknown identifier {text!r}", tok)
        if text == "(":
            self.take()
            node = self.expr()
            if self.peek()[1] != ")":
                raise self.error("unbalanced parentheses")
            self.take()
            return node
        if kind == "end":
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected token {text!r}")

    def call(self, name, tok):
        if name in UNARY_FUNCTIONS:
            arity = 1
        elif name in BINARY_FUNCTIONS:
            arity = 2
        else:
            raise self.error(f"unknown function {name!r}", tok)
        self.expect("(")
        args = [self.expr()]
        while self.peek()[1] == ",":
            self.take()
            args.append(self.expr())
        if self.peek()[1] != ")":
            raise self.error("unbalanced parentheses")
        self.take()
        if len(args) != arity:
            raise self.error(f"{name} takes {arity} argument(s), got {len(args)}", tok)
        return Call(name, tuple(args))


def parse(text, params=(), coordinates=COORDINATES):
    """Parse ``text`` into an :data:`Expr` tree.

    ``params`` declares the admissible parameter names; any other identifier
    that is not a coordinate, ``i`` or ``pi`` is rejected.
    """
    return _Parser(text, params, coordinates).parse()


# ---------- printing ----------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _fmt_number(v):
    if v == 1j:
        return "i"
    if v.imag != 0:
        raise ValueError(f"cannot print complex literal {v}")
    r = repr(float(v.real))
    if r in ("inf", "nan"):
        raise ValueError(f"cannot print {r}")
    return r


def to_string(e):
    """Render ``e`` so that ``parse(to_string(e))`` rebuilds the same tree."""
    if isinstance(e, Num):
        if e.value == complex(math.pi):
            return "pi"
        return _fmt_number(e.value)
    if isinstance(e, (Var, Param)):
        return e.name
    if isinstance(e, Neg):
        inner = to_string(e.arg)
        if isinstance(e.arg, BinOp):
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(e, Pow):
        base = to_string(e.base)
        if not isinstance(e.base, (Var, Param, Call)) and not (
            isinstance(e.base, Num) and e.base.value.imag == 0
        ):
            base = f"({base})"
        return f"{base}^{e.exponent}"
    if isinstance(e, Call):
        return f"{e.func}({', '.join(to_string(a) for a in e.args)})"
    if isinstance(e, BinOp):
        left = to_string(e.left)
        right = to_string(e.right)
        if isinstance(e.left, BinOp) and _PREC[e.left.op] < _PREC[e.op]:
            left = f"({left})"
        if isinstance(e.right, BinOp) and _PREC[e.right.op] <= _PREC[e.op]:
            right = f"({right})"
        if isinstance(e.right, Neg):
            right = f"({right})"
        return f"{left} {e.op} {right}"
    raise TypeError(f"not an expression node: {e!r}")


def parameters(e):
    """Set of parameter names referenced in ``e``."""
    if isinstance(e, Param):
        return {e.name}
    if isinstance(e, Neg):
        return parameters(e.arg)
    if isinstance(e, Pow):
        return parameters(e.base)
    if isinstance(e, BinOp):
        return parameters(e.left) | parameters(e.right)
    if isinstance(e, Call):
        return set().union(*(parameters(a) for a in e.args))
    return set()


def is_constant(e):
    if isinstance(e, Var):
        return False
    if isinstance(e, Neg):
        return is_constant(e.arg)
    if isinstance(e, Pow):
        return is_constant(e.base)
    if isinstance(e, BinOp):
        return is_constant(e.left) and is_constant(e.right)
    if isinstance(e, Call):
        return all(is_constant(a) for a in e.args)
    return True


# ---------- evaluation ----------

def evaluate(e, env: Mapping[str, Jet], bindings: Mapping[str, complex] = None):
    """Evaluate ``e`` with coordinate jets ``env`` and parameter ``bindings``.

    Domain errors are reported with the innermost offending subexpression.
    """
    bindings = bindings or {}
    template = next(iter(env.values()))
    return _eval(e, env, bindings, template)


def _eval(e, env, bindings, template):
    if isinstance(e, Num):
        return Jet.constant(np.broadcast_to(e.value, template.shape), template.nvars, template.order)
    if isinstance(e, Var):
        try:
            return env[e.name]
        except KeyError:
            raise ExprDomainError(f"coordinate {e.name!r} is not available here") from None
    if isinstance(e, Param):
        try:
            value = bindings[e.name]
        except KeyError:
            raise ExprDomainError(f"parameter {e.name!r} is not bound") from None
        return Jet.constant(np.broadcast_to(complex(value), template.shape), template.nvars, template.order)
    try:
        if isinstance(e, Neg):
            return -_eval(e.arg, env, bindings, template)
        if isinstance(e, Pow):
            base = _eval(e.base, env, bindings, template)
            return _guard(lambda: base ** e.exponent, e)
        if isinstance(e, BinOp):
            a = _eval(e.left, env, bindings, template)
            b = _eval(e.right, env, bindings, template)
            if e.op == "+":
                return a + b
            if e.op == "-":
                return a - b
            if e.op == "*":
                return a * b
            return _guard(lambda: a / b, e)
        if isinstance(e, Call):
            args = [_eval(a, env, bindings, template) for a in e.args]
            if e.func == "atan2":
                return _guard(lambda: Jet.atan2(args[0], args[1]), e)
            return _guard(lambda: getattr(args[0], e.func)(), e)
    except FloatingPointError as exc:
        raise ExprDomainError(str(exc), to_string(e)) from None
    raise TypeError(f"not an expression node: {e!r}")


def _guard(fn, node):
    try:
        with np.errstate(divide="raise", invalid="raise", over="ignore"):
            out = fn()
    except ExprDomainError as exc:
        if exc.subexpr is None:
            raise ExprDomainError(str(exc), to_string(node)) from None
        raise
    except (FloatingPointError, ZeroDivisionError) as exc:
        raise ExprDomainError(str(exc), to_string(node)) from None
    if not np.all(np.isfinite(out.coef)):
        raise ExprDomainError("non-finite result", to_string(node))
    return out


def _as_expr(e, params, coordinates):
    if isinstance(e, str):
        return parse(e, params, coordinates)
    return e


def eval_jet2(e, point, bindings=None, order=2):
    """Value and partials up to ``order`` of a 2D expression at ``point``."""
    bindings = dict(bindings or {})
    e = _as_expr(e, bindings, COORDINATES)
    x, y = variables(point, order)
    return evaluate(e, {"x": x, "y": y}, bindings)


def eval_jet3(e, point, bindings=None, order=2):
    """3D analogue of :func:`eval_jet2` over (x, y, z3)."""
    bindings = dict(bindings or {})
    e = _as_expr(e, bindings, COORDINATES)
    x, y, z = variables(point, order)
    return evaluate(e, {"x": x, "y": y, "z3": z}, bindings)
