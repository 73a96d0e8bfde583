"""Expression front-end: parsing, evaluation, and symbolic derivatives.

Expressions are immutable trees over real constants, named variables,
unary negation, the binary operators ``+ - * / ^`` and a fixed set of
elementary functions.  Evaluation accepts scalars or numpy arrays and
either returns finite values or raises :class:`~invint.errors.DomainError`;
non-finite results never escape silently.

Grammar (precedence low to high)::

    expr   := term (("+"|"-") term)*
    term   := factor (("*"|"/") factor)*
    factor := "-" factor | power
    power  := atom ("^" factor)?
    atom   := NUMBER | NAME | NAME "(" expr ")" | "(" expr ")"

``^`` is right-associative.  ``pi`` and ``e`` are reserved constant names.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Union

import numpy as np

from .errors import DomainError, ParseError, UnboundVariable, UnknownVariable

Value = Union[float, np.ndarray]
Env = Mapping[str, Value]

_CONSTANTS = {"pi": math.pi, "e": math.e}

_UNARY_FUNCTIONS: dict[str, Callable[[Value], Value]] = {
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "atan": np.arctan,
    "sinh": np.sinh,
    "cosh": np.cosh,
    "tanh": np.tanh,
    "abs": np.abs,
}

# printer precedence levels
_P_ADD, _P_MUL, _P_NEG, _P_POW, _P_ATOM = 1, 2, 3, 4, 5


class Expression:
    """Base class for all expression nodes.  Immutable and hashable."""

    def evaluate(self, env: Env) -> Value:
        """Evaluate under ``env`` (name -> scalar or array).

        Raises DomainError for out-of-domain arguments or non-finite
        results, UnboundVariable for missing bindings.
        """
        with np.errstate(all="ignore"):
            out = self._eval(env)
        if isinstance(out, np.ndarray) and out.ndim > 0:
            if not np.all(np.isfinite(out)):
                raise DomainError("evaluation produced a non-finite value")
            return out
        out = float(out)
        if not math.isfinite(out):
            raise DomainError("evaluation produced a non-finite value")
        return out

    def diff(self, var: str) -> "Expression":
        """Symbolic derivative with respect to ``var``."""
        raise NotImplementedError

    def _eval(self, env: Env) -> Value:
        raise NotImplementedError

    def _fmt(self, prec: int) -> str:
        raise NotImplementedError

    @property
    def variables(self) -> frozenset[str]:
        return frozenset()

    def as_function_of(self, name: str) -> Callable[[Value], Value]:
        """A single-argument evaluator; array input yields array output."""

        def call(x: Value) -> Value:
            out = self.evaluate({name: x})
            if isinstance(x, np.ndarray):
                return np.broadcast_to(np.asarray(out, dtype=float), np.shape(x))
            return out

        return call

    def __str__(self) -> str:
        return self._fmt(0)


@dataclass(frozen=True)
class Const(Expression):
    value: float

    def _eval(self, env: Env) -> Value:
        return self.value

    def diff(self, var: str) -> Expression:
        return Const(0.0)

    def _fmt(self, prec: int) -> str:
        text = repr(self.value)
        if self.value < 0 and prec > _P_NEG:
            return f"({text})"
        return text


@dataclass(frozen=True)
class Var(Expression):
    name: str

    def _eval(self, env: Env) -> Value:
        try:
            return env[self.name]
        except KeyError:
            raise UnboundVariable(f"no binding for variable {self.name!r}") from None

    def diff(self, var: str) -> Expression:
        return Const(1.0 if var == self.name else 0.0)

    def _fmt(self, prec: int) -> str:
        return self.name

    @property
    def variables(self) -> frozenset[str]:
        return frozenset({self.name})


@dataclass(frozen=True)
class Neg(Expression):
    operand: Expression

    def _eval(self, env: Env) -> Value:
        return -self.operand._eval(env)

    def diff(self, var: str) -> Expression:
        return _neg(self.operand.diff(var))

    def _fmt(self, prec: int) -> str:
        text = "-" + self.operand._fmt(_P_NEG)
        return f"({text})" if prec > _P_NEG else text

    @property
    def variables(self) -> frozenset[str]:
        return self.operand.variables


@dataclass(frozen=True)
class BinOp(Expression):
    op: str  # one of + - * / ^
    left: Expression
    right: Expression

    def _eval(self, env: Env) -> Value:
        a = self.left._eval(env)
        b = self.right._eval(env)
        op = self.op
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op == "/":
            if np.any(np.asarray(b) == 0.0):
                raise DomainError("division by zero")
            return a / b
        # power: integral exponents use repeated multiplication and allow
        # any base; fractional exponents require a strictly positive base
        if np.ndim(b) == 0:
            bf = float(b)
            if bf.is_integer():
                return np.asarray(a) ** int(bf) if isinstance(a, np.ndarray) else a ** int(bf)
        if np.any(np.asarray(a) <= 0.0):
            raise DomainError("non-integer power of a non-positive base")
        return np.power(a, b)

    def diff(self, var: str) -> Expression:
        u, v = self.left, self.right
        du, dv = u.diff(var), v.diff(var)
        op = self.op
        if op == "+":
            return _add(du, dv)
        if op == "-":
            return _sub(du, dv)
        if op == "*":
            return _add(_mul(du, v), _mul(u, dv))
        if op == "/":
            return _div(_sub(_mul(du, v), _mul(u, dv)), _pow(v, Const(2.0)))
        if isinstance(v, Const):
            return _mul(_mul(v, _pow(u, Const(v.value - 1.0))), du)
        # u^v = exp(v log u):  (u^v)' = u^v (v' log u + v u'/u)
        return _mul(
            _pow(u, v),
            _add(_mul(dv, Call("log", u)), _mul(v, _div(du, u))),
        )

    def _fmt(self, prec: int) -> str:
        op = self.op
        if op in "+-":
            mine = _P_ADD
            text = f"{self.left._fmt(mine)} {op} {self.right._fmt(mine + 1)}"
        elif op in "*/":
            mine = _P_MUL
            text = f"{self.left._fmt(mine)}{op}{self.right._fmt(mine + 1)}"
        else:  # ^ binds tightest, right-associative, atom-level base
            mine = _P_POW
            text = f"{self.left._fmt(_P_ATOM)}^{self.right._fmt(_P_NEG)}"
        return f"({text})" if prec > mine else text

    @property
    def variables(self) -> frozenset[str]:
        return self.left.variables | self.right.variables


@dataclass(frozen=True)
class Call(Expression):
    func: str
    arg: Expression

    def _eval(self, env: Env) -> Value:
        x = self.arg._eval(env)
        if self.func == "log" and np.any(np.asarray(x) <= 0.0):
            raise DomainError("log of a non-positive number")
        if self.func == "sqrt" and np.any(np.asarray(x) < 0.0):
            raise DomainError("square root of a negative number")
        return _UNARY_FUNCTIONS[self.func](x)

    def diff(self, var: str) -> Expression:
        u = self.arg
        du = u.diff(var)
        f = self.func
        if f == "exp":
            inner: Expression = Call("exp", u)
        elif f == "log":
            return _div(du, u)
        elif f == "sqrt":
            return _div(du, _mul(Const(2.0), Call("sqrt", u)))
        elif f == "sin":
            inner = Call("cos", u)
        elif f == "cos":
            inner = _neg(Call("sin", u))
        elif f == "tan":
            inner = _add(Const(1.0), _pow(Call("tan", u), Const(2.0)))
        elif f == "atan":
            return _div(du, _add(Const(1.0), _pow(u, Const(2.0))))
        elif f == "sinh":
            inner = Call("cosh", u)
        elif f == "cosh":
            inner = Call("sinh", u)
        elif f == "tanh":
            inner = _sub(Const(1.0), _pow(Call("tanh", u), Const(2.0)))
        elif f == "abs":
            inner = _div(u, Call("abs", u))
        else:  # pragma: no cover - parser admits only known functions
            raise ValueError(f"unknown function {f!r}")
        return _mul(du, inner)

    def _fmt(self, prec: int) -> str:
        return f"{self.func}({self.arg._fmt(0)})"

    @property
    def variables(self) -> frozenset[str]:
        return self.arg.variables


# --- smart constructors used by diff(); fold constants, drop units -------


def _const_of(e: Expression) -> float | None:
    return e.value if isinstance(e, Const) else None


def _add(a: Expression, b: Expression) -> Expression:
    ca, cb = _const_of(a), _const_of(b)
    if ca == 0.0:
        return b
    if cb == 0.0:
        return a
    if ca is not None and cb is not None and math.isfinite(ca + cb):
        return Const(ca + cb)
    return BinOp("+", a, b)


def _sub(a: Expression, b: Expression) -> Expression:
    ca, cb = _const_of(a), _const_of(b)
    if cb == 0.0:
        return a
    if ca is not None and cb is not None and math.isfinite(ca - cb):
        return Const(ca - cb)
    if ca == 0.0:
        return _neg(b)
    return BinOp("-", a, b)


def _neg(a: Expression) -> Expression:
    ca = _const_of(a)
    if ca is not None:
        return Const(-ca)
    if isinstance(a, Neg):
        return a.operand
    return Neg(a)


def _mul(a: Expression, b: Expression) -> Expression:
    ca, cb = _const_of(a), _const_of(b)
    if ca == 0.0 or cb == 0.0:
        return Const(0.0)
    if ca == 1.0:
        return b
    if cb == 1.0:
        return a
    if ca is not None and cb is not None and math.isfinite(ca * cb):
        return Const(ca * cb)
    return BinOp("*", a, b)


def _div(a: Expression, b: Expression) -> Expression:
    ca, cb = _const_of(a), _const_of(b)
    if ca == 0.0 and cb != 0.0:
        return Const(0.0)
    if cb == 1.0:
        return a
    if ca is not None and cb is not None and cb != 0.0 and math.isfinite(ca / cb):
        return Const(ca / cb)
    return BinOp("/", a, b)


def _pow(a: Expression, b: Expression) -> Expression:
    cb = _const_of(b)
    if cb == 1.0:
        return a
    if cb == 0.0:
        return Const(1.0)
    return BinOp("^", a, b)


# --- tokenizer and recursive-descent parser -------------------------------

_NUM_RE = re.compile(r"(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?")
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


@dataclass(frozen=True)
class _Token:
    kind: str  # "num" | "name" | "op" | "end"
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        m = _NUM_RE.match(text, i)
        if m:
            tokens.append(_Token("num", m.group(), i))
            i = m.end()
            continue
        m = _NAME_RE.match(text, i)
        if m:
            tokens.append(_Token("name", m.group(), i))
            i = m.end()
            continue
        if ch in "+-*/^()":
            tokens.append(_Token("op", ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token], variables: frozenset[str]):
        self._tokens = tokens
        self._i = 0
        self._variables = variables

    def _peek(self) -> _Token:
        return self._tokens[self._i]

    def _next(self) -> _Token:
        tok = self._tokens[self._i]
        self._i += 1
        return tok

    def _expect_op(self, text: str) -> None:
        tok = self._next()
        if tok.kind != "op" or tok.text != text:
            raise ParseError(f"expected {text!r}", tok.pos)

    def expr(self) -> Expression:
        node = self.term()
        while self._peek().kind == "op" and self._peek().text in "+-":
            op = self._next().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expression:
        node = self.factor()
        while self._peek().kind == "op" and self._peek().text in "*/":
            op = self._next().text
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Expression:
        tok = self._peek()
        if tok.kind == "op" and tok.text == "-":
            self._next()
            return Neg(self.factor())
        return self.power()

    def power(self) -> Expression:
        node = self.atom()
        tok = self._peek()
        if tok.kind == "op" and tok.text == "^":
            self._next()
            node = BinOp("^", node, self.factor())
        return node

    def atom(self) -> Expression:
        tok = self._next()
        if tok.kind == "num":
            return Const(float(tok.text))
        if tok.kind == "name":
            nxt = self._peek()
            if nxt.kind == "op" and nxt.text == "(":
                if tok.text not in _UNARY_FUNCTIONS:
                    raise ParseError(f"unknown function {tok.text!r}", tok.pos)
                self._next()
                inner = self.expr()
                self._expect_op(")")
                return Call(tok.text, inner)
            if tok.text in _CONSTANTS:
                return Const(_CONSTANTS[tok.text])
            if tok.text in self._variables:
                return Var(tok.text)
            raise UnknownVariable(tok.text, tok.pos)
        if tok.kind == "op" and tok.text == "(":
            inner = self.expr()
            self._expect_op(")")
            return inner
        raise ParseError("expected a number, name, or '('", tok.pos)


def parse(text: str, variables: Iterable[str] = ("x",)) -> Expression:
    """Parse ``text`` into an Expression over the declared variables."""
    varset = frozenset(variables)
    reserved = varset & (set(_CONSTANTS) | set(_UNARY_FUNCTIONS))
    if reserved:
        raise ValueError(f"reserved names cannot be variables: {sorted(reserved)}")
    parser = _Parser(_tokenize(text), varset)
    node = parser.expr()
    trailing = parser._peek()
    if trailing.kind != "end":
        raise ParseError(f"unexpected trailing input {trailing.text!r}", trailing.pos)
    return node


def evaluate(e: Expression, bindings: Env) -> Value:
    return e.evaluate(bindings)


def differentiate(e: Expression, var: str = "x") -> Expression:
    return e.diff(var)
