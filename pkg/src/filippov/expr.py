"""Small expression language over the state variables x1, x2, x3.

Vector fields and switching functions are written as plain text, e.g.
``"x2 - 0.5*x1^2"``.  The grammar supports numeric literals, the three
variables, ``+ - * / ^`` (``^`` binds tightest and is right-associative,
then unary minus, then ``* /``, then ``+ -``), parentheses, and the
functions sin, cos, exp, sqrt, abs.  Whitespace is ignored.

Parsed expressions are immutable trees; all operations here are pure.
Evaluation either returns a finite float or raises
:class:`~filippov.errors.EvalDomainError` -- NaN and infinity never
propagate silently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable, Union

import numpy as np

from .errors import EvalDomainError, ExprSyntaxError, UnknownIdentifierError

__all__ = [
    "Expr", "Num", "Var", "Neg", "BinOp", "Call",
    "parse_expr", "format_expr", "evaluate", "compile_expr",
    "ScalarField", "VectorField",
    "gradient_fd", "jacobian_fd", "FD_REL_STEP",
]

VARIABLES = ("x1", "x2", "x3")
FUNCTIONS = ("sin", "cos", "exp", "sqrt", "abs")

# Relative step for central differences: ~cbrt(eps) scaled, balancing
# truncation against round-off for twice-differentiable fields.
FD_REL_STEP = 6e-6


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str  # one of VARIABLES


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
    func: str  # one of FUNCTIONS
    arg: "Expr"


Expr = Union[Num, Var, Neg, BinOp, Call]


# --------------------------------------------------------------------------
# tokenizer / parser
# --------------------------------------------------------------------------

_OPERATOR_CHARS = "+-*/^()"


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    """Return (kind, value, offset) triples; offsets are 1-based."""
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _OPERATOR_CHARS:
            tokens.append(("op", ch, i + 1))
            i += 1
            continue
        if ch.isdigit() or ch == ".":
            j = i
            while j < n and (text[j].isdigit() or text[j] == "."):
                j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            lit = text[i:j]
            try:
                value = float(lit)
            except ValueError:
                raise ExprSyntaxError(f"bad numeric literal '{lit}'", i + 1,
                                      expected="a number") from None
            tokens.append(("num", repr(value), i + 1))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("ident", text[i:j], i + 1))
            i = j
            continue
        raise ExprSyntaxError(f"unexpected character {ch!r}", i + 1,
                              expected="an operand or operator")
    tokens.append(("eof", "", n + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str) -> None:
        kind, value, offset = self.peek()
        if kind == "op" and value == op:
            self.advance()
            return
        found = "end of input" if kind == "eof" else f"'{value}'"
        raise ExprSyntaxError(f"found {found}", offset, expected=f'"{op}"')

    # expr := term (('+'|'-') term)*
    def expr(self) -> Expr:
        node = self.term()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.advance()
                node = BinOp(value, node, self.term())
            else:
                return node

    # term := unary (('*'|'/') unary)*
    def term(self) -> Expr:
        node = self.unary()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "*/":
                self.advance()
                node = BinOp(value, node, self.unary())
            else:
                return node

    # unary := '-' unary | power
    def unary(self) -> Expr:
        kind, value, _ = self.peek()
        if kind == "op" and value == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    # power := atom ('^' unary)?   -- right-associative, allows x^-2
    def power(self) -> Expr:
        node = self.atom()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.advance()
            return BinOp("^", node, self.unary())
        return node

    def atom(self) -> Expr:
        kind, value, offset = self.advance()
        if kind == "num":
            return Num(float(value))
        if kind == "ident":
            if value in VARIABLES:
                return Var(value)
            if value in FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return Call(value, arg)
            raise UnknownIdentifierError(value, offset)
        if kind == "op" and value == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        found = "end of input" if kind == "eof" else f"'{value}'"
        raise ExprSyntaxError(f"found {found}", offset,
                              expected="a number, variable, or '('")


def parse_expr(text: str) -> Expr:
    """Parse expression text into an immutable tree."""
    if not text or not text.strip():
        raise ExprSyntaxError("empty expression", 1, expected="an expression")
    parser = _Parser(text)
    node = parser.expr()
    kind, value, offset = parser.peek()
    if kind != "eof":
        raise ExprSyntaxError(f"found '{value}'", offset,
                              expected="end of input or an operator")
    return node


# --------------------------------------------------------------------------
# printing (parse -> format -> parse yields an identical tree)
# --------------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}
_PREC_NEG = 3
_PREC_ATOM = 5


def _prec(node: Expr) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return _PREC_NEG
    return _PREC_ATOM


def format_expr(node: Expr) -> str:
    """Render a tree back to text with minimal parentheses.

    Reparsing the result reproduces the tree exactly for any tree the
    parser can produce.  (A hand-constructed negative literal formats
    with parentheses and reparses as unary minus of the positive one,
    which is the parser's representation of that value.)
    """
    if isinstance(node, Num):
        if node.value < 0.0 or math.copysign(1.0, node.value) < 0.0:
            return f"({node.value!r})"
        return repr(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Call):
        return f"{node.func}({format_expr(node.arg)})"
    if isinstance(node, Neg):
        inner = format_expr(node.operand)
        if _prec(node.operand) < _PREC_NEG:
            inner = f"({inner})"
        return f"-{inner}"
    assert isinstance(node, BinOp)
    left, right = format_expr(node.left), format_expr(node.right)
    if node.op == "^":
        # '^' is right-associative and binds above unary minus: the left
        # operand must be an atom, the right anything of unary rank or above.
        if _prec(node.left) < _PREC_ATOM:
            left = f"({left})"
        if _prec(node.right) < _PREC_NEG:
            right = f"({right})"
    else:
        prec = _PREC[node.op]
        if _prec(node.left) < prec:
            left = f"({left})"
        if _prec(node.right) <= prec:
            right = f"({right})"
    return f"{left} {node.op} {right}" if node.op in "+-" else f"{left}{node.op}{right}"


# --------------------------------------------------------------------------
# evaluation
# --------------------------------------------------------------------------

def _pow(base: float, exponent: float) -> float:
    if float(exponent).is_integer():
        try:
            return base ** int(exponent)
        except ZeroDivisionError:
            raise EvalDomainError("zero raised to a negative power") from None
        except OverflowError:
            raise EvalDomainError("overflow in power") from None
    if base < 0.0:
        raise EvalDomainError(
            "negative base with non-integer exponent is undefined over the reals")
    try:
        return base ** exponent
    except (ValueError, OverflowError, ZeroDivisionError) as exc:
        raise EvalDomainError(str(exc)) from None


def _div(num: float, den: float) -> float:
    if den == 0.0:
        raise EvalDomainError("division by zero")
    return num / den


def _sqrt(value: float) -> float:
    if value < 0.0:
        raise EvalDomainError("square root of a negative number")
    return math.sqrt(value)


def _exp(value: float) -> float:
    try:
        return math.exp(value)
    except OverflowError:
        raise EvalDomainError("overflow in exp") from None


_FUNC_IMPL = {"sin": math.sin, "cos": math.cos, "exp": _exp,
              "sqrt": _sqrt, "abs": abs}


def _build(node: Expr) -> Callable[[float, float, float], float]:
    """Compile a tree to nested closures; ~5x faster than tree walking,
    which matters in the simulator's inner loop."""
    if isinstance(node, Num):
        value = node.value
        return lambda x1, x2, x3: value
    if isinstance(node, Var):
        if node.name == "x1":
            return lambda x1, x2, x3: x1
        if node.name == "x2":
            return lambda x1, x2, x3: x2
        return lambda x1, x2, x3: x3
    if isinstance(node, Neg):
        inner = _build(node.operand)
        return lambda x1, x2, x3: -inner(x1, x2, x3)
    if isinstance(node, Call):
        func = _FUNC_IMPL[node.func]
        inner = _build(node.arg)
        return lambda x1, x2, x3: func(inner(x1, x2, x3))
    assert isinstance(node, BinOp)
    lhs, rhs = _build(node.left), _build(node.right)
    op = node.op
    if op == "+":
        return lambda x1, x2, x3: lhs(x1, x2, x3) + rhs(x1, x2, x3)
    if op == "-":
        return lambda x1, x2, x3: lhs(x1, x2, x3) - rhs(x1, x2, x3)
    if op == "*":
        return lambda x1, x2, x3: lhs(x1, x2, x3) * rhs(x1, x2, x3)
    if op == "/":
        return lambda x1, x2, x3: _div(lhs(x1, x2, x3), rhs(x1, x2, x3))
    return lambda x1, x2, x3: _pow(lhs(x1, x2, x3), rhs(x1, x2, x3))


@lru_cache(maxsize=512)
def compile_expr(node: Expr) -> Callable[[float, float, float], float]:
    """Compile a tree to a callable (x1, x2, x3) -> float with the same
    domain-error behaviour as :func:`evaluate`."""
    raw = _build(node)

    def compiled(x1: float, x2: float, x3: float) -> float:
        try:
            value = raw(x1, x2, x3)
        except EvalDomainError:
            raise
        except (ValueError, OverflowError, ZeroDivisionError) as exc:
            raise EvalDomainError(str(exc)) from None
        if not math.isfinite(value):
            raise EvalDomainError("expression value is not finite")
        return value

    return compiled


def evaluate(node: Expr, point) -> float:
    """Evaluate a tree at a 3-vector point."""
    x1, x2, x3 = (float(point[0]), float(point[1]), float(point[2]))
    for coord in (x1, x2, x3):
        if not math.isfinite(coord):
            raise EvalDomainError("evaluation point is not finite")
    return compile_expr(node)(x1, x2, x3)


# --------------------------------------------------------------------------
# field wrappers
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ScalarField:
    """A scalar function of (x1, x2, x3) defined by an expression."""

    expr: Expr

    @classmethod
    def parse(cls, text: str) -> "ScalarField":
        return cls(parse_expr(text))

    @cached_property
    def compiled(self) -> Callable[[float, float, float], float]:
        return compile_expr(self.expr)

    def __call__(self, point) -> float:
        return self.compiled(float(point[0]), float(point[1]), float(point[2]))


@dataclass(frozen=True)
class VectorField:
    """Three scalar components forming a vector field on R^3."""

    components: tuple[Expr, Expr, Expr]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if len(self.components) != 3:
            raise ValueError("a vector field needs exactly 3 components")

    @classmethod
    def parse(cls, texts) -> "VectorField":
        texts = tuple(texts)
        if len(texts) != 3:
            raise ValueError("a vector field needs exactly 3 component strings")
        return cls(tuple(parse_expr(t) for t in texts))

    @cached_property
    def compiled(self):
        return tuple(compile_expr(c) for c in self.components)

    def __call__(self, point) -> np.ndarray:
        x1, x2, x3 = float(point[0]), float(point[1]), float(point[2])
        f1, f2, f3 = self.compiled
        return np.array([f1(x1, x2, x3), f2(x1, x2, x3), f3(x1, x2, x3)])


# --------------------------------------------------------------------------
# finite differences
# --------------------------------------------------------------------------

def _as_scalar_callable(field):
    if isinstance(field, ScalarField):
        return lambda p: field(p)
    return field


def gradient_fd(field, point) -> np.ndarray:
    """Central-difference gradient of a scalar field at a 3-vector point.

    Component steps are ``FD_REL_STEP * max(1, |point_i|)``.  Raises
    :class:`EvalDomainError` if any stencil point is not evaluable.
    """
    f = _as_scalar_callable(field)
    point = np.asarray(point, dtype=float)
    grad = np.empty(3)
    for i in range(3):
        h = FD_REL_STEP * max(1.0, abs(point[i]))
        plus = point.copy()
        minus = point.copy()
        plus[i] += h
        minus[i] -= h
        grad[i] = (f(plus) - f(minus)) / (2.0 * h)
    return grad


def jacobian_fd(field, point) -> np.ndarray:
    """Central-difference Jacobian of a vector field at a 3-vector point;
    row i holds the gradient of component i."""
    if isinstance(field, VectorField):
        f = lambda p: field(p)
    else:
        f = field
    point = np.asarray(point, dtype=float)
    jac = np.empty((3, 3))
    for j in range(3):
        h = FD_REL_STEP * max(1.0, abs(point[j]))
        plus = point.copy()
        minus = point.copy()
        plus[j] += h
        minus[j] -= h
        jac[:, j] = (np.asarray(f(plus)) - np.asarray(f(minus))) / (2.0 * h)
    return jac
