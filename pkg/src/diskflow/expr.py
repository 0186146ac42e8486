"""Holomorphic expression trees: parsing, evaluation, differentiation.

The grammar covers everything the rest of the package needs: rational
arithmetic, powers (principal branch for non-integer exponents), sqrt,
exp, and log.  On the unit disk all formulas of interest keep the
arguments of sqrt/log in the right half-plane, so principal branches make
every expression single-valued.

Also provides the Berkson-Porta factor p(z) = -f(z)/(1-z)^2 of a vector
field, a grid check that Re p >= 0 (the generator criterion), and the
boundary-limit estimator used for every angular limit in the package.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import (
    ExpressionSyntaxError,
    GridUnreliableError,
    SingularEvaluationError,
)
from .extrapolate import INFINITE_THRESHOLD, sequence_limit
from .geometry import inverse_cayley


# --- expression nodes -------------------------------------------------------


class Expr:
    """Base class for immutable expression nodes."""

    __slots__ = ()

    def __call__(self, z: complex) -> complex:
        return evaluate(self, z)

    def __str__(self) -> str:
        return _print(self, 0)

    def __repr__(self) -> str:
        return f"parse({str(self)!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Expr) and str(self) == str(other)

    def __hash__(self) -> int:
        return hash(str(self))


@dataclass(frozen=True, eq=False)
class Const(Expr):
    value: complex


@dataclass(frozen=True, eq=False)
class Var(Expr):
    pass


@dataclass(frozen=True, eq=False)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True, eq=False)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=False)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=False)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=False)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=False)
class Pow(Expr):
    base: Expr
    exponent: Expr


@dataclass(frozen=True, eq=False)
class Func(Expr):
    name: str  # sqrt | exp | log
    arg: Expr


_FUNCS = ("sqrt", "exp", "log")


# --- parsing -----------------------------------------------------------------


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.tokens: list[tuple[str, str, int]] = []
        self._scan()
        self.index = 0

    def _scan(self):
        text, n = self.text, len(self.text)
        i = 0
        while i < n:
            c = text[i]
            if c.isspace():
                i += 1
                continue
            if c in "+-*/^()":
                self.tokens.append(("op", c, i))
                i += 1
                continue
            if c.isdigit() or (c == "." and i + 1 < n and text[i + 1].isdigit()):
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
                self.tokens.append(("num", text[i:j], i))
                i = j
                continue
            if c.isalpha():
                j = i
                while j < n and text[j].isalnum():
                    j += 1
                self.tokens.append(("name", text[i:j], i))
                i = j
                continue
            raise ExpressionSyntaxError(f"unexpected character {c!r}", position=i)
        # attribute end-of-input errors to the last token, not one past it
        end_pos = self.tokens[-1][2] if self.tokens else n
        self.tokens.append(("end", "", end_pos))

    def peek(self):
        return self.tokens[self.index]

    def next(self):
        tok = self.tokens[self.index]
        if tok[0] != "end":
            self.index += 1
        return tok


class _Parser:
    """Recursive descent for the grammar:

        expr   := term (('+'|'-') term)*
        term   := unary (('*'|'/') unary)*
        unary  := '-' unary | power
        power  := primary ('^' unary)?
        primary:= number | 'i' | 'z' | func '(' expr ')' | '(' expr ')'

    '^' binds tighter than unary minus, so -z^2 is -(z^2) and z^-2 is
    z^(-2).
    """

    def __init__(self, text: str):
        self.toks = _Tokenizer(text)

    def parse(self) -> Expr:
        node = self.expr()
        kind, val, pos = self.toks.peek()
        if kind != "end":
            raise ExpressionSyntaxError(f"unexpected {val!r}", position=pos)
        return node

    def expr(self) -> Expr:
        node = self.term()
        while True:
            kind, val, _ = self.toks.peek()
            if kind == "op" and val in "+-":
                self.toks.next()
                rhs = self.term()
                node = Add(node, rhs) if val == "+" else Sub(node, rhs)
            else:
                return node

    def term(self) -> Expr:
        node = self.unary()
        while True:
            kind, val, _ = self.toks.peek()
            if kind == "op" and val in "*/":
                self.toks.next()
                rhs = self.unary()
                node = Mul(node, rhs) if val == "*" else Div(node, rhs)
            else:
                return node

    def unary(self) -> Expr:
        kind, val, _ = self.toks.peek()
        if kind == "op" and val == "-":
            self.toks.next()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.primary()
        kind, val, _ = self.toks.peek()
        if kind == "op" and val == "^":
            self.toks.next()
            return Pow(base, self.unary())
        return base

    def primary(self) -> Expr:
        kind, val, pos = self.toks.next()
        if kind == "num":
            return Const(complex(float(val), 0.0))
        if kind == "name":
            if val == "i":
                return Const(1j)
            if val == "z":
                return Var()
            if val in _FUNCS:
                k2, v2, p2 = self.toks.next()
                if not (k2 == "op" and v2 == "("):
                    raise ExpressionSyntaxError(
                        f"expected '(' after {val!r}", position=p2
                    )
                inner = self.expr()
                k3, v3, p3 = self.toks.next()
                if not (k3 == "op" and v3 == ")"):
                    raise ExpressionSyntaxError("expected ')'", position=p3)
                return Func(val, inner)
            raise ExpressionSyntaxError(f"unknown identifier {val!r}", position=pos)
        if kind == "op" and val == "(":
            inner = self.expr()
            k2, v2, p2 = self.toks.next()
            if not (k2 == "op" and v2 == ")"):
                raise ExpressionSyntaxError("expected ')'", position=p2)
            return inner
        if kind == "end":
            raise ExpressionSyntaxError("unexpected end of input", position=pos)
        raise ExpressionSyntaxError(f"unexpected {val!r}", position=pos)


def parse(text: str) -> Expr:
    """Parse an expression string into an immutable tree."""
    return _Parser(text).parse()


# --- printing ----------------------------------------------------------------

# precedence levels: add 1, mul 2, unary 3, power 4, atom 5
def _print(node: Expr, parent_prec: int) -> str:
    text, prec = _print_prec(node)
    if prec < parent_prec:
        return f"({text})"
    return text


def _format_const(v: complex) -> str:
    def real_part(x: float) -> str:
        if x == int(x) and abs(x) < 1e15:
            return str(int(x))
        return repr(x)

    if v.imag == 0:
        s = real_part(v.real)
        return s
    if v.real == 0:
        if v.imag == 1:
            return "i"
        return f"{real_part(v.imag)}*i"
    re, im = real_part(v.real), real_part(v.imag)
    sign = "+" if v.imag >= 0 else "-"
    mag = real_part(abs(v.imag))
    tail = "i" if abs(v.imag) == 1 else f"{mag}*i"
    return f"({re}{sign}{tail})"


def _print_prec(node: Expr) -> tuple[str, int]:
    if isinstance(node, Const):
        s = _format_const(node.value)
        neg = s.startswith("-")
        return s, 3 if neg else 5
    if isinstance(node, Var):
        return "z", 5
    if isinstance(node, Neg):
        return "-" + _print(node.arg, 3), 3
    if isinstance(node, Add):
        return _print(node.left, 1) + "+" + _print(node.right, 2), 1
    if isinstance(node, Sub):
        return _print(node.left, 1) + "-" + _print(node.right, 2), 1
    if isinstance(node, Mul):
        return _print(node.left, 2) + "*" + _print(node.right, 3), 2
    if isinstance(node, Div):
        return _print(node.left, 2) + "/" + _print(node.right, 3), 2
    if isinstance(node, Pow):
        # exponent at unary level, base strictly atomic
        return _print(node.base, 5) + "^" + _print(node.exponent, 4), 4
    if isinstance(node, Func):
        return f"{node.name}({_print(node.arg, 0)})", 5
    raise TypeError(f"not an expression node: {node!r}")


# --- evaluation --------------------------------------------------------------


def _pow(base: complex, exponent: complex) -> complex:
    if exponent.imag == 0 and exponent.real == int(exponent.real):
        n = int(exponent.real)
        if -64 <= n <= 64:
            if n < 0 and base == 0:
                raise ZeroDivisionError("0 raised to a negative power")
            return base**n
    if base == 0:
        if exponent.real > 0 and exponent.imag == 0:
            return 0j
        raise ZeroDivisionError("0 raised to a non-positive power")
    return cmath.exp(exponent * cmath.log(base))


def evaluate(node: Expr, z: complex) -> complex:
    """Evaluate at z with principal branches; singularities raise."""
    try:
        v = _eval(node, complex(z))
    except (ZeroDivisionError, ValueError, OverflowError) as exc:
        raise SingularEvaluationError(
            f"singular evaluation at z = {complex(z)}: {exc}"
        ) from exc
    if v != v:  # NaN propagated from a library call
        raise SingularEvaluationError(f"evaluation produced NaN at z = {complex(z)}")
    return v


def _eval(node: Expr, z: complex) -> complex:
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return z
    if isinstance(node, Neg):
        return -_eval(node.arg, z)
    if isinstance(node, Add):
        return _eval(node.left, z) + _eval(node.right, z)
    if isinstance(node, Sub):
        return _eval(node.left, z) - _eval(node.right, z)
    if isinstance(node, Mul):
        return _eval(node.left, z) * _eval(node.right, z)
    if isinstance(node, Div):
        return _eval(node.left, z) / _eval(node.right, z)
    if isinstance(node, Pow):
        return _pow(_eval(node.base, z), _eval(node.exponent, z))
    if isinstance(node, Func):
        v = _eval(node.arg, z)
        if node.name == "sqrt":
            return cmath.sqrt(v)
        if node.name == "exp":
            return cmath.exp(v)
        return cmath.log(v)
    raise TypeError(f"not an expression node: {node!r}")


def compile_expr(node: Expr):
    """Return a fast ``z -> complex`` callable for the expression.

    Generates a python lambda over cmath primitives; identical semantics
    to :func:`evaluate` including the singular-evaluation wrapping.
    """
    source = _codegen(node)
    raw = eval(  # noqa: S307 - source is generated from our own AST
        f"lambda z: ({source})",
        {
            "sqrt": cmath.sqrt,
            "exp": cmath.exp,
            "log": cmath.log,
            "_pow": _pow,
            "__builtins__": {},
        },
    )

    def call(z: complex) -> complex:
        try:
            v = raw(complex(z))
        except (ZeroDivisionError, ValueError, OverflowError) as exc:
            raise SingularEvaluationError(
                f"singular evaluation at z = {complex(z)}: {exc}"
            ) from exc
        if v != v:
            raise SingularEvaluationError(
                f"evaluation produced NaN at z = {complex(z)}"
            )
        return v

    call.source = source
    return call


def _codegen(node: Expr) -> str:
    if isinstance(node, Const):
        return repr(node.value)
    if isinstance(node, Var):
        return "z"
    if isinstance(node, Neg):
        return f"(-{_codegen(node.arg)})"
    if isinstance(node, Add):
        return f"({_codegen(node.left)}+{_codegen(node.right)})"
    if isinstance(node, Sub):
        return f"({_codegen(node.left)}-{_codegen(node.right)})"
    if isinstance(node, Mul):
        return f"({_codegen(node.left)}*{_codegen(node.right)})"
    if isinstance(node, Div):
        return f"({_codegen(node.left)}/{_codegen(node.right)})"
    if isinstance(node, Pow):
        exp = node.exponent
        if isinstance(exp, Const) and exp.value.imag == 0:
            n = exp.value.real
            if n == int(n) and 0 <= n <= 64:
                return f"({_codegen(node.base)}**{int(n)})"
        return f"_pow({_codegen(node.base)},{_codegen(node.exponent)})"
    if isinstance(node, Func):
        return f"{node.name}({_codegen(node.arg)})"
    raise TypeError(f"not an expression node: {node!r}")


# --- smart constructors (constant folding) ----------------------------------


def const(v: complex) -> Const:
    return Const(complex(v))


ZERO = Const(0j)
ONE = Const(1 + 0j)


def _is_const(node: Expr, v=None) -> bool:
    if not isinstance(node, Const):
        return False
    return v is None or node.value == v


def add(a: Expr, b: Expr) -> Expr:
    if _is_const(a, 0):
        return b
    if _is_const(b, 0):
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    return Add(a, b)


def sub(a: Expr, b: Expr) -> Expr:
    if _is_const(b, 0):
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value - b.value)
    if _is_const(a, 0):
        return neg(b)
    return Sub(a, b)


def neg(a: Expr) -> Expr:
    if isinstance(a, Const):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def mul(a: Expr, b: Expr) -> Expr:
    if _is_const(a, 0) or _is_const(b, 0):
        return ZERO
    if _is_const(a, 1):
        return b
    if _is_const(b, 1):
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    return Mul(a, b)


def div(a: Expr, b: Expr) -> Expr:
    if _is_const(a, 0):
        return ZERO
    if _is_const(b, 1):
        return a
    if isinstance(a, Const) and isinstance(b, Const) and b.value != 0:
        return Const(a.value / b.value)
    return Div(a, b)


def power(a: Expr, b: Expr) -> Expr:
    if _is_const(b, 1):
        return a
    if _is_const(b, 0):
        return ONE
    return Pow(a, b)


# --- differentiation ---------------------------------------------------------


def differentiate(node: Expr) -> Expr:
    """Symbolic derivative with respect to z, with constant folding."""
    if isinstance(node, Const):
        return ZERO
    if isinstance(node, Var):
        return ONE
    if isinstance(node, Neg):
        return neg(differentiate(node.arg))
    if isinstance(node, Add):
        return add(differentiate(node.left), differentiate(node.right))
    if isinstance(node, Sub):
        return sub(differentiate(node.left), differentiate(node.right))
    if isinstance(node, Mul):
        return add(
            mul(differentiate(node.left), node.right),
            mul(node.left, differentiate(node.right)),
        )
    if isinstance(node, Div):
        return div(
            sub(
                mul(differentiate(node.left), node.right),
                mul(node.left, differentiate(node.right)),
            ),
            power(node.right, const(2)),
        )
    if isinstance(node, Pow):
        u, v = node.base, node.exponent
        du = differentiate(u)
        if isinstance(v, Const):
            return mul(mul(v, power(u, const(v.value - 1))), du)
        dv = differentiate(v)
        # u^v * (v' log u + v u'/u)
        return mul(
            node,
            add(mul(dv, Func("log", u)), mul(v, div(du, u))),
        )
    if isinstance(node, Func):
        du = differentiate(node.arg)
        if node.name == "sqrt":
            return div(du, mul(const(2), node))
        if node.name == "exp":
            return mul(node, du)
        return div(du, node.arg)
    raise TypeError(f"not an expression node: {node!r}")


# --- generator structure -----------------------------------------------------


def berkson_porta_p(f: Expr) -> Expr:
    """The factor p with f(z) = -(1-z)^2 p(z), i.e. p = -f/(1-z)^2."""
    one_minus_z = Sub(ONE, Var())
    return div(neg(f), power(one_minus_z, const(2)))


def validate_generator(f: Expr, grid_density: int = 24) -> dict:
    """Check Re p >= 0 on a polar grid; the semigroup generator criterion.

    Returns ``{"min_re_p", "is_generator", "witness", "skipped"}``.  Grid
    points where evaluation is singular are skipped; more than 10% skips
    raises GridUnreliableError.
    """
    if grid_density < 8:
        raise ValueError("grid_density must be at least 8")
    p = compile_expr(berkson_porta_p(f))
    total = 0
    skipped = 0
    min_re = math.inf
    witness = 0j
    for j in range(grid_density):
        r = (j + 0.5) / grid_density
        # push a few rings very close to the circle where Re p bottoms out
        if j >= grid_density - 3:
            r = 1.0 - 10.0 ** -(j - grid_density + 4)
        for k in range(grid_density):
            theta = 2 * math.pi * (k + 0.5) / grid_density
            z = r * cmath.exp(1j * theta)
            total += 1
            try:
                value = p(z)
            except SingularEvaluationError:
                skipped += 1
                continue
            if value.real < min_re:
                min_re = value.real
                witness = z
    if skipped > 0.10 * total:
        raise GridUnreliableError(
            f"{skipped}/{total} grid points were singular"
        )
    return {
        "min_re_p": min_re,
        "is_generator": min_re >= -1e-9,
        "witness": witness,
        "skipped": skipped,
    }


# --- boundary limits ---------------------------------------------------------


@dataclass(frozen=True)
class BoundaryLimitEstimate:
    """Extrapolated limit of an expression at the boundary point 1."""

    value: complex
    converged: bool
    approach: str
    samples_used: int
    infinite: bool = False


def _approach_points(approach: str):
    """Yield the sampling schedule for an approach tag.

    radial and stolz-ray(theta) use z_k = 1 - 2^-k e^{i theta}; the
    tangential curve follows the horocycle d(z) = 1/c via the Cayley
    transform, z_k = inverse_cayley(c + i 2^k).
    """
    tag, arg = approach, 0.0
    if "(" in approach:
        tag, rest = approach.split("(", 1)
        arg = float(rest.rstrip(")"))
    if tag == "radial":
        theta = 0.0
    elif tag == "stolz-ray":
        theta = arg
        if not abs(theta) < math.pi / 2:
            raise ValueError("stolz-ray angle must satisfy |theta| < pi/2")
    elif tag == "tangential-curve":
        c = arg if arg > 0 else 1.0
        for k in range(4, 41):
            yield inverse_cayley(complex(c, 2.0**k))
        return
    else:
        raise ValueError(f"unknown approach {approach!r}")
    direction = cmath.exp(1j * theta)
    for k in range(4, 41):
        yield 1.0 - 2.0**-k * direction


def boundary_limit(g, approach: str = "radial", tol: float = 1e-6) -> BoundaryLimitEstimate:
    """Estimate the limit of g along an approach to the boundary point 1.

    ``g`` is an expression or any complex-valued callable.  Samples along
    the geometric schedule, accelerates, and stops at the first window of
    three consecutive accelerated values within ``tol``.  Values past
    1e8 in modulus are reported as numerically infinite.
    """
    fn = compile_expr(g) if isinstance(g, Expr) else g
    values = []
    for z in _approach_points(approach):
        try:
            v = fn(z)
        except SingularEvaluationError:
            continue
        values.append(v)
        if abs(v) > INFINITE_THRESHOLD and len(values) >= 3:
            if all(abs(u) > INFINITE_THRESHOLD for u in values[-3:]):
                return BoundaryLimitEstimate(
                    value=v,
                    converged=True,
                    approach=approach,
                    samples_used=len(values),
                    infinite=True,
                )
    value, converged, used = sequence_limit(values, tol=tol)
    infinite = abs(value) > INFINITE_THRESHOLD
    return BoundaryLimitEstimate(
        value=value,
        converged=converged and not infinite,
        approach=approach,
        samples_used=used,
        infinite=infinite,
    )
