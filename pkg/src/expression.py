"""
Expression trees over the series builders, and the small language used by
`expand`.

Every node knows a lower bound for its valuation; build(N) asks each child for
exactly the order the product, quotient and power rules need, so the result
is exact below q^N.
"""

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Tuple, Union

from src.cfractions import CFName, cf_offset, cf_series
from src.eisenstein import LambertSpec, lambert_series
from src.errors import ExpressionParseError, InsufficientOrderError, PreconditionError
from src.field import (BETA, GOLDEN_M, GOLDEN_P, SQRT5, SQRT_10M2S5, SQRT_10P2S5,
                       SQRT_50M10S5, KElem, alpha)
from src.qfunctions import (EtaSpec, MonomialArg, eta_quotient, omega,
                            pochhammer_product, theta_f)
from src.series import (QSeries, constant, monomial, s_add, s_mul, s_pow, s_scale,
                        s_substitute, s_truncate, s_unit_inv, zero)
from src.series_cache import SeriesCache
from src.utils import fmt_rat, parse_rat

logger = logging.getLogger(__name__)


def _coerce(value) -> "Expr":
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, Fraction, KElem)):
        return Const(value)
    raise TypeError(f"cannot use {type(value).__name__} in an expression")


class Expr:
    """Base class of expression nodes (frozen dataclasses, hashable)."""

    def valuation(self) -> Fraction:
        raise NotImplementedError

    def needs_field(self) -> bool:
        return any(child.needs_field() for child in self.children())

    def children(self) -> Tuple["Expr", ...]:
        return ()

    def _build(self, order: Fraction) -> QSeries:
        raise NotImplementedError

    def build(self, order) -> QSeries:
        """Series exact below q^order."""
        return SeriesCache().get(self, parse_rat(order), self._build)

    def __add__(self, other):
        return Sum((self, _coerce(other)))

    def __radd__(self, other):
        return Sum((_coerce(other), self))

    def __sub__(self, other):
        return Sum((self, -_coerce(other)))

    def __rsub__(self, other):
        return Sum((_coerce(other), -self))

    def __neg__(self):
        if isinstance(self, Const):
            return Const(-self.value)
        return Product((Const(-1), self))

    def __mul__(self, other):
        other = _coerce(other)
        if isinstance(self, Const) and isinstance(other, Const):
            return Const(self.value * other.value)
        return Product((self, other))

    def __rmul__(self, other):
        return _coerce(other) * self

    def __truediv__(self, other):
        other = _coerce(other)
        if isinstance(other, Const):
            return self * Const(KElem.coerce(1) / other.value)
        return Quotient(self, other)

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def __pow__(self, exponent):
        return power(self, exponent)


@dataclass(frozen=True)
class Const(Expr):
    value: Union[int, Fraction, KElem]

    def __post_init__(self):
        v = self.value
        if isinstance(v, KElem) and v.is_rational():
            v = v.rational()
        if isinstance(v, Fraction) and v.denominator == 1:
            v = v.numerator
        object.__setattr__(self, "value", v)

    def valuation(self):
        return Fraction(0)

    def needs_field(self):
        return isinstance(self.value, KElem)

    def _build(self, order):
        return constant(self.value, order)

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class Monomial(Expr):
    exp: Fraction

    def valuation(self):
        return Fraction(self.exp)

    def _build(self, order):
        return monomial(self.exp, 1, order) if order > self.exp else zero(order)

    def __str__(self):
        return f"q^({fmt_rat(self.exp)})"


@dataclass(frozen=True)
class Poch(Expr):
    """prod_{a in args} prod_{k>=0} (1 + a q^{mk})."""

    args: Tuple[MonomialArg, ...]
    m: Fraction

    def valuation(self):
        return Fraction(0)

    def _build(self, order):
        return pochhammer_product(self.args, self.m, order)

    def __str__(self):
        return f"poch({', '.join(map(str, self.args))}; {fmt_rat(self.m)})"


@dataclass(frozen=True)
class Theta(Expr):
    a: MonomialArg
    b: MonomialArg

    def valuation(self):
        A, B = self.a.exp, self.b.exp
        vertex = -(A - B) / (2 * (A + B))
        lo = vertex.numerator // vertex.denominator
        return min(((A + B) * n * n + (A - B) * n) / 2 for n in (lo, lo + 1))

    def _build(self, order):
        return theta_f(self.a, self.b, order)

    def __str__(self):
        return f"f({self.a}, {self.b})"


@dataclass(frozen=True)
class Eta(Expr):
    spec: EtaSpec

    def valuation(self):
        return self.spec.offset

    def _build(self, order):
        return eta_quotient(self.spec, order)

    def __str__(self):
        return " ".join(f"eta({fmt_rat(t)})^({fmt_rat(e)})" for t, e in self.spec.factors)


@dataclass(frozen=True)
class Omega(Expr):
    k: int
    scale: Fraction = Fraction(1)

    def valuation(self):
        return Fraction(0)

    def needs_field(self):
        return self.k != 5

    def _build(self, order):
        return omega(self.k, self.scale, order)

    def __str__(self):
        return f"Omega{self.k}(q^{fmt_rat(self.scale)})"


@dataclass(frozen=True)
class CF(Expr):
    name: CFName
    scale: Fraction = Fraction(1)

    def valuation(self):
        return cf_offset(self.name) * self.scale

    def _build(self, order):
        return cf_series(self.name, self.scale, order)

    def __str__(self):
        return f"{self.name.value}(q^{fmt_rat(self.scale)})"


@dataclass(frozen=True)
class Lambert(Expr):
    spec: LambertSpec

    def valuation(self):
        return Fraction(min(a for _, a in self.spec.terms))

    def _build(self, order):
        return lambert_series(self.spec, order)

    def __str__(self):
        return f"lambert({self.spec.modulus}, {list(self.spec.terms)})"


@dataclass(frozen=True)
class Series(Expr):
    """Leaf around a builder(order) -> QSeries with a known valuation bound."""

    label: str
    builder: Callable
    val: Fraction = Fraction(0)
    field_coeffs: bool = False

    def valuation(self):
        return Fraction(self.val)

    def needs_field(self):
        return self.field_coeffs

    def _build(self, order):
        return self.builder(order)

    def __str__(self):
        return self.label


def _build_power(child: Expr, r: Fraction, order: Fraction) -> QSeries:
    # child^r is exact below e0*r + (O - e0), so ask for O = N + e0(1 - r)
    v = child.valuation()
    built = child.build(order + v * (1 - r))
    if built.is_zero():
        if r > 0:
            return zero(min(order, built.order * r))
        raise PreconditionError(f"negative or zero power of a series that vanishes below q^{fmt_rat(built.order)}")
    if built.e0 != v and order + built.e0 * (1 - r) > built.order:
        built = child.build(order + built.e0 * (1 - r))
    result = s_pow(built, r)
    return s_truncate(result, min(order, result.order))


@dataclass(frozen=True)
class Power(Expr):
    child: Expr
    exponent: Fraction

    def children(self):
        return (self.child,)

    def valuation(self):
        return self.child.valuation() * self.exponent

    def _build(self, order):
        return _build_power(self.child, self.exponent, order)

    def __str__(self):
        return f"({self.child})^({fmt_rat(self.exponent)})"


@dataclass(frozen=True)
class Root(Expr):
    child: Expr
    n: int

    def children(self):
        return (self.child,)

    def valuation(self):
        return self.child.valuation() / self.n

    def _build(self, order):
        return _build_power(self.child, Fraction(1, self.n), order)

    def __str__(self):
        return f"root({self.child}, {self.n})"


@dataclass(frozen=True)
class Subst(Expr):
    """child(q^m)."""

    child: Expr
    m: Fraction

    def children(self):
        return (self.child,)

    def valuation(self):
        return self.child.valuation() * self.m

    def _build(self, order):
        return s_substitute(self.child.build(order / self.m), self.m)

    def __str__(self):
        return f"sub({self.child}, {fmt_rat(self.m)})"


@dataclass(frozen=True)
class Sum(Expr):
    terms: Tuple[Expr, ...]

    def children(self):
        return self.terms

    def valuation(self):
        return min(t.valuation() for t in self.terms)

    def _build(self, order):
        out = None
        for t in self.terms:
            s = t.build(order)
            out = s if out is None else s_add(out, s)
        return out

    def __str__(self):
        return "(" + " + ".join(map(str, self.terms)) + ")"


@dataclass(frozen=True)
class Product(Expr):
    factors: Tuple[Expr, ...]

    def children(self):
        return self.factors

    def valuation(self):
        return sum((f.valuation() for f in self.factors), Fraction(0))

    def _build(self, order):
        vals = [f.valuation() for f in self.factors]
        total = sum(vals, Fraction(0))
        scale = 1
        out = None
        for f, v in zip(self.factors, vals):
            if isinstance(f, Const):
                scale = scale * f.value
                continue
            s = f.build(order - (total - v))
            out = s if out is None else s_mul(out, s)
        if out is None:
            return constant(scale, order)
        if scale != 1:
            out = s_scale(out, scale)
        return s_truncate(out, min(order, out.order))

    def __str__(self):
        return "*".join(map(str, self.factors))


@dataclass(frozen=True)
class Quotient(Expr):
    num: Expr
    den: Expr

    def children(self):
        return (self.num, self.den)

    def valuation(self):
        return self.num.valuation() - self.den.valuation()

    def _build(self, order):
        va, vb = self.num.valuation(), self.den.valuation()
        b = self.den.build(order - va + 2 * vb)
        if b.is_zero():
            raise InsufficientOrderError(f"denominator {self.den} vanishes below q^{fmt_rat(b.order)}")
        if b.e0 > vb:
            b = self.den.build(order - va + 2 * b.e0)
        inv = s_unit_inv(b)
        a = self.num.build(order + b.e0)
        result = s_mul(a, inv)
        return s_truncate(result, min(order, result.order))

    def __str__(self):
        return f"({self.num})/({self.den})"


def power(expr, exponent) -> Expr:
    expr = _coerce(expr)
    r = parse_rat(exponent)
    if r == 1:
        return expr
    if isinstance(expr, Const):
        if r.denominator == 1:
            return Const(KElem.coerce(expr.value) ** r.numerator)
        if expr.value == 1:
            return expr
        raise PreconditionError(f"fractional power of the constant {expr.value}")
    if isinstance(expr, Eta):
        return Eta(EtaSpec(tuple((t, e * r) for t, e in expr.spec.factors)))
    if isinstance(expr, Monomial):
        return Monomial(expr.exp * r)
    return Power(expr, r)


def prod(*factors) -> Expr:
    return Product(tuple(_coerce(f) for f in factors))


def eta(*factors) -> Eta:
    """eta((t1, e1), (t2, e2), ...)."""
    return Eta(EtaSpec(tuple(factors)))


def poch(args, m) -> Poch:
    return Poch(tuple(MonomialArg.of(a) for a in args), parse_rat(m))


def q(exp) -> Monomial:
    return Monomial(parse_rat(exp))


# parser

NAMED_CONSTANTS = {
    "sqrt5": SQRT5,
    "s10p": SQRT_10P2S5,
    "s10m": SQRT_10M2S5,
    "s50m": SQRT_50M10S5,
    "phi": GOLDEN_P,
    "phim": GOLDEN_M,
    "beta": BETA,
}

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


@dataclass
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> List[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1) is not None:
            tokens.append(_Token("num", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(_Token("name", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^(),":
                raise ExpressionParseError(f"unexpected character {ch!r}", m.start(3))
            tokens.append(_Token("op", ch, m.start(3)))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: Optional[_Token] = None):
        tok = tok or self.tok
        return ExpressionParseError(message, tok.pos)

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")

    def parse(self) -> Expr:
        expr = self.expr()
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}")
        return expr

    def expr(self) -> Expr:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.tok.text
            self.i += 1
            rhs = self.term()
            node = node + rhs if op == "+" else node - rhs
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.tok.text
            self.i += 1
            rhs = self.unary()
            node = node * rhs if op == "*" else node / rhs
        return node

    def unary(self) -> Expr:
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        return self.postfix()

    def postfix(self) -> Expr:
        node = self.atom()
        while self.accept("^"):
            node = power(node, self.exponent())
        return node

    def exponent(self) -> Fraction:
        """Signed integer, or a parenthesised signed rational."""
        if self.accept("("):
            r = self.signed_rat()
            self.expect(")")
            return r
        return Fraction(self.signed_int())

    def signed_int(self) -> int:
        sign = -1 if self.accept("-") else (self.accept("+") and 1) or 1
        if self.tok.kind != "num":
            raise self.error("expected an integer")
        value = int(self.tok.text)
        self.i += 1
        return sign * value

    def peek(self, offset: int = 1) -> _Token:
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def signed_rat(self) -> Fraction:
        num = self.signed_int()
        # a "/" not followed by a number is left for the quotient rule
        if self.tok.text == "/" and self.peek().kind == "num":
            self.i += 1
            den = int(self.tok.text)
            if den == 0:
                raise self.error("zero denominator")
            self.i += 1
            return Fraction(num, den)
        return Fraction(num)

    def args(self, parse_one) -> list:
        self.expect("(")
        out = [parse_one()]
        while self.accept(","):
            out.append(parse_one())
        self.expect(")")
        return out

    def monomial_arg(self) -> MonomialArg:
        tok = self.tok
        r = self.signed_rat()
        if r == 0:
            raise self.error("monomial exponent must be nonzero", tok)
        return MonomialArg(1 if r > 0 else -1, abs(r))

    def atom(self) -> Expr:
        tok = self.tok
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        if tok.kind == "num":
            self.i += 1
            return Const(int(tok.text))
        if tok.kind != "name":
            raise self.error(f"unexpected {tok.text or 'end of input'!r}")
        self.i += 1
        name = tok.text
        lname = name.lower()
        try:
            return self._named(name, lname, tok)
        except PreconditionError as e:
            raise ExpressionParseError(str(e), tok.pos) from e

    def _named(self, name: str, lname: str, tok: _Token) -> Expr:
        if lname == "q":
            # q^<rat> takes a bare rational exponent
            if self.accept("^"):
                if self.accept("("):
                    r = self.signed_rat()
                    self.expect(")")
                else:
                    r = self.signed_rat()
                return Monomial(r)
            return Monomial(Fraction(1))
        if lname in NAMED_CONSTANTS:
            return Const(NAMED_CONSTANTS[lname])
        if lname == "alpha":
            (k,) = self.args(self.signed_int)
            if not 1 <= k <= 9:
                raise self.error("alpha index must be in 1..9", tok)
            return Const(alpha(k))
        if lname == "poch":
            args = self.args(self.signed_rat)
            if len(args) < 2:
                raise self.error("poch needs at least one argument and a base", tok)
            if args[-1] <= 0:
                raise self.error("poch base must be positive", tok)
            monos = []
            for a in args[:-1]:
                if a == 0:
                    raise self.error("monomial exponent must be nonzero", tok)
                monos.append(MonomialArg(1 if a > 0 else -1, abs(a)))
            return Poch(tuple(monos), args[-1])
        if lname == "f":
            args = self.args(self.monomial_arg)
            if len(args) != 2:
                raise self.error("f takes two arguments", tok)
            return Theta(*args)
        if lname == "psi":
            (a,) = self.args(self.monomial_arg)
            return Theta(a, a ** 3)
        if lname == "eta":
            (t,) = self.args(self.signed_rat)
            if t <= 0:
                raise self.error("eta multiplier must be positive", tok)
            return eta((t, 1))
        if lname == "omega":
            args = self.args(self.signed_rat)
            k = args[0]
            if k.denominator != 1 or not 1 <= k <= 9:
                raise self.error("omega index must be in 1..9", tok)
            scale = args[1] if len(args) > 1 else Fraction(1)
            if scale <= 0:
                raise self.error("omega scale must be positive", tok)
            return Omega(int(k), scale)
        if name.upper() in CFName.__members__:
            (scale,) = self.args(self.signed_rat)
            if scale <= 0:
                raise self.error("continued fraction scale must be positive", tok)
            return CF(CFName(name.upper()), scale)
        if lname == "root":
            self.expect("(")
            child = self.expr()
            self.expect(",")
            n = self.signed_int()
            self.expect(")")
            if n < 1:
                raise self.error("root index must be positive", tok)
            return Root(child, n)
        if lname == "sub":
            self.expect("(")
            child = self.expr()
            self.expect(",")
            m = self.signed_rat()
            self.expect(")")
            if m <= 0:
                raise self.error("substitution exponent must be positive", tok)
            return Subst(child, m)
        raise self.error(f"unknown name {name!r}", tok)


def parse_expr(text: str) -> Expr:
    return _Parser(text).parse()


def expand_expr(text: str, order) -> QSeries:
    """Parse `text` and build it exactly below q^order."""
    expr = parse_expr(text)
    logger.debug("expand %s to order %s", expr, order)
    return expr.build(parse_rat(order))
