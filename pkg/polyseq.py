"""Polynomials and rational functions in the index variable n.

Coefficient sequences of a continued fraction are piecewise rules over
integer index ranges. A rule is a RationalFunction (polynomials are stored
as rational functions with denominator 1), a ParityRule with separate laws
for even and odd n, or a PointwiseRule wrapping a callable when no closed
form exists.
"""

from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache, reduce
from math import gcd, lcm
from typing import Callable, Iterator, List, Optional, Sequence, Tuple, Union

import sympy

from config import Config
from errors import OutOfDomainError, PoleError, SpecSemanticError
from utils import get_logger

logger = get_logger(__name__)

Number = Union[int, Fraction]


N = sympy.Symbol("n")
T = sympy.Symbol("t")  # 1/n in asymptotic expansions


def to_fraction(value) -> Fraction:
    """Fraction from a sympy Rational (or anything Fraction accepts)"""
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    return Fraction(value)


def _qq(value: Number) -> sympy.Rational:
    value = Fraction(value)
    return sympy.Rational(value.numerator, value.denominator)


@dataclass(frozen=True)
class Polynomial:
    """Coefficients in ascending powers: coefficients[i] multiplies n**i.

    The algebra (products, division, gcd, shifts) runs on sympy.Poly over QQ;
    exact evaluation at integer or rational points stays on Fraction.
    """

    coefficients: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        coeffs = [to_fraction(c) for c in self.coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def constant(cls, value: Number) -> "Polynomial":
        return cls((value,))

    @classmethod
    def variable(cls) -> "Polynomial":
        return cls((0, 1))

    @classmethod
    def from_poly(cls, poly: sympy.Poly) -> "Polynomial":
        return cls(tuple(reversed(poly.all_coeffs())))

    @cached_property
    def poly(self) -> sympy.Poly:
        descending = [_qq(c) for c in reversed(self.coefficients)] or [0]
        return sympy.Poly(descending, N, domain=sympy.QQ)

    def as_expr(self) -> sympy.Expr:
        return self.poly.as_expr()

    @property
    def degree(self) -> int:
        """-1 for the zero polynomial"""
        return len(self.coefficients) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def leading(self) -> Fraction:
        return self.coefficients[-1] if self.coefficients else Fraction(0)

    def __call__(self, n: Number) -> Fraction:
        result = Fraction(0)
        for c in reversed(self.coefficients):
            result = result * n + c
        return result

    @cached_property
    def integer_form(self) -> Tuple[Tuple[int, ...], int]:
        """(integer coefficients, scale) with p(n) = sum(ints[i] n^i) / scale"""
        scale = reduce(lcm, (c.denominator for c in self.coefficients), 1)
        return tuple(int(c * scale) for c in self.coefficients), scale

    def is_zero_at(self, n: int) -> bool:
        ints, _ = self.integer_form
        result = 0
        for c in reversed(ints):
            result = result * n + c
        return result == 0

    def _coerce(self, other) -> Optional["Polynomial"]:
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Polynomial.from_poly(self.poly + other.poly)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial.from_poly(-self.poly)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Polynomial.from_poly(self.poly - other.poly)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Polynomial.from_poly(other.poly - self.poly)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Polynomial.from_poly(self.poly * other.poly)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Polynomial":
        if exponent < 0:
            raise ValueError("negative powers of a polynomial are not polynomials")
        return Polynomial.from_poly(self.poly ** exponent)

    def __divmod__(self, other: "Polynomial") -> Tuple["Polynomial", "Polynomial"]:
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        quotient, remainder = self.poly.div(other.poly)
        return Polynomial.from_poly(quotient), Polynomial.from_poly(remainder)

    def __floordiv__(self, other: "Polynomial") -> "Polynomial":
        return divmod(self, other)[0]

    def __mod__(self, other: "Polynomial") -> "Polynomial":
        return divmod(self, other)[1]

    def monic(self) -> "Polynomial":
        if self.is_zero:
            return self
        return Polynomial.from_poly(self.poly.monic())

    @staticmethod
    def gcd(a: "Polynomial", b: "Polynomial") -> "Polynomial":
        """Monic greatest common divisor over the rationals"""
        return Polynomial.from_poly(a.poly.gcd(b.poly)).monic()

    def shift(self, k: int) -> "Polynomial":
        """q with q(n) = p(n + k)"""
        if k == 0 or self.degree <= 0:
            return self
        return Polynomial.from_poly(self.poly.shift(k))

    def to_dsl(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for power in range(self.degree, -1, -1):
            c = self.coefficients[power]
            if c == 0:
                continue
            magnitude = abs(c)
            if power == 0:
                body = str(magnitude)
            else:
                monomial = "n" if power == 1 else f"n^{power}"
                body = monomial if magnitude == 1 else f"{magnitude}*{monomial}"
            if not parts:
                parts.append(f"-{body}" if c < 0 else body)
            else:
                parts.append(f"- {body}" if c < 0 else f"+ {body}")
        return " ".join(parts)

    def __str__(self) -> str:
        return self.to_dsl()


ONE = Polynomial.constant(1)


@dataclass(frozen=True)
class RationalFunction:
    """numerator/denominator, reduced by their gcd with a monic denominator"""

    numerator: Polynomial
    denominator: Polynomial = ONE

    def __post_init__(self):
        num = _as_polynomial(self.numerator)
        den = _as_polynomial(self.denominator)
        if den.is_zero:
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero:
            num, den = Polynomial(), ONE
        elif den.degree > 0 or den.leading != 1:
            common = num.poly.gcd(den.poly)
            p, q = num.poly.exquo(common), den.poly.exquo(common)
            lead = to_fraction(q.LC())
            num = Polynomial(tuple(c / lead for c in Polynomial.from_poly(p).coefficients))
            den = Polynomial.from_poly(q.monic())
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)

    @classmethod
    def from_value(cls, value) -> "RationalFunction":
        if isinstance(value, RationalFunction):
            return value
        if isinstance(value, Polynomial):
            return cls(value)
        if isinstance(value, (int, Fraction)):
            return cls(Polynomial.constant(value))
        raise TypeError(f"cannot build a rational function from {type(value).__name__}")

    @classmethod
    def variable(cls) -> "RationalFunction":
        return cls(Polynomial.variable())

    @property
    def is_polynomial(self) -> bool:
        return self.denominator.degree == 0

    @property
    def is_constant(self) -> bool:
        return self.is_polynomial and self.numerator.degree <= 0

    @property
    def degree(self) -> Optional[int]:
        """Growth order deg(numerator) - deg(denominator); None for zero"""
        if self.numerator.is_zero:
            return None
        return self.numerator.degree - self.denominator.degree

    @property
    def is_zero(self) -> bool:
        return self.numerator.is_zero

    def __call__(self, n: Number) -> Fraction:
        den = self.denominator(n)
        if den == 0:
            raise PoleError(f"rule {self.to_dsl()} has a pole at n = {n}", n)
        return self.numerator(n) / den

    def has_pole_at(self, n: int) -> bool:
        return self.denominator.degree > 0 and self.denominator.is_zero_at(n)

    def is_zero_at(self, n: int) -> bool:
        return self.numerator.is_zero_at(n)

    def _coerce(self, other) -> Optional["RationalFunction"]:
        try:
            return RationalFunction.from_value(other)
        except TypeError:
            return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RationalFunction(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
        )

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.numerator, self.denominator)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RationalFunction(
            self.numerator * other.numerator, self.denominator * other.denominator
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.is_zero:
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(
            self.numerator * other.denominator, self.denominator * other.numerator
        )

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, exponent: int) -> "RationalFunction":
        if exponent < 0:
            return RationalFunction.from_value(1) / (self ** -exponent)
        return RationalFunction(self.numerator ** exponent, self.denominator ** exponent)

    def shift(self, k: int) -> "RationalFunction":
        if k == 0:
            return self
        return RationalFunction(self.numerator.shift(k), self.denominator.shift(k))

    def to_dsl(self) -> str:
        if self.is_polynomial:
            return self.numerator.to_dsl()
        coefficients = self.numerator.coefficients + self.denominator.coefficients
        scale = reduce(lcm, (c.denominator for c in coefficients), 1)
        content = reduce(gcd, (int(c * scale) for c in coefficients), 0)
        factor = Fraction(scale, content)
        num = Polynomial(tuple(c * factor for c in self.numerator.coefficients))
        den = Polynomial(tuple(c * factor for c in self.denominator.coefficients))
        return f"({num.to_dsl()})/({den.to_dsl()})"

    def __str__(self) -> str:
        return self.to_dsl()


def _as_polynomial(value) -> Polynomial:
    if isinstance(value, Polynomial):
        return value
    if isinstance(value, (int, Fraction)):
        return Polynomial.constant(value)
    raise TypeError(f"expected a polynomial, got {type(value).__name__}")


@dataclass(frozen=True)
class ParityRule:
    """Separate laws for even and odd indices"""

    even: RationalFunction
    odd: RationalFunction

    @staticmethod
    def make(even: RationalFunction, odd: RationalFunction) -> "Rule":
        return even if even == odd else ParityRule(even, odd)

    def branch(self, n: int) -> RationalFunction:
        return self.even if n % 2 == 0 else self.odd

    def __call__(self, n: int) -> Fraction:
        return self.branch(n)(n)

    def has_pole_at(self, n: int) -> bool:
        return self.branch(n).has_pole_at(n)

    def is_zero_at(self, n: int) -> bool:
        return self.branch(n).is_zero_at(n)

    def shift(self, k: int) -> "Rule":
        if k % 2 == 0:
            return ParityRule.make(self.even.shift(k), self.odd.shift(k))
        return ParityRule.make(self.odd.shift(k), self.even.shift(k))

    def to_dsl(self) -> str:
        return f"alt({self.even.to_dsl()}, {self.odd.to_dsl()})"

    def __str__(self) -> str:
        return self.to_dsl()


class PointwiseRule:
    """Rule without a closed form; values are memoized per index"""

    def __init__(self, func: Callable[[int], Number], label: str = "pointwise"):
        self.func = func
        self.label = label
        self._cached = lru_cache(maxsize=Config.POINTWISE_CACHE_SIZE)(self._evaluate)

    def _evaluate(self, n: int) -> Fraction:
        return Fraction(self.func(n))

    def __call__(self, n: int) -> Fraction:
        return self._cached(n)

    def cache_info(self):
        return self._cached.cache_info()

    def has_pole_at(self, n: int) -> bool:
        try:
            self(n)
        except (PoleError, ZeroDivisionError):
            return True
        return False

    def is_zero_at(self, n: int) -> bool:
        return self(n) == 0

    def shift(self, k: int) -> "PointwiseRule":
        if k == 0:
            return self
        return PointwiseRule(lambda n: self(n + k), f"{self.label}(n{k:+d})")

    def to_dsl(self) -> str:
        raise SpecSemanticError(f"rule '{self.label}' has no closed form to print")

    def __str__(self) -> str:
        return self.label

    def __repr__(self) -> str:
        return f"PointwiseRule({self.label!r})"


Rule = Union[RationalFunction, ParityRule, PointwiseRule]


def as_rule(value) -> Rule:
    if isinstance(value, (RationalFunction, ParityRule, PointwiseRule)):
        return value
    return RationalFunction.from_value(value)


def is_closed_form(rule: Rule) -> bool:
    return not isinstance(rule, PointwiseRule)


def parity_branches(rule: Rule) -> Tuple[RationalFunction, RationalFunction]:
    if isinstance(rule, ParityRule):
        return rule.even, rule.odd
    if isinstance(rule, RationalFunction):
        return rule, rule
    raise TypeError("pointwise rules have no parity branches")


def rule_multiply(f: Rule, g: Rule) -> Rule:
    f, g = as_rule(f), as_rule(g)
    if not (is_closed_form(f) and is_closed_form(g)):
        return PointwiseRule(lambda n: f(n) * g(n), f"({f})*({g})")
    if isinstance(f, ParityRule) or isinstance(g, ParityRule):
        fe, fo = parity_branches(f)
        ge, go = parity_branches(g)
        return ParityRule.make(fe * ge, fo * go)
    return f * g


def rule_shift(f: Rule, k: int) -> Rule:
    return as_rule(f).shift(k)


def ratfun_multiply(f: RationalFunction, g: RationalFunction) -> RationalFunction:
    """Reduced exact product"""
    return RationalFunction.from_value(f) * RationalFunction.from_value(g)


def shift_index(f: RationalFunction, k: int) -> RationalFunction:
    """g with g(n) = f(n + k)"""
    return RationalFunction.from_value(f).shift(k)


@dataclass(frozen=True)
class Piece:
    lo: int
    hi: Optional[int]  # None is the infinite tail
    rule: Rule

    def contains(self, n: int) -> bool:
        return self.lo <= n and (self.hi is None or n <= self.hi)

    def range_dsl(self) -> str:
        if self.hi is None:
            return f"n >= {self.lo}"
        return f"n in {self.lo}..{self.hi}"


@dataclass(frozen=True)
class PiecewiseSequence:
    pieces: Tuple[Piece, ...]
    start_index: int = 1
    name: str = "a"
    _starts: Tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pieces = tuple(self.pieces)
        object.__setattr__(self, "pieces", pieces)
        if not pieces:
            raise SpecSemanticError(f"sequence {self.name} has no pieces")
        expected = self.start_index
        for i, piece in enumerate(pieces):
            if piece.lo != expected:
                kind = "overlap" if piece.lo < expected else "gap"
                raise SpecSemanticError(
                    f"sequence {self.name}: {kind} at n = {min(piece.lo, expected)}"
                )
            if piece.hi is None:
                if i != len(pieces) - 1:
                    raise SpecSemanticError(
                        f"sequence {self.name}: piece after the infinite tail"
                    )
                break
            if piece.hi < piece.lo:
                raise SpecSemanticError(
                    f"sequence {self.name}: empty range {piece.lo}..{piece.hi}"
                )
            expected = piece.hi + 1
        else:
            raise SpecSemanticError(
                f"sequence {self.name}: no tail piece, coverage gap from n = {expected}"
            )
        object.__setattr__(self, "_starts", tuple(p.lo for p in pieces))

    @classmethod
    def from_rule(cls, rule, start_index: int = 1, name: str = "a") -> "PiecewiseSequence":
        return cls((Piece(start_index, None, as_rule(rule)),), start_index, name)

    @classmethod
    def with_head(cls, head: Sequence[Number], tail, start_index: int = 1,
                  name: str = "a") -> "PiecewiseSequence":
        """Explicit constants for the first len(head) indices, then a tail rule"""
        pieces = [
            Piece(start_index + i, start_index + i, RationalFunction.from_value(Fraction(v)))
            for i, v in enumerate(head)
        ]
        pieces.append(Piece(start_index + len(head), None, as_rule(tail)))
        return cls(tuple(pieces), start_index, name)

    @property
    def tail(self) -> Piece:
        return self.pieces[-1]

    def piece_at(self, n: int) -> Piece:
        if n < self.start_index:
            raise OutOfDomainError(
                f"{self.name}(n) is defined for n >= {self.start_index}, got n = {n}"
            )
        return self.pieces[bisect_right(self._starts, n) - 1]

    def __call__(self, n: int) -> Fraction:
        return Fraction(self.piece_at(n).rule(n))

    def values(self, lo: int, hi: int) -> List[Fraction]:
        return [self(n) for n in range(lo, hi + 1)]

    def _scan(self, limit: int, predicate) -> Optional[int]:
        for piece in self.pieces:
            if piece.lo > limit:
                break
            hi = limit if piece.hi is None else min(piece.hi, limit)
            for n in range(piece.lo, hi + 1):
                if predicate(piece.rule, n):
                    return n
        return None

    def first_pole(self, limit: int) -> Optional[int]:
        return self._scan(limit, lambda rule, n: rule.has_pole_at(n))

    def first_zero(self, limit: int) -> Optional[int]:
        return self._scan(limit, lambda rule, n: not rule.has_pole_at(n) and rule.is_zero_at(n))

    def renamed(self, name: str) -> "PiecewiseSequence":
        return PiecewiseSequence(self.pieces, self.start_index, name)

    def _render(self, show) -> str:
        if len(self.pieces) == 1:
            return f"{self.name}(n) = {show(self.pieces[0].rule)}"
        body = "; ".join(f"{show(p.rule)} for {p.range_dsl()}" for p in self.pieces)
        return f"{self.name}(n) = {{ {body} }}"

    def to_dsl(self) -> str:
        """DSL text; raises SpecSemanticError when a piece has no closed form"""
        return self._render(lambda rule: rule.to_dsl())

    def __str__(self) -> str:
        return self._render(str)


def seq_eval(seq: PiecewiseSequence, n: int) -> Fraction:
    """Exact value of the rule whose range contains n"""
    return seq(n)


@dataclass(frozen=True)
class AsymptoticExpansion:
    """sum of coefficients[i] * n**(top_degree - i) + O(n**remainder_order)"""

    top_degree: int
    coefficients: Tuple[Fraction, ...]
    remainder_order: int

    def coefficient(self, power: int) -> Fraction:
        index = self.top_degree - power
        if 0 <= index < len(self.coefficients):
            return self.coefficients[index]
        raise OutOfDomainError(f"n^{power} is outside the expansion")

    def terms(self) -> Iterator[Tuple[int, Fraction]]:
        for i, c in enumerate(self.coefficients):
            yield self.top_degree - i, c

    def __call__(self, n: Number) -> Fraction:
        n = Fraction(n)
        return sum((c * n ** power for power, c in self.terms()), Fraction(0))

    def __str__(self) -> str:
        parts = [f"{c}*n^{p}" for p, c in self.terms() if c]
        return " + ".join(parts or ["0"]) + f" + O(n^{self.remainder_order})"


def _reversed_poly(p: Polynomial) -> sympy.Poly:
    """t^deg(p) * p(1/t)"""
    return sympy.Poly([_qq(c) for c in p.coefficients], T, domain=sympy.QQ)


def asymptotic_expand(f, order: int) -> AsymptoticExpansion:
    """Laurent expansion in 1/n.

    With t = 1/n, f(n) = n^top * P(t)/Q(t) where P and Q are the reversed
    numerator and denominator. Q(0) is the leading coefficient of the
    denominator, so Q is invertible modulo t^m and the first m series
    coefficients of P/Q are exact. `order` is the lowest retained power:
    order -2 keeps terms through n^-2.
    """
    f = RationalFunction.from_value(f)
    if f.is_zero:
        return AsymptoticExpansion(order, (Fraction(0),), order - 1)

    top = f.numerator.degree - f.denominator.degree
    if order > top:
        raise OutOfDomainError(f"order {order} exceeds the top degree {top}")

    m = top - order + 1
    modulus = sympy.Poly(T ** m, T, domain=sympy.QQ)
    head = _reversed_poly(f.numerator)
    inverse = _reversed_poly(f.denominator).invert(modulus)
    series = Polynomial.from_poly((head * inverse).rem(modulus))
    coefficients = series.coefficients + (Fraction(0),) * (m - len(series.coefficients))
    return AsymptoticExpansion(top, coefficients, order - 1)
