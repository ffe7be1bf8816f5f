"""Generalized continued fractions b0 + K(a_n / b_n) and their convergents.

Convergents come from the three-term recurrence
    X_n = b_n X_{n-1} + a_n X_{n-2},  A_{-1} = 1, A_0 = b0, B_{-1} = 0, B_0 = 1
kept in exact arithmetic. Precision-targeted evaluation runs the same
recurrence in decimal arithmetic, renormalized every step, so that depths of
10^5 stay affordable.
"""

from collections import deque
from dataclasses import dataclass, field, replace
from decimal import Decimal, localcontext
from fractions import Fraction
from itertools import islice
from math import gcd
from typing import Iterable, Iterator, List, NamedTuple, Optional, Union

from config import Config
from errors import (
    DegenerateFractionError, NoConvergenceError, OutOfDomainError, PoleError,
    SpecSemanticError,
)
from exactnum import HighPrecisionDecimal, decimal_precision, hp_from_rational
from polyseq import Piece, PiecewiseSequence, RationalFunction
from utils import get_logger, progress

logger = get_logger(__name__)


@dataclass(frozen=True)
class ContinuedFraction:
    b0: Fraction
    a: PiecewiseSequence
    b: PiecewiseSequence
    label: str = "cf"
    check_range: int = field(default=Config.VERIFY_RANGE, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "b0", Fraction(self.b0))
        if self.a.start_index != 1 or self.b.start_index != 1:
            raise SpecSemanticError(
                f"{self.label}: partial numerators and denominators must start at n = 1"
            )
        object.__setattr__(self, "a", self.a.renamed("a"))
        object.__setattr__(self, "b", self.b.renamed("b"))

        for seq in (self.a, self.b):
            pole = seq.first_pole(self.check_range)
            if pole is not None:
                raise PoleError(f"{self.label}: {seq.name}(n) has a pole at n = {pole}", pole)

        zero = self.a.first_zero(self.check_range)
        if zero is not None:
            raise DegenerateFractionError(
                f"{self.label}: partial numerator a({zero}) = 0 truncates the fraction", zero
            )

    def to_dsl(self) -> str:
        return f"b0 = {self.b0}; {self.a.to_dsl()}; {self.b.to_dsl()}"

    def same_terms(self, other: "ContinuedFraction") -> bool:
        """Equal b0, equal tail rules and equal values before the later tail starts"""
        if self.b0 != other.b0:
            return False
        for mine, theirs in ((self.a, other.a), (self.b, other.b)):
            if mine.tail.rule != theirs.tail.rule:
                return False
            last = max(mine.tail.lo, theirs.tail.lo)
            if mine.values(1, last) != theirs.values(1, last):
                return False
        return True

    def with_label(self, label: str) -> "ContinuedFraction":
        return replace(self, label=label)

    def with_head_numerator(self, value) -> "ContinuedFraction":
        """Same fraction with a_1 replaced"""
        pieces = list(self.a.pieces)
        first = pieces[0]
        head = Piece(1, 1, RationalFunction.from_value(Fraction(value)))
        if first.hi == 1:
            pieces[0] = head
        else:
            pieces[0:1] = [head, Piece(2, first.hi, first.rule)]
        a = PiecewiseSequence(tuple(pieces), 1, "a")
        return ContinuedFraction(self.b0, a, self.b, self.label, self.check_range)


@dataclass(frozen=True)
class Convergent:
    n: int
    A: Union[int, Fraction]
    B: Union[int, Fraction]
    value: Optional[Fraction]  # None when B vanishes

    @property
    def is_defined(self) -> bool:
        return self.value is not None


def _tidy(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def iter_convergents(cf: ContinuedFraction, strip_gcd: bool = False) -> Iterator[Convergent]:
    """Unbounded stream of exact convergents f_1, f_2, ..."""
    a_prev, a_cur = 1, _tidy(cf.b0)
    b_prev, b_cur = 0, 1
    n = 0
    while True:
        n += 1
        an, bn = _tidy(cf.a(n)), _tidy(cf.b(n))
        a_prev, a_cur = a_cur, bn * a_cur + an * a_prev
        b_prev, b_cur = b_cur, bn * b_cur + an * b_prev
        if strip_gcd and all(isinstance(x, int) for x in (a_prev, a_cur, b_prev, b_cur)):
            common = gcd(a_prev, a_cur, b_prev, b_cur)
            if common > 1:
                a_prev, a_cur = a_prev // common, a_cur // common
                b_prev, b_cur = b_prev // common, b_cur // common
        value = Fraction(a_cur, b_cur) if b_cur != 0 else None
        yield Convergent(n, a_cur, b_cur, value)


def convergents(cf: ContinuedFraction, N: int, strip_gcd: bool = False) -> List[Convergent]:
    """Exact convergents for n = 1..N"""
    if N < 1:
        raise OutOfDomainError(f"N must be >= 1, got {N}")
    return list(islice(iter_convergents(cf, strip_gcd), N))


def determinant_defect(cf: ContinuedFraction, N: int) -> Optional[int]:
    """First n <= N where A_n B_{n-1} - A_{n-1} B_n != (-1)^(n-1) prod a_k, else None"""
    prev_a, prev_b = cf.b0, 1
    product = Fraction(1)
    for conv in convergents(cf, N):
        product *= cf.a(conv.n)
        if conv.A * prev_b - prev_a * conv.B != (-1) ** (conv.n - 1) * product:
            return conv.n
        prev_a, prev_b = conv.A, conv.B
    return None


class Evaluation(NamedTuple):
    value: HighPrecisionDecimal
    depth: int


def _to_decimal(x: Fraction) -> Decimal:
    x = Fraction(x)
    return Decimal(x.numerator) / Decimal(x.denominator)


def evaluate(cf: ContinuedFraction, digits: int, max_depth: int = Config.DEFAULT_MAX_DEPTH,
             show_progress: Optional[bool] = None) -> Evaluation:
    """Value of cf to `digits` decimals using a two-step stabilization window"""
    if digits < 1:
        raise OutOfDomainError(f"digits must be >= 1, got {digits}")
    if max_depth < 1:
        raise OutOfDomainError(f"max_depth must be >= 1, got {max_depth}")

    history = deque(maxlen=3)
    with localcontext() as ctx:
        ctx.prec = Config.working_precision(digits, max_depth)
        tolerance = Decimal(10) ** -(digits + 2)
        a_prev, a_cur = Decimal(1), _to_decimal(cf.b0)
        b_prev, b_cur = Decimal(0), Decimal(1)

        steps = progress(range(1, max_depth + 1), total=max_depth,
                         desc=f"evaluate {cf.label}", enabled=show_progress)
        for n in steps:
            an, bn = _to_decimal(cf.a(n)), _to_decimal(cf.b(n))
            a_prev, a_cur = a_cur, bn * a_cur + an * a_prev
            b_prev, b_cur = b_cur, bn * b_cur + an * b_prev

            scale = max(abs(a_cur), abs(b_cur))
            if scale == 0:
                logger.warning(f"{cf.label}: A_{n} = B_{n} = 0, the recurrence has collapsed")
                break
            a_prev, a_cur, b_prev, b_cur = a_prev / scale, a_cur / scale, b_prev / scale, b_cur / scale

            history.append(a_cur / b_cur if b_cur != 0 else None)
            if len(history) == 3 and None not in history:
                older, previous, current = history
                if abs(current - previous) < tolerance and abs(previous - older) < tolerance:
                    steps.close()
                    value = hp_from_rational(Fraction(current), digits + Config.GUARD_DIGITS)
                    logger.info(f"{cf.label}: stabilized at depth {n}")
                    return Evaluation(replace(value, precision_digits=digits), n)
        steps.close()

    last = [None if v is None else str(+v) for v in history]
    raise NoConvergenceError(
        f"{cf.label}: no stabilization to {digits} digits within depth {max_depth}; "
        f"last convergents {last}",
        depth=max_depth,
        last_values=last,
    )


def evaluate_backward(cf: ContinuedFraction, N: int, digits: int) -> HighPrecisionDecimal:
    """Fold the fraction truncated at depth N from the bottom up (tail value 0)"""
    if N < 1:
        raise OutOfDomainError(f"N must be >= 1, got {N}")
    with localcontext() as ctx:
        ctx.prec = Config.working_precision(digits, N)
        tail = Decimal(0)
        for n in range(N, 0, -1):
            denominator = _to_decimal(cf.b(n)) + tail
            if denominator == 0:
                raise PoleError(f"{cf.label}: truncated fraction divides by zero at n = {n}", n)
            tail = _to_decimal(cf.a(n)) / denominator
        value = _to_decimal(cf.b0) + tail
    return replace(hp_from_rational(Fraction(value), digits + Config.GUARD_DIGITS),
                   precision_digits=digits)


@dataclass(frozen=True)
class ErrorEntry:
    n: int
    value: Optional[Fraction]
    abs_error: Optional[Fraction]

    @property
    def digits(self) -> Optional[int]:
        """floor(-log10 abs_error); None when undefined or an exact hit"""
        if not self.abs_error:
            return None
        return decimal_precision(self.abs_error)


def error_sequence(cf: ContinuedFraction, reference: HighPrecisionDecimal,
                   N: int) -> List[ErrorEntry]:
    """|f_n - reference| for n = 1..N; undefined convergents carry None"""
    target = reference.to_fraction()
    resolution = Fraction(1, 10 ** max(reference.scale - 2, 0))
    entries = []
    for conv in convergents(cf, N):
        if conv.value is None:
            entries.append(ErrorEntry(conv.n, None, None))
            continue
        error = abs(conv.value - target)
        if 0 < error < resolution:
            logger.warning(
                f"{cf.label}: error at n = {conv.n} is within 100 ulp of the reference; "
                f"use a more precise reference"
            )
        entries.append(ErrorEntry(conv.n, conv.value, error))
    return entries


def empirical_error_ratios(errors: Iterable) -> List[HighPrecisionDecimal]:
    """e_{k+1}/e_k over consecutive defined errors, stopping at an exact hit"""
    values = [e.abs_error if isinstance(e, ErrorEntry) else e for e in errors]
    defined = [Fraction(v) for v in values if v is not None]
    ratios = []
    for previous, current in zip(defined, defined[1:]):
        if previous == 0 or current == 0:
            break
        ratios.append(hp_from_rational(current / previous, Config.RATIO_DIGITS))
    return ratios
