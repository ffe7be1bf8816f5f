"""Exact rationals and fixed-point decimals.

The exact layer uses fractions.Fraction as its Rational: it is always
reduced, keeps the sign on the numerator and represents zero as 0/1.
HighPrecisionDecimal is the output carrier: an integer mantissa with a
decimal scale, produced only by rounding half away from zero.
"""

from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Optional, Tuple, Union

from config import Config
from errors import OracleInconsistencyError, OutOfDomainError
from utils import get_logger

logger = get_logger(__name__)

Rational = Fraction
RationalLike = Union[int, Fraction]


def rat_normalize(num: int, den: int) -> Rational:
    """Reduced fraction num/den with positive denominator; den = 0 raises ZeroDivisionError"""
    return Fraction(num, den)


def _round_half_away(value: Fraction, digits: int) -> int:
    scaled = abs(value) * 10 ** digits
    quotient, remainder = divmod(scaled.numerator, scaled.denominator)
    if 2 * remainder >= scaled.denominator:
        quotient += 1
    return -quotient if value < 0 else quotient


@dataclass(frozen=True)
class HighPrecisionDecimal:
    """mantissa * 10**(-scale), carrying the precision it was requested at"""

    mantissa: int
    scale: int
    precision_digits: int

    def __post_init__(self):
        if self.scale < 0:
            raise ValueError("scale must be non-negative")

    def to_fraction(self) -> Fraction:
        return Fraction(self.mantissa, 10 ** self.scale)

    def to_decimal(self) -> Decimal:
        return Decimal(self.mantissa).scaleb(-self.scale)

    def round_to(self, digits: int) -> "HighPrecisionDecimal":
        return hp_from_rational(self.to_fraction(), digits)

    def __neg__(self) -> "HighPrecisionDecimal":
        return HighPrecisionDecimal(-self.mantissa, self.scale, self.precision_digits)

    def __abs__(self) -> "HighPrecisionDecimal":
        return HighPrecisionDecimal(abs(self.mantissa), self.scale, self.precision_digits)

    def __float__(self) -> float:
        return float(self.to_fraction())

    def __str__(self) -> str:
        sign = "-" if self.mantissa < 0 else ""
        digits = str(abs(self.mantissa)).rjust(self.scale + 1, "0")
        if self.scale == 0:
            return sign + digits
        return f"{sign}{digits[:-self.scale]}.{digits[-self.scale:]}"


def hp_from_rational(r: RationalLike, digits: int) -> HighPrecisionDecimal:
    """Round r to `digits` decimals, ties away from zero"""
    if digits < 1:
        raise OutOfDomainError(f"digits must be >= 1, got {digits}")
    return HighPrecisionDecimal(_round_half_away(Fraction(r), digits), digits, digits)


def hp_from_string(text: str, digits: Optional[int] = None) -> HighPrecisionDecimal:
    """Parse a plain decimal literal such as '-0.7853981634'"""
    try:
        literal = Decimal(text.strip())
    except InvalidOperation:
        raise OutOfDomainError(f"not a decimal literal: {text!r}")
    if not literal.is_finite():
        raise OutOfDomainError(f"not a finite decimal: {text!r}")
    if digits is None:
        digits = max(1, -literal.as_tuple().exponent)
    return hp_from_rational(Fraction(literal), digits)


def decimal_precision(error: Fraction) -> int:
    """floor(-log10(error)) for error > 0, computed exactly"""
    if error <= 0:
        raise OutOfDomainError("precision is undefined for a non-positive error")
    digits = 0
    if error <= 1:
        while error <= Fraction(1, 10 ** (digits + 1)):
            digits += 1
    else:
        while error > 10 ** (-digits):
            digits -= 1
    return digits


def leibniz_partial_sum(k: int) -> Fraction:
    """Sum of (-1)^j/(2j+1) for j = 0..k"""
    total = Fraction(0)
    for j in range(k + 1):
        total += Fraction((-1) ** j, 2 * j + 1)
    return total


def _arctan_inverse(x: int, tolerance: Fraction) -> Tuple[Fraction, Fraction]:
    """arctan(1/x) as an exact partial sum and its alternating-series tail bound"""
    total = Fraction(0)
    k = 0
    power = x
    while True:
        term = Fraction(1, (2 * k + 1) * power)
        total += term if k % 2 == 0 else -term
        next_term = Fraction(1, (2 * k + 3) * power * x * x)
        if next_term < tolerance:
            return total, next_term
        power *= x * x
        k += 1


def _machin_terms(formula, digits: int) -> Tuple[Fraction, Fraction]:
    tolerance = Fraction(1, 10 ** (digits + Config.GUARD_DIGITS))
    total = Fraction(0)
    bound = Fraction(0)
    for coefficient, x in formula:
        partial, tail = _arctan_inverse(x, tolerance / (4 * abs(coefficient)))
        total += coefficient * partial
        bound += abs(coefficient) * tail
    return total, bound


# pi/4 = 4 arctan(1/5) - arctan(1/239)
MACHIN = ((4, 5), (-1, 239))
# pi/4 = 2 arctan(1/3) + arctan(1/7)
HUTTON = ((2, 3), (1, 7))


@lru_cache(maxsize=64)
def pi_quarter(digits: int) -> HighPrecisionDecimal:
    """pi/4 to `digits` decimals, cross-checked by two Machin-type formulas"""
    if digits < 1:
        raise OutOfDomainError(f"digits must be >= 1, got {digits}")

    primary, primary_bound = _machin_terms(MACHIN, digits)
    secondary, secondary_bound = _machin_terms(HUTTON, digits)

    if abs(primary - secondary) > primary_bound + secondary_bound:
        raise OracleInconsistencyError(
            f"Machin and Hutton sums differ by more than their tail bounds at {digits} digits"
        )

    result = hp_from_rational(primary, digits)
    check = hp_from_rational(secondary, digits)
    if abs(result.mantissa - check.mantissa) > 1:
        raise OracleInconsistencyError(
            f"pi/4 oracle mismatch at {digits} digits: {result} vs {check}"
        )

    logger.debug(f"pi/4 oracle at {digits} digits: {result}")
    return result


def sqrt_rational(r: RationalLike, digits: int) -> HighPrecisionDecimal:
    """Square root of a non-negative rational from integer square roots"""
    r = Fraction(r)
    if r < 0:
        raise OutOfDomainError("square root of a negative rational")
    work = digits + Config.GUARD_DIGITS
    scaled = r.numerator * 10 ** (2 * work) // r.denominator
    return hp_from_rational(Fraction(isqrt(scaled), 10 ** work), digits)


def rational_sqrt(r: RationalLike):
    """Exact square root when r is the square of a rational, else None"""
    r = Fraction(r)
    if r < 0:
        return None
    num_root, den_root = isqrt(r.numerator), isqrt(r.denominator)
    if num_root * num_root == r.numerator and den_root * den_root == r.denominator:
        return Fraction(num_root, den_root)
    return None
