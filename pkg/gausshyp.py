"""Gauss hypergeometric series and the continued fraction of the contiguous ratio

    R(a, b, c; z) = 2F1(a, b+1; c+1; z) / 2F1(a, b; c; z)

The coefficients d_n follow two alternating laws, written here in n:

    d_n = (b + n/2)(c - a + n/2) / ((c + n - 1)(c + n))              n even
    d_n = (a + (n-1)/2)(c - b + (n-1)/2) / ((c + n - 1)(c + n))      n odd
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from cfengine import ContinuedFraction
from config import Config
from errors import GaussParameterError, OutOfDomainError
from polyseq import (
    ParityRule, PiecewiseSequence, RationalFunction, Rule, rule_multiply, rule_shift,
)
from utils import get_logger

logger = get_logger(__name__)

CONVENTIONS = ("direct", "classical")


@dataclass(frozen=True)
class GaussParameters:
    a: Fraction
    b: Fraction
    c: Fraction
    z: Fraction

    def __post_init__(self):
        for name in ("a", "b", "c", "z"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.c.denominator == 1 and self.c <= 0:
            k = int(-self.c)
            raise GaussParameterError(
                f"c = {self.c} is zero or a negative integer: (c)_k and the law "
                f"denominators vanish at k = {k}",
                k=k,
            )

    def __str__(self) -> str:
        return f"({self.a}, {self.b}; {self.c}; {self.z})"


def pochhammer(x, k: int) -> Fraction:
    """Rising factorial x(x+1)...(x+k-1)"""
    if k < 0:
        raise OutOfDomainError(f"Pochhammer index must be non-negative, got {k}")
    result = Fraction(1)
    x = Fraction(x)
    for i in range(k):
        result *= x + i
    return result


def f21_partial_sum(p: GaussParameters, N: int) -> Fraction:
    """Sum of (a)_k (b)_k / ((c)_k k!) z^k for k = 0..N, exact"""
    if N < 0:
        raise OutOfDomainError(f"N must be non-negative, got {N}")
    term = Fraction(1)
    total = Fraction(1)
    for k in range(N):
        if p.c + k == 0:
            raise GaussParameterError(f"(c)_k vanishes at k = {k + 1}", k=k + 1)
        term *= (p.a + k) * (p.b + k) * p.z / ((p.c + k) * (k + 1))
        total += term
    return total


def contiguous_ratio_partial(p: GaussParameters, N: int) -> Fraction:
    """R(a, b, c; z) approximated by the quotient of two N-term partial sums"""
    upper = GaussParameters(p.a, p.b + 1, p.c + 1, p.z)
    denominator = f21_partial_sum(p, N)
    if denominator == 0:
        raise GaussParameterError(f"2F1 partial sum vanishes at N = {N}", k=N)
    return f21_partial_sum(upper, N) / denominator


def coefficient_rule(p: GaussParameters) -> Rule:
    """d_n as a parity rule; collapses to one rational function when the laws agree"""
    n = RationalFunction.variable()
    denominator = (p.c + n - 1) * (p.c + n)
    even = (p.b + n / 2) * (p.c - p.a + n / 2) / denominator
    odd = (p.a + (n - 1) / 2) * (p.c - p.b + (n - 1) / 2) / denominator
    return ParityRule.make(even, odd)


@dataclass(frozen=True)
class GaussCoefficients:
    d: Tuple[Fraction, ...]
    params: GaussParameters

    def __getitem__(self, n: int) -> Fraction:
        if not 1 <= n <= len(self.d):
            raise OutOfDomainError(f"d_n is stored for n = 1..{len(self.d)}, got {n}")
        return self.d[n - 1]

    def __len__(self) -> int:
        return len(self.d)


def gauss_coefficients(p: GaussParameters, N: int) -> GaussCoefficients:
    """d_1..d_N from the alternating laws; d_1 is the odd law at k = 0"""
    if N < 1:
        raise OutOfDomainError(f"N must be >= 1, got {N}")
    rule = coefficient_rule(p)
    values = []
    for n in range(1, N + 1):
        if rule.has_pole_at(n):
            k = n // 2
            raise GaussParameterError(f"law denominator vanishes at n = {n} (k = {k})", k=k)
        values.append(rule(n))
    return GaussCoefficients(tuple(values), p)


def gauss_cf(p: GaussParameters, n_hint: int = 1, convention: str = "direct") -> ContinuedFraction:
    """Continued fraction 0 + 1/(1 + a_2/(1 + ...)) for R(a, b, c; z).

    The "direct" convention uses a_{n+1} = d_n z. The "classical" convention uses
    a_{n+1} = -d_n z, whose value is the contiguous ratio itself.
    """
    if convention not in CONVENTIONS:
        raise OutOfDomainError(f"unknown convention {convention!r}; expected one of {CONVENTIONS}")
    if p.z == 0:
        raise GaussParameterError("z = 0 makes every partial numerator beyond a_1 vanish")

    gauss_coefficients(p, max(n_hint, 1))
    factor = p.z if convention == "direct" else -p.z
    tail = rule_shift(rule_multiply(coefficient_rule(p), factor), -1)

    logger.debug(f"Gauss fraction {p} ({convention}): a(n) = {tail} for n >= 2")
    return ContinuedFraction(
        b0=Fraction(0),
        a=PiecewiseSequence.with_head([1], tail, name="a"),
        b=PiecewiseSequence.from_rule(1, name="b"),
        label=f"gauss{p}" if convention == "direct" else f"gauss{p}-classical",
    )


def specialization_cf(convention: str = "direct") -> ContinuedFraction:
    """The kernel at (1/2, 0; 1/2; -1), with d_n = n^2/(4n^2 - 1)"""
    p = GaussParameters(Fraction(1, 2), Fraction(0), Fraction(1, 2), Fraction(-1))
    return gauss_cf(p, Config.DEFAULT_ANALYSIS_DEPTH, convention)
