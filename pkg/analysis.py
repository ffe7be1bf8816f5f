"""Convergence analysis of limit-periodic continued fractions.

The Worpitzky parameter rho_n = a_n / (b_n b_{n-1}) is the partial numerator
of the equivalent unit-denominator fraction. Its limit L decides the
classification: |L| < 1/4 is the interior of the Worpitzky disk, |L| = 1/4 its
boundary. All comparisons with 1/4 are exact.
"""

from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import List, Optional, Tuple, Union

import numpy as np

from cfengine import ContinuedFraction, empirical_error_ratios, error_sequence
from config import PUBLISHED_VALUES, Config
from errors import OutOfDiskError, OutOfDomainError
from exactnum import HighPrecisionDecimal, hp_from_rational, rational_sqrt
from polyseq import (
    AsymptoticExpansion, ParityRule, RationalFunction, Rule, asymptotic_expand,
    is_closed_form, parity_branches,
)
from utils import get_logger, progress

logger = get_logger(__name__)

QUARTER = Fraction(1, 4)
Exactish = Union[Fraction, HighPrecisionDecimal]


def worpitzky_parameters(cf: ContinuedFraction, N: int) -> List[Tuple[int, Optional[Fraction]]]:
    """Exact rho_n for n = 2..N; None where b_n b_{n-1} vanishes"""
    if N < 2:
        raise OutOfDomainError(f"N must be >= 2, got {N}")
    samples = []
    previous = cf.b(1)
    for n in progress(range(2, N + 1), total=N - 1, desc=f"rho {cf.label}"):
        current = cf.b(n)
        product = current * previous
        samples.append((n, cf.a(n) / product if product else None))
        previous = current
    return samples


def _limit_of(f: RationalFunction) -> Optional[Fraction]:
    """lim f(n) as n grows; None when unbounded"""
    degree = f.degree
    if degree is None or degree < 0:
        return Fraction(0)
    if degree > 0:
        return None
    return f.numerator.leading / f.denominator.leading


@dataclass(frozen=True)
class SymbolicLimit:
    limit: Fraction
    rho_closed_form: Rule


def rho_closed_form(cf: ContinuedFraction) -> Optional[Rule]:
    """a(n) / (b(n) b(n-1)) built from the tail rules; None without closed forms"""
    a_rule, b_rule = cf.a.tail.rule, cf.b.tail.rule
    if not (is_closed_form(a_rule) and is_closed_form(b_rule)):
        return None
    a_even, a_odd = parity_branches(a_rule)
    b_even, b_odd = parity_branches(b_rule)
    try:
        even = a_even / (b_even * b_odd.shift(-1))
        odd = a_odd / (b_odd * b_even.shift(-1))
    except ZeroDivisionError:
        return None
    return ParityRule.make(even, odd)


def symbolic_limit(cf: ContinuedFraction) -> Optional[SymbolicLimit]:
    """L = lim rho_n from leading coefficients; None when unbounded or not closed-form"""
    rho = rho_closed_form(cf)
    if rho is None:
        logger.info(f"{cf.label}: no closed-form tail, symbolic limit unavailable")
        return None
    limits = {_limit_of(branch) for branch in parity_branches(rho)}
    if len(limits) != 1 or None in limits:
        return None
    return SymbolicLimit(limits.pop(), rho)


def classify(limit: Optional[Fraction]) -> str:
    if limit is None:
        return "unknown"
    if abs(limit) < QUARTER:
        return "interior"
    if abs(limit) == QUARTER:
        return "boundary"
    return "exterior"


def _sqrt_ratio(radicand: Fraction) -> Exactish:
    """|1 - s| / (1 + s) with s = sqrt(radicand), exact when s is rational"""
    root = rational_sqrt(radicand)
    if root is not None:
        return abs(1 - root) / (1 + root)
    with localcontext() as ctx:
        ctx.prec = Config.SIGMA_DIGITS + 2 * Config.GUARD_DIGITS
        s = (Decimal(radicand.numerator) / Decimal(radicand.denominator)).sqrt()
        value = abs(1 - s) / (1 + s)
        return hp_from_rational(Fraction(value), Config.SIGMA_DIGITS)


def convergence_factor(L) -> Exactish:
    """sigma = (1 - sqrt(1 - 4|L|)) / (1 + sqrt(1 - 4|L|)) for |L| <= 1/4"""
    L = Fraction(L)
    if abs(L) > QUARTER:
        raise OutOfDiskError(f"|L| = {abs(L)} exceeds 1/4; the convergence factor is undefined")
    return _sqrt_ratio(1 - 4 * abs(L))


def characteristic_ratio(L) -> Exactish:
    """|w-/w+| for the roots of w^2 + w - L = 0; equals 1 for L <= -1/4"""
    L = Fraction(L)
    if L <= -QUARTER:
        return Fraction(1)
    return _sqrt_ratio(1 + 4 * L)


def _as_fraction(value: Exactish) -> Fraction:
    if isinstance(value, HighPrecisionDecimal):
        return value.to_fraction()
    return Fraction(value)


def _log10(value: Fraction, digits: int) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = digits + 2 * Config.GUARD_DIGITS
        return Decimal(value.numerator).log10() - Decimal(value.denominator).log10()


def digits_per_iterations(sigma: Exactish, k: int) -> HighPrecisionDecimal:
    """k * (-log10 sigma), the decimal digits gained over k steps"""
    s = _as_fraction(sigma)
    if not 0 < s < 1:
        raise OutOfDomainError(f"sigma must lie in (0, 1), got {s}")
    if k < 1:
        raise OutOfDomainError(f"k must be >= 1, got {k}")
    value = -k * _log10(s, Config.RATIO_DIGITS)
    return hp_from_rational(Fraction(value), Config.RATIO_DIGITS)


def fitted_digits_per_iterations(errors: List[Tuple[int, Fraction]],
                                 k: int = 10) -> Optional[HighPrecisionDecimal]:
    """Least-squares slope of -log10(error) against n over the later half, times k"""
    points = [(n, e) for n, e in errors if e]
    if len(points) >= 6:
        points = points[len(points) // 2:]
    if len(points) < 3:
        return None
    x = np.array([n for n, _ in points], dtype=float)
    y = np.array([float(_log10(e, Config.RATIO_DIGITS)) for _, e in points])
    slope, _ = np.polyfit(x, y, 1)
    return hp_from_rational(Fraction(-k * float(slope)), Config.RATE_DIGITS)


@dataclass(frozen=True)
class EmpiricalRow:
    n: int
    error: Optional[Fraction]
    ratio: Optional[HighPrecisionDecimal]


@dataclass(frozen=True)
class AnalysisReport:
    label: str
    rho_samples: Tuple[Tuple[int, Optional[Fraction]], ...]
    rho_closed_form: Optional[Rule]
    limit: Optional[Fraction]
    classification: str
    sigma: Optional[Exactish]
    characteristic: Optional[Exactish]
    digits_per_10: Optional[HighPrecisionDecimal]
    rho_expansion: Optional[AsymptoticExpansion]
    numerator_expansion: Optional[AsymptoticExpansion]
    empirical: Tuple[EmpiricalRow, ...] = ()
    empirical_digits_per_10: Optional[HighPrecisionDecimal] = None
    notes: Tuple[str, ...] = field(default=())


def _expand(rule: Optional[Rule], below_top: int) -> Optional[AsymptoticExpansion]:
    if not isinstance(rule, RationalFunction):
        return None
    top = rule.degree if rule.degree is not None else 0
    return asymptotic_expand(rule, top - below_top)


def _expansion_notes(rho_expansion, numerator_expansion) -> List[str]:
    notes = []
    published = PUBLISHED_VALUES["rho_expansion"]
    if rho_expansion is not None and rho_expansion.top_degree == 0 \
            and rho_expansion.coefficients[:2] == published[:2]:
        computed = rho_expansion.coefficient(-2)
        if computed != published[2]:
            notes.append(
                f"rho_n expansion: n^-2 coefficient is {computed}, published value {published[2]}"
            )

    published = PUBLISHED_VALUES["tilde_expansion"]
    if numerator_expansion is not None and numerator_expansion.top_degree == 2 \
            and numerator_expansion.coefficients[0] == published[0]:
        computed = numerator_expansion.coefficients[:3]
        if computed != published:
            notes.append(
                "a_n expansion: computed " + ", ".join(map(str, computed))
                + " differs from published " + ", ".join(map(str, published))
            )
    return notes


def _empirical(cf: ContinuedFraction, reference: HighPrecisionDecimal,
               N: int) -> Tuple[EmpiricalRow, ...]:
    entries = error_sequence(cf, reference, N)
    ratios = empirical_error_ratios(entries)
    defined = [e for e in entries if e.abs_error is not None]
    ratio_at = {entry.n: ratio for entry, ratio in zip(defined[1:], ratios)}
    return tuple(EmpiricalRow(e.n, e.abs_error, ratio_at.get(e.n)) for e in entries)


def analyze(cf: ContinuedFraction, N: int = Config.DEFAULT_ANALYSIS_DEPTH,
            reference: Optional[HighPrecisionDecimal] = None) -> AnalysisReport:
    """Assemble the convergence report for cf over n <= N"""
    notes: List[str] = []
    samples = tuple(worpitzky_parameters(cf, N))
    rho = rho_closed_form(cf)
    found = symbolic_limit(cf)
    limit = found.limit if found else None
    classification = classify(limit)

    if rho is None:
        notes.append("tail rules have no closed form; rho_n limit not computed")
    elif found is None:
        notes.append("rho_n is unbounded or oscillates between parity laws; "
                     "Worpitzky analysis does not apply")

    sigma = characteristic = rate = None
    if limit is not None:
        characteristic = characteristic_ratio(limit)
        if classification != "exterior":
            sigma = convergence_factor(limit)
        if classification == "boundary":
            notes.append("Worpitzky criterion inconclusive at boundary |L| = 1/4; "
                         "geometric-rate claims do not apply")
        if sigma is not None and 0 < _as_fraction(sigma) < 1:
            rate = digits_per_iterations(sigma, 10)
        if limit > 0:
            notes.append(f"sigma uses |L|; the characteristic root ratio for L = {limit} "
                         f"is {characteristic}")

    rho_expansion = _expand(rho, 2) if limit is not None else None
    numerator_expansion = _expand(cf.a.tail.rule, 3)
    notes.extend(_expansion_notes(rho_expansion, numerator_expansion))

    empirical: Tuple[EmpiricalRow, ...] = ()
    fitted = None
    if reference is not None:
        empirical = _empirical(cf, reference, N)
        fitted = fitted_digits_per_iterations([(row.n, row.error) for row in empirical])
        last = next((row for row in reversed(empirical) if row.ratio is not None), None)
        if last is not None and sigma is not None:
            gap = abs(last.ratio.to_fraction() - _as_fraction(sigma))
            if gap > Fraction(1, 100):
                notes.append(f"empirical error ratio at n = {last.n} is {last.ratio}; "
                             f"sigma = {sigma}")

    logger.info(f"{cf.label}: L = {limit}, {classification}")
    return AnalysisReport(
        label=cf.label,
        rho_samples=samples,
        rho_closed_form=rho,
        limit=limit,
        classification=classification,
        sigma=sigma,
        characteristic=characteristic,
        digits_per_10=rate,
        rho_expansion=rho_expansion,
        numerator_expansion=numerator_expansion,
        empirical=empirical,
        empirical_digits_per_10=fitted,
        notes=tuple(notes),
    )
