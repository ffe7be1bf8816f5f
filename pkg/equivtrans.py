"""Equivalence transformations b~_n = r_n b_n, a~_n = r_n r_{n-1} a_n.

The transformation changes the canonical numerators and denominators but
leaves every convergent value unchanged. It is composed symbolically piece
by piece when the rules have closed forms.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from cfengine import ContinuedFraction, convergents
from config import Config
from errors import InvalidScalingError, OutOfDomainError
from polyseq import (
    Piece, PiecewiseSequence, RationalFunction, Rule, rule_multiply, rule_shift,
)
from utils import get_logger

logger = get_logger(__name__)

# indices of the partial numerators always kept as explicit constants
HEAD_TERMS = 2


@dataclass(frozen=True)
class ScalingSequence:
    r: PiecewiseSequence
    check_range: int = Config.VERIFY_RANGE

    def __post_init__(self):
        if self.r.start_index != 0:
            raise InvalidScalingError(
                f"scaling sequence must start at n = 0, starts at {self.r.start_index}", n=0
            )
        object.__setattr__(self, "r", self.r.renamed("r"))
        pole = self.r.first_pole(self.check_range)
        if pole is not None:
            raise InvalidScalingError(f"r(n) has a pole at n = {pole}", n=pole)
        if self.r(0) != 1:
            raise InvalidScalingError(f"r(0) must be 1, got {self.r(0)}", n=0)
        zero = self.r.first_zero(self.check_range)
        if zero is not None:
            raise InvalidScalingError(f"r({zero}) = 0 is not a valid scaling factor", n=zero)

    def __call__(self, n: int) -> Fraction:
        return self.r(n)

    @property
    def is_identity(self) -> bool:
        one = RationalFunction.from_value(1)
        return all(piece.rule == one for piece in self.r.pieces)

    def to_dsl(self) -> str:
        return self.r.to_dsl()


def linear_scaling() -> ScalingSequence:
    """r_0 = 1, r_n = -(3n - 2)"""
    n = RationalFunction.variable()
    return ScalingSequence(PiecewiseSequence.with_head([1], -(3 * n - 2), start_index=0, name="r"))


def identity_scaling() -> ScalingSequence:
    return ScalingSequence(PiecewiseSequence.from_rule(1, start_index=0, name="r"))


def _breakpoints(sources: Sequence[Tuple[PiecewiseSequence, int]], start: int) -> List[int]:
    """Segment starts where any shifted source changes piece"""
    points = {start}
    for seq, offset in sources:
        for piece in seq.pieces:
            points.add(piece.lo + offset)
            if piece.hi is not None:
                points.add(piece.hi + offset + 1)
    return sorted(p for p in points if p >= start)


def _compose(sources: Sequence[Tuple[PiecewiseSequence, int]], extra_points: Sequence[int],
             fixed: int, name: str) -> PiecewiseSequence:
    """Product of the shifted sources, as pieces; indices 1..fixed become constants"""
    starts = sorted(set(_breakpoints(sources, 1)) | set(extra_points))
    pieces: List[Piece] = []
    for i, lo in enumerate(starts):
        hi = starts[i + 1] - 1 if i + 1 < len(starts) else None
        rule: Rule = RationalFunction.from_value(1)
        for seq, offset in sources:
            rule = rule_multiply(rule, rule_shift(seq.piece_at(lo - offset).rule, -offset))

        if lo <= fixed and hi == lo:
            pieces.append(Piece(lo, hi, RationalFunction.from_value(rule(lo))))
            continue
        previous = pieces[-1] if pieces else None
        if previous is not None and previous.lo > fixed and previous.rule == rule:
            pieces[-1] = Piece(previous.lo, hi, rule)
        else:
            pieces.append(Piece(lo, hi, rule))
    return PiecewiseSequence(tuple(pieces), 1, name)


def apply_equivalence(cf: ContinuedFraction, r: ScalingSequence) -> ContinuedFraction:
    """The equivalent fraction (a~_n, b~_n) with the same b0"""
    if r.is_identity:
        return cf

    b_tilde = _compose([(cf.b, 0), (r.r, 0)], (), 0, "b")
    head = list(range(1, HEAD_TERMS + 2))
    a_tilde = _compose([(cf.a, 0), (r.r, 0), (r.r, 1)], head, HEAD_TERMS, "a")

    logger.debug(f"{cf.label} transformed: {a_tilde}; {b_tilde}")
    return ContinuedFraction(cf.b0, a_tilde, b_tilde, f"{cf.label}~", cf.check_range)


def exact_tilde_numerator(n: int) -> Fraction:
    """-(3n-2)(3n-5)(n-1)^2 / ((2n-3)(2n-1)) for the scaled Gauss kernel"""
    if n < 2:
        raise OutOfDomainError(f"closed form holds for n >= 2, got {n}")
    return Fraction(-(3 * n - 2) * (3 * n - 5) * (n - 1) ** 2, (2 * n - 3) * (2 * n - 1))


@dataclass(frozen=True)
class InvarianceVerdict:
    n: int
    value: Optional[Fraction]
    transformed_value: Optional[Fraction]
    values_equal: bool
    pairs_equal: bool


@dataclass(frozen=True)
class InvarianceReport:
    label: str
    verdicts: Tuple[InvarianceVerdict, ...]

    @property
    def all_equal(self) -> bool:
        return all(v.values_equal for v in self.verdicts)

    @property
    def first_mismatch(self) -> Optional[int]:
        return next((v.n for v in self.verdicts if not v.values_equal), None)


def verify_invariance(cf: ContinuedFraction, r: ScalingSequence, N: int) -> InvarianceReport:
    """Compare convergent values of cf and its transform for n = 1..N"""
    transformed = apply_equivalence(cf, r)
    verdicts = []
    for left, right in zip(convergents(cf, N), convergents(transformed, N)):
        verdicts.append(InvarianceVerdict(
            n=left.n,
            value=left.value,
            transformed_value=right.value,
            values_equal=left.value == right.value,
            pairs_equal=(left.A, left.B) == (right.A, right.B),
        ))
    report = InvarianceReport(cf.label, tuple(verdicts))
    if not report.all_equal:
        logger.warning(f"{cf.label}: convergent values differ from n = {report.first_mismatch}")
    return report


def flip_head_sign(cf: ContinuedFraction) -> ContinuedFraction:
    """Same fraction with a_1 negated"""
    return cf.with_head_numerator(-cf.a(1)).with_label(f"{cf.label} (head flipped)")


def verify_sign_inversion(cf: ContinuedFraction, N: int) -> bool:
    """f'_n - b0 = -(f_n - b0) for every convergent of the head-flipped fraction"""
    flipped = flip_head_sign(cf)
    for left, right in zip(convergents(cf, N), convergents(flipped, N)):
        if left.value is None or right.value is None:
            if (left.value is None) != (right.value is None):
                return False
            continue
        if right.value - cf.b0 != -(left.value - cf.b0):
            logger.warning(f"{cf.label}: head flip does not invert convergent {left.n}")
            return False
    return True
