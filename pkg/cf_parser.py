"""Parser for the continued fraction description language.

    b0 = 0; a(n) = { 1 for n in 1..2; -(n-1)*(2*n-5) for n >= 3 }; b(n) = -(3*n-2)

Statements are separated by ';' (or newlines), '#' starts a comment, and
whitespace is insignificant. A piece expression may be alt(EVEN, ODD) to give
separate laws for even and odd n. Scaling sequences use the name r and start
at n = 0.
"""

import os
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional

from cfengine import ContinuedFraction
from equivtrans import ScalingSequence
from errors import PoleError, SpecSemanticError, SpecSyntaxError
from polyseq import ParityRule, Piece, PiecewiseSequence, RationalFunction, Rule
from utils import get_logger

logger = get_logger(__name__)

TOKEN_SPEC = [
    ("COMMENT", r"#[^\n]*"),
    ("NEWLINE", r"\n"),
    ("SKIP", r"[ \t\r]+"),
    ("INT", r"\d+"),
    ("NAME", r"[A-Za-z_][A-Za-z0-9_]*"),
    ("OP", r"\.\.|>=|[-+*/^(){};,=]"),
    ("MISMATCH", r"."),
]
TOKEN_RE = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in TOKEN_SPEC))

# start index of each sequence name
SEQUENCE_STARTS = {"a": 1, "b": 1, "r": 0}


class Token(NamedTuple):
    kind: str
    value: str
    line: int
    column: int


@dataclass(frozen=True)
class CfSpecSource:
    text: str
    origin: str = "<inline>"


def load_spec_source(value: str) -> CfSpecSource:
    """A file path when one exists, otherwise the inline text itself"""
    if os.path.isfile(value):
        with open(value, "r", encoding="utf-8") as f:
            return CfSpecSource(f.read(), value)
    return CfSpecSource(value)


def tokenize(source: CfSpecSource) -> List[Token]:
    tokens = []
    line, line_start = 1, 0
    for match in TOKEN_RE.finditer(source.text):
        kind, value = match.lastgroup, match.group()
        column = match.start() - line_start + 1
        if kind == "NEWLINE":
            tokens.append(Token("SEP", "\n", line, column))
            line, line_start = line + 1, match.end()
        elif kind in ("SKIP", "COMMENT"):
            continue
        elif kind == "MISMATCH":
            raise SpecSyntaxError(f"unexpected character {value!r}", line, column, source.origin)
        elif value == ";":
            tokens.append(Token("SEP", value, line, column))
        else:
            tokens.append(Token(kind, value, line, column))
    tokens.append(Token("EOF", "", line, len(source.text) - line_start + 1))
    return tokens


class _Parser:
    """Recursive descent over the token list"""

    def __init__(self, source: CfSpecSource):
        self.source = source
        self.tokens = tokenize(source)
        self.pos = 0
        self.n = RationalFunction.variable()

    # token helpers

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def error(self, message: str, token: Optional[Token] = None) -> SpecSyntaxError:
        token = token or self.current
        return SpecSyntaxError(message, token.line, token.column, self.source.origin)

    def check(self, value: str) -> bool:
        return self.current.kind in ("OP", "NAME", "SEP") and self.current.value == value

    def accept(self, value: str) -> bool:
        if self.check(value):
            self.pos += 1
            return True
        return False

    def expect(self, value: str) -> Token:
        token = self.current
        if not self.accept(value):
            found = token.value or "end of input"
            raise self.error(f"expected {value!r}, found {found!r}")
        return token

    def expect_int(self) -> int:
        token = self.current
        if token.kind != "INT":
            raise self.error(f"expected an integer, found {token.value or 'end of input'!r}")
        self.pos += 1
        return int(token.value)

    def skip_separators(self) -> bool:
        skipped = False
        while self.current.kind == "SEP":
            self.pos += 1
            skipped = True
        return skipped

    def skip_newlines(self):
        while self.current.kind == "SEP" and self.current.value == "\n":
            self.pos += 1

    # statements

    def statements(self) -> Dict[str, object]:
        found: Dict[str, object] = {}
        self.skip_separators()
        while self.current.kind != "EOF":
            token = self.current
            if token.kind != "NAME":
                raise self.error(f"expected a definition, found {token.value!r}")
            name = token.value
            if name in found:
                raise self.error(f"{name} is defined twice")
            if name == "b0":
                self.pos += 1
                self.expect("=")
                found[name] = self.constant()
            elif name in SEQUENCE_STARTS:
                found[name] = self.seqdef()
            else:
                raise self.error(f"unknown name {name!r}; expected b0, a, b or r")
            if self.current.kind != "EOF" and not self.skip_separators():
                raise self.error(f"expected ';' after the definition of {name}")
        return found

    def constant(self) -> Fraction:
        token = self.current
        rule = self.expr()
        if not rule.is_constant:
            raise self.error("b0 must be a rational constant", token)
        return rule(0)

    def seqdef(self) -> PiecewiseSequence:
        name = self.current.value
        start = SEQUENCE_STARTS[name]
        self.pos += 1
        self.expect("(")
        self.expect("n")
        self.expect(")")
        self.expect("=")
        if not self.accept("{"):
            return PiecewiseSequence.from_rule(self.piece_rule(), start, name)

        pieces = []
        self.skip_newlines()
        while True:
            pieces.append(self.piece())
            self.skip_newlines()
            if self.accept(";"):
                self.skip_newlines()
                if self.accept("}"):
                    break
                continue
            self.expect("}")
            break
        return PiecewiseSequence(tuple(pieces), start, name)

    def piece(self) -> Piece:
        rule = self.piece_rule()
        self.expect("for")
        self.expect("n")
        if self.accept(">="):
            return Piece(self.expect_int(), None, rule)
        token = self.current
        self.expect("in")
        lo = self.expect_int()
        self.expect("..")
        hi = self.expect_int()
        if hi < lo:
            raise self.error(f"empty range {lo}..{hi}", token)
        return Piece(lo, hi, rule)

    def piece_rule(self) -> Rule:
        if self.accept("alt"):
            self.expect("(")
            even = self.expr()
            self.expect(",")
            odd = self.expr()
            self.expect(")")
            return ParityRule.make(even, odd)
        return self.expr()

    # expressions

    def expr(self) -> RationalFunction:
        value = self.term()
        while True:
            if self.accept("+"):
                value = value + self.term()
            elif self.accept("-"):
                value = value - self.term()
            else:
                return value

    def term(self) -> RationalFunction:
        value = self.factor()
        while True:
            if self.accept("*"):
                value = value * self.factor()
            elif self.check("/"):
                token = self.current
                self.pos += 1
                divisor = self.factor()
                if divisor.is_zero:
                    raise self.error("division by zero", token)
                value = value / divisor
            else:
                return value

    def factor(self) -> RationalFunction:
        if self.accept("-"):
            return -self.factor()
        base = self.primary()
        if self.accept("^"):
            base = base ** self.expect_int()
        return base

    def primary(self) -> RationalFunction:
        token = self.current
        if token.kind == "INT":
            self.pos += 1
            return RationalFunction.from_value(int(token.value))
        if self.accept("n"):
            return self.n
        if self.accept("("):
            value = self.expr()
            self.expect(")")
            return value
        raise self.error(f"expected a number, 'n' or '(', found {token.value or 'end of input'!r}")


def _parse(source: CfSpecSource) -> Dict[str, object]:
    return _Parser(source).statements()


def parse_cf_spec(src, label: Optional[str] = None) -> ContinuedFraction:
    """ContinuedFraction from DSL text (or a CfSpecSource)"""
    source = src if isinstance(src, CfSpecSource) else CfSpecSource(src)
    found = _parse(source)
    missing = [name for name in ("b0", "a", "b") if name not in found]
    if missing:
        raise SpecSemanticError(f"{source.origin}: missing definition of {', '.join(missing)}")
    if "r" in found:
        raise SpecSemanticError(f"{source.origin}: r(n) belongs in a scaling spec")
    try:
        return ContinuedFraction(found["b0"], found["a"], found["b"], label or source.origin)
    except PoleError as e:
        raise SpecSemanticError(f"{source.origin}: zero-denominator rule: {e}") from e


def parse_scaling_spec(src) -> ScalingSequence:
    """ScalingSequence from a single r(n) definition"""
    source = src if isinstance(src, CfSpecSource) else CfSpecSource(src)
    found = _parse(source)
    if set(found) != {"r"}:
        raise SpecSemanticError(f"{source.origin}: a scaling spec defines r(n) and nothing else")
    logger.debug(f"scaling spec {source.origin}: {found['r']}")
    return ScalingSequence(found["r"])
