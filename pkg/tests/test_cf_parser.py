from fractions import Fraction

import pytest

from cf_parser import CfSpecSource, load_spec_source, parse_cf_spec, parse_scaling_spec, tokenize
from errors import SpecSemanticError, SpecSyntaxError
from polyseq import ParityRule


class TestTokenizer:
    def test_separators_and_ranges(self):
        kinds = [t.kind for t in tokenize(CfSpecSource("a(n) = { 1 for n in 1..2 }\n"))]
        assert kinds.count("SEP") == 1
        assert kinds[-1] == "EOF"
        values = [t.value for t in tokenize(CfSpecSource("1..2"))]
        assert values == ["1", "..", "2", ""]

    def test_comments_are_skipped(self):
        tokens = tokenize(CfSpecSource("b0 = 1 # start value"))
        assert [t.value for t in tokens] == ["b0", "=", "1", ""]

    def test_position_of_bad_character(self):
        with pytest.raises(SpecSyntaxError) as info:
            parse_cf_spec("b0 = 0\na(n) = 1\nb(n) = n $")
        assert (info.value.line, info.value.column) == (3, 10)
        assert str(info.value).startswith("<inline>:3:10:")


class TestParseContinuedFraction:
    def test_conjecture(self):
        cf = parse_cf_spec(
            "b0 = 0; a(n) = { 1 for n in 1..2; -(n-1)*(2*n-5) for n >= 3 }; b(n) = -(3*n-2)"
        )
        assert cf.a.values(1, 5) == [1, 1, -2, -9, -20]
        assert cf.b.values(1, 3) == [-1, -4, -7]
        assert cf.label == "<inline>"

    def test_multiline_with_comments(self):
        text = "\n".join([
            "# the square root of two",
            "b0 = 1",
            "a(n) = {",
            "    1 for n >= 1",
            "}",
            "b(n) = 2",
        ])
        cf = parse_cf_spec(text, label="sqrt2")
        assert cf.b0 == 1
        assert cf.a(7) == 1
        assert cf.b(3) == 2

    def test_statement_order_is_free(self):
        cf = parse_cf_spec("b(n) = 2; a(n) = 1; b0 = 1")
        assert cf.to_dsl() == "b0 = 1; a(n) = 1; b(n) = 2"

    def test_rational_constants(self):
        cf = parse_cf_spec("b0 = -1/2; a(n) = n/(n+1); b(n) = 2^3")
        assert cf.b0 == Fraction(-1, 2)
        assert cf.a(3) == Fraction(3, 4)
        assert cf.b(1) == 8

    def test_parity_rule(self):
        cf = parse_cf_spec("b0 = 0; a(n) = alt(n, 2*n); b(n) = 1")
        assert isinstance(cf.a.tail.rule, ParityRule)
        assert cf.a.values(1, 4) == [2, 2, 6, 4]

    @pytest.mark.parametrize("text", [
        "b0 = 0; a(n) = 1 +; b(n) = 1",
        "b0 = 0; a(n) = 1; b(n) = 1/0",
        "b0 = 0; a(n) = 1 b(n) = 1",
        "b0 = 0; c(n) = 1",
        "b0 = 0; a(n) = { 1 for n in 2..1; 2 for n >= 3 }; b(n) = 1",
        "b0 = 0; a(n) = 1; a(n) = 2; b(n) = 1",
        "b0 = 0; a(k) = 1; b(n) = 1",
        "b0 = n; a(n) = 1; b(n) = 1",
    ])
    def test_syntax_errors(self, text):
        with pytest.raises(SpecSyntaxError):
            parse_cf_spec(text)

    @pytest.mark.parametrize("text", [
        "b0 = 0; a(n) = 1",
        "b0 = 0; a(n) = { 1 for n in 1..2 }; b(n) = 1",
        "b0 = 0; a(n) = { 1 for n in 1..2; 2 for n >= 4 }; b(n) = 1",
        "b0 = 0; a(n) = 1/(n-2); b(n) = 1",
        "b0 = 0; a(n) = 1; b(n) = 1; r(n) = 1",
    ])
    def test_semantic_errors(self, text):
        with pytest.raises(SpecSemanticError):
            parse_cf_spec(text)

    def test_zero_denominator_message(self):
        with pytest.raises(SpecSemanticError, match="zero-denominator"):
            parse_cf_spec("b0 = 0; a(n) = 1/(n-2); b(n) = 1")


class TestScalingSpec:
    def test_linear_scaling(self):
        r = parse_scaling_spec("r(n) = { 1 for n in 0..0; -(3*n-2) for n >= 1 }")
        assert [r(k) for k in range(4)] == [1, -1, -4, -7]

    def test_rejects_other_definitions(self):
        with pytest.raises(SpecSemanticError):
            parse_scaling_spec("b0 = 1; r(n) = 1")


class TestSpecSource:
    def test_inline_text(self):
        source = load_spec_source("b0 = 1; a(n) = 1; b(n) = 2")
        assert source.origin == "<inline>"

    def test_file(self, tmp_path):
        path = tmp_path / "sqrt2.cf"
        path.write_text("b0 = 1\na(n) = 1\nb(n) = 2\n", encoding="utf-8")
        source = load_spec_source(str(path))
        assert source.origin == str(path)
        cf = parse_cf_spec(source)
        assert cf.label == str(path)
        assert cf.b(1) == 2
