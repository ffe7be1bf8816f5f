from fractions import Fraction

import pytest

from config import Config
from utils import format_rational, format_scientific, progress


@pytest.mark.parametrize("value, expected", [
    (Fraction(1, 3), "3.33e-1"),
    (Fraction(-2146, 10000), "-2.15e-1"),
    (Fraction(151, 10 ** 6), "1.51e-4"),
    (Fraction(0), "0"),
    (None, "undef"),
])
def test_format_scientific(value, expected):
    assert format_scientific(value) == expected


def test_format_rational():
    assert format_rational(Fraction(-2, 9)) == "-2/9"
    assert format_rational(None) is None


def test_progress_is_silent_by_default():
    assert not Config.SHOW_PROGRESS
    assert list(progress(range(3))) == [0, 1, 2]
