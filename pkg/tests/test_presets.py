import pytest

from cf_parser import parse_cf_spec
from errors import OutOfDomainError
from gausshyp import specialization_cf
from presets import (
    PRESETS, SCALING_PRESETS, get_preset, load_preset, load_scaling_preset, resolve_reference,
)


@pytest.mark.parametrize("name", list(PRESETS))
def test_presets_round_trip(name):
    cf = load_preset(name)
    assert cf.label == name
    again = parse_cf_spec(cf.to_dsl())
    assert (again.b0, again.a, again.b) == (cf.b0, cf.a, cf.b)


@pytest.mark.parametrize("name, convention", [
    ("gauss-kernel", "direct"),
    ("gauss-kernel-classical", "classical"),
])
def test_gauss_presets_match_the_builder(name, convention):
    preset = load_preset(name)
    built = specialization_cf(convention)
    assert (preset.b0, preset.a, preset.b) == (built.b0, built.a, built.b)


@pytest.mark.parametrize("name", list(SCALING_PRESETS))
def test_scaling_presets_load(name):
    assert load_scaling_preset(name)(0) == 1


def test_unknown_presets():
    with pytest.raises(OutOfDomainError):
        get_preset("nope")
    with pytest.raises(OutOfDomainError):
        load_scaling_preset("nope")


@pytest.mark.parametrize("reference, expected", [
    ("pi_over_4", "0.7853981634"),
    ("minus_pi_over_4", "-0.7853981634"),
    ("sqrt2", "1.4142135624"),
])
def test_named_references(reference, expected):
    assert str(resolve_reference(reference, 10)) == expected


def test_literal_reference():
    assert str(resolve_reference("0.125", 10)) == "0.125"
    with pytest.raises(OutOfDomainError):
        resolve_reference("pi", 10)
