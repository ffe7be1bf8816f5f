"""Built-in continued fractions and scaling sequences, stored as DSL text."""

from dataclasses import dataclass
from typing import Dict, Optional

from cfengine import ContinuedFraction
from cf_parser import CfSpecSource, parse_cf_spec, parse_scaling_spec
from config import Config
from equivtrans import ScalingSequence
from errors import OutOfDomainError
from exactnum import HighPrecisionDecimal, hp_from_string, pi_quarter, sqrt_rational

REFERENCE_CONSTANTS = ("pi_over_4", "minus_pi_over_4", "sqrt2")


@dataclass(frozen=True)
class Preset:
    name: str
    text: str
    description: str
    reference: Optional[str] = None
    max_depth: int = Config.DEFAULT_MAX_DEPTH


PRESETS: Dict[str, Preset] = {p.name: p for p in (
    Preset(
        "conjecture-pi4",
        "b0 = 0; a(n) = { 1 for n in 1..2; -(n-1)*(2*n-5) for n >= 3 }; b(n) = -(3*n-2)",
        "integer polynomial fraction conjectured to equal -pi/4",
        "minus_pi_over_4",
    ),
    Preset(
        "gauss-kernel",
        "b0 = 0; a(n) = { 1 for n in 1..1; -(n-1)^2/((2*n-3)*(2*n-1)) for n >= 2 }; b(n) = 1",
        "Gauss fraction at (1/2, 0; 1/2; -1) with a_{n+1} = d_n z",
        "pi_over_4",
        Config.GAUSS_MAX_DEPTH,
    ),
    Preset(
        "gauss-kernel-classical",
        "b0 = 0; a(n) = { 1 for n in 1..1; (n-1)^2/((2*n-3)*(2*n-1)) for n >= 2 }; b(n) = 1",
        "Gauss fraction at (1/2, 0; 1/2; -1) with a_{n+1} = -d_n z, value pi/4",
        "pi_over_4",
        Config.GAUSS_MAX_DEPTH,
    ),
    Preset(
        "exact-transformed",
        "b0 = 0; a(n) = { -1 for n in 1..1; -4/3 for n in 2..2; "
        "-(3*n-2)*(3*n-5)*(n-1)^2/((2*n-3)*(2*n-1)) for n >= 3 }; b(n) = -(3*n-2)",
        "gauss-kernel scaled by r_n = -(3n-2)",
        "pi_over_4",
        Config.GAUSS_MAX_DEPTH,
    ),
    Preset("sqrt2", "b0 = 1; a(n) = 1; b(n) = 2", "1 + K(1/2), value sqrt(2)", "sqrt2"),
    Preset("oscillating", "b0 = 0; a(n) = 1; b(n) = 0", "convergents alternate 0 and undefined"),
)}

SCALING_PRESETS: Dict[str, Preset] = {p.name: p for p in (
    Preset("linear-scaling", "r(n) = { 1 for n in 0..0; -(3*n-2) for n >= 1 }",
           "r_0 = 1, r_n = -(3n-2)"),
    Preset("identity", "r(n) = 1", "r_n = 1"),
)}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise OutOfDomainError(f"unknown preset {name!r}; available: {', '.join(PRESETS)}")


def load_preset(name: str) -> ContinuedFraction:
    preset = get_preset(name)
    return parse_cf_spec(CfSpecSource(preset.text, f"preset:{name}"), label=name)


def load_scaling_preset(name: str) -> ScalingSequence:
    try:
        preset = SCALING_PRESETS[name]
    except KeyError:
        raise OutOfDomainError(
            f"unknown scaling preset {name!r}; available: {', '.join(SCALING_PRESETS)}"
        )
    return parse_scaling_spec(CfSpecSource(preset.text, f"preset:{name}"))


def resolve_reference(reference: str, digits: int) -> HighPrecisionDecimal:
    """pi_over_4, minus_pi_over_4, sqrt2 or a decimal literal"""
    if reference == "pi_over_4":
        return pi_quarter(digits)
    if reference == "minus_pi_over_4":
        return -pi_quarter(digits)
    if reference == "sqrt2":
        return sqrt_rational(2, digits)
    return hp_from_string(reference)
