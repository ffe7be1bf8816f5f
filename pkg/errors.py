"""Exceptions raised by the polycf modules.

Every error derives from PolyCFError so the command line can map whole
families of failures onto exit codes.
"""

from typing import Optional, Sequence


class PolyCFError(Exception):
    """Base class for all polycf errors"""


class OutOfDomainError(PolyCFError, ValueError):
    """An index lies outside the range a sequence or formula is defined on"""


class PoleError(PolyCFError, ArithmeticError):
    """A rational-function rule has a vanishing denominator at an integer index"""

    def __init__(self, message: str, n: Optional[int] = None):
        super().__init__(message)
        self.n = n


class DegenerateFractionError(PolyCFError, ValueError):
    """A partial numerator vanishes, which would truncate the fraction"""

    def __init__(self, message: str, n: Optional[int] = None):
        super().__init__(message)
        self.n = n


class NoConvergenceError(PolyCFError):
    """Evaluation did not stabilize before reaching the depth limit"""

    def __init__(self, message: str, depth: int, last_values: Sequence = ()):
        super().__init__(message)
        self.depth = depth
        self.last_values = tuple(last_values)


class OracleInconsistencyError(PolyCFError, ArithmeticError):
    """Two independent evaluations of the same constant disagree"""


class GaussParameterError(PolyCFError, ValueError):
    """Hypergeometric parameters make a Pochhammer or law denominator vanish"""

    def __init__(self, message: str, k: Optional[int] = None):
        super().__init__(message)
        self.k = k


class InvalidScalingError(PolyCFError, ValueError):
    """A scaling sequence violates r_0 = 1 or has a zero factor"""

    def __init__(self, message: str, n: Optional[int] = None):
        super().__init__(message)
        self.n = n


class OutOfDiskError(PolyCFError, ValueError):
    """|L| exceeds 1/4, where the convergence factor formula is undefined"""


class SpecSyntaxError(PolyCFError, ValueError):
    """The continued fraction DSL source cannot be tokenized or parsed"""

    def __init__(self, message: str, line: int, column: int, origin: str = "<inline>"):
        super().__init__(f"{origin}:{line}:{column}: {message}")
        self.line = line
        self.column = column
        self.origin = origin


class SpecSemanticError(PolyCFError, ValueError):
    """The DSL source parses but describes an invalid sequence or fraction"""
