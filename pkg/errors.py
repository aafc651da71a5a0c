#!/usr/bin/env python3
"""
Exception hierarchy for the arcs toolkit.
Every domain failure is an ArcError so callers (CLI, HTTP service) can map
them to exit codes and status codes in one place.
"""

from typing import Any, Optional


class ArcError(ValueError):
    """Base class for all domain errors"""


class ModulusOutOfRange(ArcError):
    """Modulus outside [2, cap]"""


class NotAUnit(ArcError):
    """Residue has no inverse modulo n"""


class MixedModuli(ArcError):
    """Operands live in different Z_n"""


class NotADivisor(ArcError):
    """Projection target does not divide the modulus"""


class NotPrimitive(ArcError):
    """Direction (u, v) with gcd(u, v, n) > 1"""


class NotSquarefree(ArcError):
    """Determinant collinearity test requested for a modulus with a square factor"""


class NotAnArc(ArcError):
    """Point set contains three collinear points"""


class NotComplete(ArcError):
    """Arc can still be extended"""


class NotOddPrime(ArcError):
    """Lifting map needs an odd prime"""


class NotInvertible(ArcError):
    """Affine map whose matrix determinant is not a unit"""


class TooSmall(ArcError):
    """Arc too small to normalize (needs more than p + 3 points)"""


class CellNotFree(ArcError):
    """Search tried to select a cell that is IN or OUT"""


class InvalidMode(ArcError):
    """Search mode not applicable to the modulus or options"""


class MalformedCertificate(ArcError):
    """Certificate file cannot be parsed or validated"""


class BudgetExhausted(ArcError):
    """Node budget hit; carries the best-so-far result"""

    def __init__(self, message: str, result: Optional[Any] = None):
        super().__init__(message)
        self.result = result


class IoFailure(ArcError):
    """Output file cannot be written"""
