"""Exception hierarchy.

Every exception carries a stable ``code`` used by the command line to render
diff-stable error lines.
"""

from __future__ import annotations


class CykError(Exception):
    """Base class for all domain errors."""

    code = "E000"


class ParseError(CykError):
    code = "P001"

    def __init__(self, message: str, line: int | None = None, column: int | None = None,
                 source: str | None = None) -> None:
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        loc = ""
        if source is not None:
            loc += f"{source}:"
        if line is not None:
            loc += f"{line}:"
            if column is not None:
                loc += f"{column}:"
        super().__init__(f"{loc} {message}" if loc else message)


class InvariantViolation(CykError):
    code = "P002"

    def __init__(self, invariant: str, message: str = "") -> None:
        self.invariant = invariant
        super().__init__(f"{invariant}: {message}" if message else invariant)


# scalar
class DivisionByZero(CykError, ZeroDivisionError):
    code = "S001"


class IncompatibleOrder(CykError, ValueError):
    code = "S002"


class BadOrder(CykError, ValueError):
    code = "S003"


# frobenius
class DegeneratePairing(CykError):
    code = "F001"


class NotSemisimple(CykError):
    code = "F002"


class SplitFieldNeeded(CykError):
    code = "F003"


# category
class BadLevel(CykError, ValueError):
    code = "C001"


class NonQuadraticForm(CykError, ValueError):
    code = "C002"


class NotClosed(CykError):
    code = "C003"


class NonInvolutiveTransparentTwist(CykError):
    code = "C004"


# link
class MalformedDiagram(CykError):
    code = "L001"


class ColorOutOfRange(CykError, ValueError):
    code = "L002"


class ResourceLimit(CykError):
    code = "L003"


class BackendMismatch(CykError):
    code = "L004"


class IndexOutOfRange(CykError, IndexError):
    code = "L005"


class NotBlowDownable(CykError):
    code = "L006"


# manifold
class HandlesUnsupported(CykError):
    code = "M001"


class KindMismatch(CykError):
    code = "M002"


class RohlinViolation(CykError):
    code = "M003"


class ParityViolation(CykError):
    code = "M004"


class NotRealizable(CykError):
    code = "M005"


class ExponentNotIntegral(CykError):
    code = "M006"


class K3Unavailable(CykError):
    code = "M007"


class UnsupportedPi1Fermionic(CykError):
    code = "M008"
