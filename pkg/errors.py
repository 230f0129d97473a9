"""Exceptions raised by the PBW Gröbner engine and mapped to CLI exit codes."""


class PBWError(Exception):
    """Base class for every engine error."""


class FieldMismatchError(PBWError, ValueError):
    """Operands live over different coefficient fields."""


class ScalarDivisionError(PBWError, ZeroDivisionError):
    """Inverse of the zero scalar was requested."""


class PresentationError(PBWError, ValueError):
    """An algebra presentation is malformed."""


class AlgebraMismatchError(PBWError, ValueError):
    """Operands belong to different presentations or free modules of different rank."""


class ZeroPolynomialError(PBWError, ValueError):
    """Leading data of the zero element was requested."""


class OrderError(PBWError, ValueError):
    """A monomial or module order is malformed or used with the wrong arity."""


class InconsistentPresentationError(PBWError):
    """The presentation fails the cubic overlap check."""

    def __init__(self, failures):
        self.failures = list(failures)
        super().__init__(
            f"Presentation is not PBW-consistent: {len(self.failures)} overlap failure(s)"
        )


class UnverifiedBasisError(PBWError, ValueError):
    """An operation needs a verified Gröbner basis."""


class TransferError(PBWError, ValueError):
    """Inputs of a graded/filtered transfer violate its hypotheses."""


class ExpressionError(PBWError, ValueError):
    """An expression or presentation file could not be read."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})")


class InternalAssertionError(PBWError, AssertionError):
    """A check backed by a theorem failed; this indicates an engine defect."""


class ConfigurationError(PBWError, ValueError):
    """Command-line usage or environment configuration is invalid."""
