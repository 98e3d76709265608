"""Exception hierarchy.

Everything numerical derives from :class:`NumericalError` so the CLI can map
it to a single exit status; parameter problems derive from ``ValueError``.
"""


class ParameterError(ValueError):
    """Invalid physical parameters."""


class NonIdenticalAtoms(ParameterError):
    """The closed-form path needs equal couplings and equal detunings."""


class ConfigError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NumericalError(ArithmeticError):
    """Base class for failures of the numerical machinery."""

    def __init__(self, message, block=None):
        self.block = block
        if block is not None:
            message = f"block (n1={block[0]}, n2={block[1]}): {message}"
        super().__init__(message)


class DegenerateDiscriminant(NumericalError):
    pass


class ComplexRootRegime(NumericalError):
    pass


class DegenerateRoots(NumericalError):
    pass


class StepSizeFailure(NumericalError):
    pass


class GridMismatch(NumericalError):
    pass


class TruncationTooSmall(NumericalError):
    pass


class StructureViolation(NumericalError):
    pass


class NegativeEigenvalue(NumericalError):
    pass


class NegativeRadicand(NumericalError):
    pass
