"""Exception types raised across the toolkit."""


class ParameterDomainError(ValueError):
    """A kernel or model parameter lies outside its valid domain."""


class NonFiniteLikelihoodError(ArithmeticError):
    """The conditional intensity is non-positive at an observed event."""


class InfeasibleRenormalization(ValueError):
    """A renormalization strategy has no valid solution for the given kernel."""


class SimulationError(RuntimeError):
    """Simulation was refused or aborted."""


class SequenceFormatError(ValueError):
    """An event-sequence file could not be parsed."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class FitError(RuntimeError):
    """The optimizer could not start from the supplied initial model."""
