"""Exception hierarchy for the lab."""


class LabError(Exception):
    """Base class for every error raised by :mod:`ddlab`."""


class LengthInsufficientError(LabError, ValueError):
    """A weight table is too short for the requested window."""


class DegenerateWeightError(LabError, ValueError):
    """A weight sequence has entries where a log-ratio would be meaningless."""


class BasisMismatchError(LabError, ValueError):
    pass


class TailTooLargeError(LabError, ValueError):
    """Discarded Fourier tail exceeds the allowed tolerance."""


class SpillTooLargeError(LabError, ValueError):
    """A matrix column lost too much mass to the truncation window."""


class NotWeightedError(LabError, ValueError):
    pass


class InsufficientDerivativesError(LabError, ValueError):
    pass


class ContainmentError(LabError, ValueError):
    """Sampled image of a map leaves the declared target set."""


class NoConvergenceError(LabError, RuntimeError):
    def __init__(self, message, iterations=None):
        super().__init__(message)
        self.iterations = iterations


class PreconditionError(LabError, ValueError):
    pass


class ConfigError(LabError, ValueError):
    def __init__(self, message, field=None):
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)
        self.field = field
