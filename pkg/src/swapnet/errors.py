"""Exception hierarchy.

Every numeric failure derives from :class:`SwapnetError` so the CLI can map
them to a single exit code.
"""


class SwapnetError(Exception):
    """Base class for all library errors."""


class InvalidState(SwapnetError, ValueError):
    """Input is not a valid two-qubit density matrix."""


class NotHermitian(InvalidState):
    pass


class NotNormalized(InvalidState):
    pass


class NotPSD(InvalidState):
    pass


class NoConvergence(SwapnetError, ArithmeticError):
    pass


class ParamOutOfRange(SwapnetError, ValueError):
    pass


class UnsupportedFamily(SwapnetError, ValueError):
    pass


class PathTooLong(SwapnetError, ValueError):
    pass


class GenerationFailed(SwapnetError, RuntimeError):
    pass


class InsufficientData(SwapnetError, ValueError):
    pass
