class CollabnetError(Exception):
    """Base class for errors raised by collabnet."""


class InputError(CollabnetError, ValueError):
    """Bad or unusable input data (CLI exit code 2)."""


class NumericalError(CollabnetError, ArithmeticError):
    """A computation could not produce a meaningful number (CLI exit code 3)."""
