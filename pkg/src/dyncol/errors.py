"""Exception hierarchy shared by every dyncol module."""


class DyncolError(Exception):
    """Base class for all errors raised by dyncol."""


class ParameterError(DyncolError, ValueError):
    pass


class CapacityError(DyncolError):
    """A derived size exceeds the configured budget.

    ``quantity`` names the offending count (``"vertices"``, ``"edges"``, ...).
    """

    def __init__(self, quantity, value, limit):
        self.quantity = quantity
        self.value = value
        self.limit = limit
        super().__init__(f"{quantity} = {value} exceeds budget {limit}")


class LabelError(DyncolError, ValueError):
    pass


class FormatError(DyncolError, ValueError):
    """Malformed input file (DIMACS graph, CNF, labels, colouring, set)."""


class ColouringError(DyncolError, ValueError):
    pass


class WitnessUnavailable(DyncolError):
    pass


class PreconditionError(DyncolError):
    pass


class TooManyColours(PreconditionError):
    def __init__(self, used, limit):
        self.used = used
        self.limit = limit
        super().__init__(f"colouring uses {used} colours; refutation needs at most {limit}")


class NoWitnessFound(DyncolError):
    """The pigeonhole step found no bucket with enough blocks.

    ``histogram`` maps each bucket key to its number of blocks.
    """

    def __init__(self, message, histogram):
        self.histogram = histogram
        super().__init__(message)


class ModelError(DyncolError):
    pass


class SolverUnknown(DyncolError):
    """An exact search stopped before deciding; carries the bounds reached."""

    def __init__(self, lower, upper, reason):
        self.lower = lower
        self.upper = upper
        self.reason = reason
        super().__init__(f"undecided in [{lower}, {upper}]: {reason}")
