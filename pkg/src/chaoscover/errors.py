"""Exception hierarchy shared by the library and the CLI."""


class ChaosCoverError(Exception):
    """Base class for every error raised by chaoscover."""


class ValidationError(ChaosCoverError, ValueError):
    """A configuration value violates its constraint.

    ``field`` names the offending key (dotted path for nested configs).
    """

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class ParseError(ChaosCoverError):
    """Input file could not be parsed."""


class SimulationError(ChaosCoverError):
    """Runtime failure that terminates a coverage run."""


class NonFiniteState(SimulationError):
    pass


class ScaledOutOfBounds(SimulationError):
    pass


class StillOutside(SimulationError):
    pass


class NonFinitePath(SimulationError):
    pass


class DegeneratePath(SimulationError):
    """The Logistic orbit collapsed onto a fixed point (non-chaotic initial condition)."""


class OutOfBounds(SimulationError):
    pass


class NoProgress(SimulationError):
    pass


class EmptyList(ChaosCoverError):
    pass


class HasObstacles(ChaosCoverError):
    pass


class ZeroBaseline(ChaosCoverError, ZeroDivisionError):
    pass
