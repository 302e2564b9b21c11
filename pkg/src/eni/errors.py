"""Exception hierarchy shared across the package."""


class EniError(Exception):
    """Base class for all package errors."""


class InvalidGeometry(EniError):
    """A polygon or environment violates its geometric invariants."""


class PointNotInFreeSpace(EniError):
    """A query point lies outside the walkable free space."""


class EmptyFreeSpace(EniError):
    """An environment has no walkable area left after obstacles."""


class SamplingFailed(EniError):
    """Auto-tuned sampling could not hit the requested point count."""

    def __init__(self, message: str, achieved_count: int = 0):
        super().__init__(message)
        self.achieved_count = achieved_count


class InvalidInput(EniError):
    """An argument is outside an operation's documented domain."""


class PlanningFailed(EniError):
    """No collision-free path was found within the planner budget."""


class SimulationDiverged(EniError):
    """A simulated walk exceeded the step safeguard without finishing."""


class PoseOutOfBounds(EniError):
    """A recorded pose lies outside its environment's free space."""


class FormatError(EniError):
    """Base class for file-format errors."""


class ParseError(FormatError):
    """A file could not be parsed as its declared format."""


class InvariantViolation(FormatError):
    """Parsed data violates a domain invariant."""


class UnsupportedVersion(FormatError):
    """A file declares a format version this code does not read."""
