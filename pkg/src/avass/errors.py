"""Exception hierarchy shared by every module."""


class AvassError(Exception):
    """Base class for all library errors."""


class DimensionError(AvassError):
    """Matrices, vectors or permutations of incompatible sizes."""


class InputError(AvassError):
    """Malformed user input: bad files, unknown ids, out-of-range configs."""

    def __init__(self, message: str, pointer: str = ""):
        self.pointer = pointer
        super().__init__(f"{message} (at {pointer})" if pointer else message)


class PreconditionError(AvassError):
    """A construction was handed a seed that lacks the required entries."""


class UnsupportedSeed(AvassError):
    """The seed is outside the shapes a construction knows how to handle."""


class CapExceeded(AvassError):
    """An enumeration or expansion grew past its configured cap."""


class ConstructionBug(AvassError):
    """An internal self-check failed. Seeing this means the code is wrong."""
