"""Exception hierarchy shared by all modules."""


class LacunaeError(Exception):
    """Base class for errors raised by this package."""


class RankMismatchError(LacunaeError, ValueError):
    pass


class WordParseError(LacunaeError, ValueError):
    """Malformed word text; ``position`` is the 0-based offset of the problem."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class BudgetExceededError(LacunaeError):
    """A ball, matrix or convolution would exceed the configured size cap."""


class UndecidedOrderError(LacunaeError):
    """Two distinct words agree in their Magnus series through the search depth."""

    def __init__(self, g, h, depth):
        super().__init__(f"order of {g} and {h} undecided through degree {depth}")
        self.g = g
        self.h = h
        self.depth = depth


class PositivityError(LacunaeError):
    """An element expected to be positive produced a negative Ritz value."""


class ConvergenceError(LacunaeError):
    """An iterative eigen-solver stopped before reaching its tolerance."""

    def __init__(self, message, last=None):
        super().__init__(message)
        self.last = last


class LacunarityError(LacunaeError):
    """Raised when a pipeline needs a lacunary sequence and the certificate fails."""

    def __init__(self, certificate):
        super().__init__(f"sequence is not lacunary: delta={certificate.delta}")
        self.certificate = certificate
