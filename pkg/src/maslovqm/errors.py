"""Exception hierarchy shared by all modules."""


class MaslovError(Exception):
    """Base class for every error raised by maslovqm."""


class NotSymmetric(MaslovError, ValueError):
    pass


class NoConvergence(MaslovError, ArithmeticError):
    pass


class Singular(MaslovError, ArithmeticError):
    pass


class NotPositive(MaslovError, ValueError):
    pass


class OddDimension(MaslovError, ValueError):
    pass


class NotUnitary(MaslovError, ValueError):
    pass


class FactorNotSymplectic(MaslovError, ArithmeticError):
    pass


class DimensionMismatch(MaslovError, ValueError):
    pass


class GridMismatch(DimensionMismatch):
    """Two paths live on different time grids and cannot be regenerated."""


class RefinementNeeded(MaslovError):
    """A sampled path is too coarse to resolve its rotation; regenerate with more samples."""


class StepTooLarge(RefinementNeeded):
    pass


class NotRefinable(MaslovError):
    """The path was ingested as raw samples and carries no generator to resample it."""


class Overflow(MaslovError, OverflowError):
    pass


class NotALoop(MaslovError, ValueError):
    pass


class NotNearInteger(MaslovError, ArithmeticError):
    pass


class InvalidPath(MaslovError, ValueError):
    pass
