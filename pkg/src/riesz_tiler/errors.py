"""Exception hierarchy shared by every stage of the pipeline."""


class RieszTilerError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(RieszTilerError, ValueError):
    """Malformed or inconsistent input (bad rational, wrong dimension, ...)."""


class OverlapError(ValidationError):
    """Two boxes of a box union intersect in positive measure."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class DegenerateCellError(RieszTilerError):
    """A cell or face of zero measure was about to be created."""


class NonAxisAlignedError(ValidationError):
    """A box union does not stay a box union under the lattice normalization."""


class NotATilingError(RieszTilerError):
    """The region does not tile at the requested level."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class SelectionFailure(RieszTilerError):
    """No candidate shift tuple reached the requested conditioning tolerance."""

    def __init__(self, message, best=None, quality=None):
        super().__init__(message)
        self.best = best
        self.quality = quality


class SingularProfileError(RieszTilerError):
    """Some profile matrix is (numerically) singular for the given shifts."""


class ResolutionError(RieszTilerError):
    """Grid resolution incompatible with the cell breakpoints."""


class DimensionError(RieszTilerError):
    """Operation only defined in a different dimension."""
