"""Exception hierarchy shared across the package."""


class HtgError(Exception):
    """Base class for all errors raised by this package."""


class DescriptorLengthMismatch(HtgError):
    """Refinement bitstream length is inconsistent with the level recurrence."""


class FieldLengthMismatch(HtgError):
    """A cell field or mask does not contain one value per cell."""


class BadAxisCoordinates(HtgError):
    """Axis coordinate lists are missing, too short, or not strictly increasing."""


class IndexOutOfRange(HtgError, IndexError):
    """Tree, cell, or child index outside the valid range."""


class NotRefined(HtgError):
    """Attempted to descend into the children of a leaf cell."""


class WrongDimension(HtgError):
    """Operation is not defined for a grid of this dimension."""


class DimensionMismatch(HtgError):
    """Query geometry does not match the grid dimension."""


class NonPositiveArgument(HtgError, ValueError):
    """An argument that must be strictly positive was not."""


class ParseError(HtgError):
    """A grid or request document could not be parsed."""


class UnknownCanonicalGrid(HtgError):
    """Requested generator name is not one of the known canonical grids."""
