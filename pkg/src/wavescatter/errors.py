"""Exception types shared across the package.

Everything derives from ValueError so callers that only care about
"bad input" can catch a single class.
"""


class ParameterError(ValueError):
    """A scalar argument (grid bounds, horizon, exponent range) is out of range."""


class MediumBoundsError(ValueError):
    """An impedance sample fell outside the medium's admissible (c, C) band."""


class WeightRangeError(ValueError):
    """A reflection weight left the open interval (-1, 1)."""


class AlignmentError(ValueError):
    """Dirac atoms must sit exactly on extended-grid nodes; one did not."""


class StructureError(ValueError):
    """Array lengths are inconsistent (state vs weights vs boundaries)."""


class RefinementError(ValueError):
    """Scale separation needs at least three compatible refinement levels."""


class DenseLimitError(ValueError):
    """Matrix too large for the dense eigensolver path."""
