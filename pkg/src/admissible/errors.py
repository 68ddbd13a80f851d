"""Exception hierarchy.

Resource-cap errors map to CLI exit status 3, everything else raised while
checking a mathematical condition maps to exit status 1.
"""


class AdmissibleError(Exception):
    """Base class for all errors raised by this package."""


class ResourceCapError(AdmissibleError):
    """An enumeration or encoding budget was exhausted."""


class BallTooLargeError(ResourceCapError):
    def __init__(self, radius_reached, size, cap):
        self.radius_reached = radius_reached
        self.size = size
        self.cap = cap
        super().__init__(
            f"ball too large: {size} elements exceed the cap of {cap} "
            f"at radius {radius_reached}"
        )


class LengthCapError(ResourceCapError):
    def __init__(self, element, cap):
        self.element = element
        self.cap = cap
        super().__init__(f"length exceeds cap: {element!r} is not within word length {cap}")


class EncodingRangeError(ResourceCapError):
    """A coordinate left the range representable by the int64 element keys."""


class WeightOverflowError(AdmissibleError, OverflowError):
    pass


class NonConvergentError(AdmissibleError):
    def __init__(self, condition, message):
        self.condition = condition
        super().__init__(message)


class HypothesisError(AdmissibleError, ValueError):
    """Parameters fall outside the regime s > d/p' required by the exponent formulas."""


class GridTooCoarseError(AdmissibleError):
    def __init__(self, message, t_values=()):
        self.t_values = tuple(t_values)
        super().__init__(message)


class InsufficientRangeError(AdmissibleError, ValueError):
    pass
