"""Exception types shared across the package."""


class FracjumpError(Exception):
    """Base class for all package-specific errors."""


class ModulusMismatchError(FracjumpError):
    """Two field elements from different prime fields were combined."""


class ParameterRangeError(FracjumpError):
    """A parameter lies outside the range an operation supports."""


class ResourceLimitError(FracjumpError):
    """An exhaustive computation would exceed its enumeration guard."""


class NonPrimitiveError(FracjumpError):
    """A generator was requested for a matrix whose characteristic
    polynomial is not projectively primitive.

    Carries the offending polynomial as ``char_poly``.
    """

    def __init__(self, char_poly, message=None):
        self.char_poly = char_poly
        super().__init__(message or f"characteristic polynomial {char_poly} is not projectively primitive")


class SearchExhaustedError(FracjumpError):
    """A bounded search ran out of candidates without finding a hit."""


class InternalInconsistencyError(FracjumpError):
    """A certificate and a brute-force oracle disagreed (must never happen)."""
