"""Exception types shared across the package."""


class JgateError(ValueError):
    """Base class for all validation and domain errors raised by jgate."""


class NonFiniteEntryError(JgateError):
    """A matrix entry or scalar contains NaN or an infinity."""


class NotUnimodularError(JgateError):
    """Determinant of a proposed matrix is not 1 within tolerance."""

    def __init__(self, det, tol):
        self.det = det
        self.tol = tol
        super().__init__(f"determinant {det} differs from 1 by more than {tol}")


class IsIdentityError(JgateError):
    """The matrix is (plus or minus) the identity, so every point is fixed."""


class NotLoxodromicError(JgateError):
    """A loxodromic element was required."""


class ZeroLambdaError(JgateError):
    """The multiplier must be nonzero."""


class LambdaNotExpandingError(JgateError):
    """The multiplier must satisfy |lambda| > 1."""


class MgOutOfRangeError(JgateError):
    """The translation quantity M_g must lie strictly between 0 and 1."""

    def __init__(self, mg):
        self.mg = mg
        super().__init__(f"M_g = {mg} is outside the open interval (0, 1)")


class ParseError(JgateError):
    """An input document could not be parsed."""


class InvalidRangeError(JgateError):
    """A sampling configuration value is out of its admissible range."""
