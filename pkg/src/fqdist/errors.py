"""Exception and warning types shared across the package."""


class FqdistError(Exception):
    """Base class for all errors raised by this package."""


class CompositeModulus(FqdistError):
    """The requested modulus is not a prime number."""


class OrderDoesNotDivide(FqdistError):
    """The requested character order does not divide q - 1."""


class DimensionMismatch(FqdistError):
    """An array or point does not match the declared (q, d) domain."""


class SizeTooLarge(FqdistError):
    """A requested subset size exceeds the number of available points."""


class AmbientMismatch(FqdistError):
    """Two point sets do not live in the same (q, d) ambient space."""


class EmptySet(FqdistError):
    """An operation that needs a nonempty point set received an empty one."""


class ZeroRadius(FqdistError):
    """The radius j = 0 is outside the supported range of this operation."""


class ZeroFrequency(FqdistError):
    """The frequency vector m = 0 is outside the supported range."""


class ZeroCoefficient(FqdistError):
    """The coefficient t = 0 is outside the supported range."""


class HypothesisViolated(FqdistError):
    """A precondition of the verified estimate does not hold."""


class DimensionTooLarge(FqdistError):
    """A fold count or dimension exceeds the supported ceiling."""


class InvalidConfig(FqdistError):
    """A suite configuration field has an invalid value."""


class TrivialCharacter(UserWarning):
    """Warning issued when a degenerate (trivial) character is used."""
