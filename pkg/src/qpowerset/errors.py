"""Exception hierarchy.

Every error raised by the package derives from :class:`QPowerError`, which is
itself a ``ValueError`` so callers that only care about bad input can catch
that.
"""


class QPowerError(ValueError):
    pass


class InvalidModulus(QPowerError):
    """q is not an odd prime."""


class ZeroInverse(QPowerError):
    pass


class Singular(QPowerError):
    pass


class DimensionMismatch(QPowerError):
    pass


class ZeroVector(QPowerError):
    pass


class CapExceeded(QPowerError):
    pass


class EmptySet(QPowerError):
    pass


class NotBlocking(QPowerError):
    pass


class PointInSet(QPowerError):
    pass


class NotCoplanar(QPowerError):
    pass


class EqualPoints(QPowerError):
    pass


class ZeroInput(QPowerError):
    pass


class InputTooLarge(QPowerError):
    pass


class DividesInput(QPowerError):
    pass


class ZeroElement(QPowerError):
    pass


class PerfectPowerPresent(QPowerError):
    pass


class UnitElement(QPowerError):
    pass


class SinglePrimeSupport(QPowerError):
    pass


class ZeroExponent(QPowerError):
    pass


class LengthMismatch(QPowerError):
    pass


class WrongPrimeCount(QPowerError):
    pass


class UnsupportedK(QPowerError):
    pass


class UnsupportedQ(QPowerError):
    pass


class EqualPrimes(QPowerError):
    pass


class DuplicatePrimes(QPowerError):
    pass


class AmbientMismatch(QPowerError):
    pass
