"""Exception types shared across the package."""


class PolarincError(Exception):
    """Base class for every error raised by this package."""


class ConfigurationError(PolarincError, ValueError):
    """An invalid field, form or run configuration."""


class FieldSpecError(ConfigurationError):
    pass


class NotPrime(FieldSpecError):
    pass


class EvenCharacteristic(FieldSpecError):
    pass


class DivisionByZero(PolarincError, ZeroDivisionError):
    pass


class DegenerateForm(ConfigurationError):
    pass


class SamePoint(PolarincError, ValueError):
    pass


class DimensionMismatch(PolarincError, ValueError):
    pass


class NotSquare(DimensionMismatch):
    pass


class IndexOutOfBounds(PolarincError, IndexError):
    pass


class BitMatrixFormatError(PolarincError, ValueError):
    """A BITMAT stream could not be decoded."""


class MalformedHeader(BitMatrixFormatError):
    pass


class TruncatedPayload(BitMatrixFormatError):
    pass
