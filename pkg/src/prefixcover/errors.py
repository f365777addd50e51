"""Exception hierarchy shared by every module of the package."""


class PCDError(Exception):
    """Base class for all errors raised by prefixcover."""


class StructuralError(PCDError):
    """A design violates a structural invariant (range, duplicates, shape)."""


class UnknownElement(PCDError):
    pass


class Uncoverable(PCDError):
    pass


class InvalidInput(PCDError):
    """An operation received a design that fails verification."""


class ValueOverflow(PCDError):
    """A derived integer does not fit into 63 bits."""


class IndivisibleUniverse(PCDError):
    pass


class NotPrime(PCDError):
    pass


class UnsupportedDimension(PCDError):
    pass


class ShapeTooLarge(PCDError):
    pass


class ModelInconsistent(PCDError):
    pass


class LayoutMismatch(PCDError):
    pass


class EncoderBug(PCDError):
    """A decoded solver model failed verification; the encoding is wrong."""


class SolverError(PCDError):
    pass


class DigitOutOfRange(PCDError):
    pass


class KMismatch(PCDError):
    pass


class AlphaOverflow(PCDError):
    pass


class TooLarge(PCDError):
    """A brute-force oracle was asked to exceed its desk-scale guard."""


class FormatError(PCDError):
    """A text file could not be parsed."""
