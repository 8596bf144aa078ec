"""Exception hierarchy shared by every module."""


class QConvMulError(Exception):
    """Base class for errors raised by this package."""


class LengthError(QConvMulError, ValueError):
    """A digit vector or register is too short for the value it must hold."""


class PrecisionError(QConvMulError, ArithmeticError):
    """A floating-point residue was too large to round safely to an integer."""


class MemoryCapError(QConvMulError, MemoryError):
    """A dense statevector would exceed the configured amplitude budget."""


class ImpossibleBranchError(QConvMulError, ArithmeticError):
    """Postselection on a branch whose probability is numerically zero."""


class InsufficientShotsError(QConvMulError, RuntimeError):
    """A sampled run kept no shots after postselection."""


class NotClassicalError(QConvMulError, ValueError):
    """A circuit containing non-permutation gates was sent to the reversible backend."""
