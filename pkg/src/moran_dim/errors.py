"""Exception types shared across the package."""


class MoranDimError(Exception):
    """Base class for every error raised by moran_dim."""


class ConstraintViolation(MoranDimError, ValueError):
    """A parameter distribution breaks one of its invariants."""

    def __init__(self, field, atom_index, message):
        self.field = field
        self.atom_index = atom_index
        self.message = message
        where = f" (atom {atom_index})" if atom_index is not None else ""
        super().__init__(f"{field}{where}: {message}")


class DomainError(MoranDimError, ValueError):
    pass


class UnsupportedDistribution(MoranDimError, TypeError):
    pass


class NoSignChange(MoranDimError, ArithmeticError):
    pass


class WindowOutOfRange(MoranDimError, IndexError):
    pass


class TooLarge(MoranDimError, ValueError):
    pass


class InsufficientDepth(MoranDimError, ValueError):
    pass


class UnsupportedGeometry(MoranDimError, ValueError):
    pass
