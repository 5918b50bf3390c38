"""Exception hierarchy shared by every module."""


class MathieuLabError(Exception):
    """Base class for all library errors."""


class PartsMismatch(MathieuLabError, ValueError):
    pass


class NotCoprime(MathieuLabError, ValueError):
    pass


class NotPrime(MathieuLabError, ValueError):
    pass


class SearchCapExceeded(MathieuLabError, RuntimeError):
    pass


class RingMismatch(MathieuLabError, TypeError):
    pass


class PolynomialSyntaxError(MathieuLabError, ValueError):
    """Raised by the polynomial parser; ``pos`` is the 0-based offending column."""

    def __init__(self, message, text="", pos=0):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos}")


class NotDiagonal(MathieuLabError, ValueError):
    pass


class TermBudgetExceeded(MathieuLabError, RuntimeError):
    pass


class ZeroPolynomial(MathieuLabError, ValueError):
    pass


class PreconditionFailed(MathieuLabError, ValueError):
    pass


class DegreeBound(MathieuLabError, ValueError):
    pass


class NotASyzygy(MathieuLabError, ValueError):
    pass


class MembershipUnknown(MathieuLabError, RuntimeError):
    pass


class DecompositionFailed(MathieuLabError, RuntimeError):
    pass


class ConsistencyError(MathieuLabError, AssertionError):
    """Two independent computations that must agree did not."""


class SpecInvalid(MathieuLabError, ValueError):
    pass
