"""Exception types raised by the library."""


class HermiteSobolevError(Exception):
    pass


class DomainError(HermiteSobolevError, ValueError):
    """Argument outside the domain where a formula is defined (e.g. x = 0 in a quotient)."""


class UnsupportedCase(HermiteSobolevError, ValueError):
    """No closed form is implemented for this index pattern."""


class UncoveredCase(HermiteSobolevError, ValueError):
    """The requested family has no known limit function."""


class PrecisionMismatch(HermiteSobolevError, ValueError):
    pass


class PrecisionInsufficient(HermiteSobolevError, ArithmeticError):
    """A factorization pivot collapsed even at the precision ceiling."""


class BracketError(HermiteSobolevError, ArithmeticError):
    """A root search could not bracket a sign change within its budget."""


class CertificationError(HermiteSobolevError, ArithmeticError):
    """The number of located zeros disagrees with the certified count."""


class InternalConsistencyError(HermiteSobolevError, ArithmeticError):
    pass
