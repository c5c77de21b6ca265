"""Exception hierarchy shared by the library and the command line."""


class RZetaError(Exception):
    """Base class for all library errors."""


class DigitSpecError(RZetaError, ValueError):
    """Malformed or inadmissible digit specification."""


class DomainError(RZetaError, ValueError):
    """Parameter lies outside the half-plane of convergence."""


class BoundaryError(DomainError):
    """Parameter lies exactly on the abscissa of convergence."""


class UnsupportedConfiguration(RZetaError, ValueError):
    """Requested level/digit combination has no geometrically convergent series."""


class PrecisionError(RZetaError, ArithmeticError):
    """Working precision or term budget cannot deliver the requested accuracy."""
