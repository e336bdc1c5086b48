"""Exception hierarchy."""


class AFCError(Exception):
    """Base class for all errors raised by afcmemory."""


class ConfigurationError(AFCError, ValueError):
    """Invalid design, grid or run configuration."""


class DomainError(AFCError, ValueError):
    """An argument lies outside the domain an operation is defined on."""


class QuadratureError(AFCError, ArithmeticError):
    """Adaptive quadrature failed to converge within its refinement budget."""
