"""Exception types raised by the qjsd package."""


class QjsdError(Exception):
    """Base class for all qjsd errors."""


class DimMismatch(QjsdError):
    """Operands have incompatible dimensions."""


class NonConvergence(QjsdError):
    """The eigensolver failed to converge (pathological input)."""


class NotPositive(QjsdError):
    """A matrix expected to be positive semidefinite has an eigenvalue below -1e-10."""


class NotUnitary(QjsdError):
    """A matrix expected to be unitary is not, beyond tolerance."""


class NotHermitian(QjsdError):
    """A matrix deviates from its conjugate transpose beyond tolerance."""


class DomainError(QjsdError):
    """A scalar argument lies outside its admissible interval."""


class Undefined(QjsdError):
    """Kullback-Leibler divergence evaluated where the support condition fails."""


class SupportViolation(QjsdError):
    """Relative entropy S(rho, sigma) requested with support(rho) not inside support(sigma)."""


class RejectionBudgetExceeded(QjsdError):
    """The mixedness filter rejected too many consecutive draws."""


class DegenerateBlock(QjsdError):
    """A parameter block decodes to a matrix with vanishing trace."""


class EdgeMismatch(QjsdError):
    """Histograms with different bin edges cannot be merged."""


class InvalidConfig(QjsdError):
    """A run configuration violates a precondition."""


class ParseError(QjsdError):
    """A state file could not be parsed or fails validation."""
