"""Exception types shared across the package."""


class QPulseError(Exception):
    """Base class for all package errors."""


class DimensionMismatchError(QPulseError, ValueError):
    """Operands act on Hilbert spaces of different dimension."""


class NotHermitianError(QPulseError, ValueError):
    """A matrix required to be Hermitian is not, beyond tolerance."""


class PositivityError(QPulseError, ValueError):
    """A density operator has a negative eigenvalue beyond tolerance."""


class SupportError(QPulseError, ValueError):
    """Relative entropy argument support condition violated."""


class UnsupportedConfigurationError(QPulseError, ValueError):
    """Operation not defined for this model layout (e.g. multi-bath sigma)."""


class IntegrationUnstableError(QPulseError, RuntimeError):
    """The integrator produced a non-physical state (positivity or NaN)."""


class ModelViolationError(QPulseError, RuntimeError):
    """A structural model guarantee (e.g. block-diagonality) was broken."""


class ConfigError(QPulseError, ValueError):
    """Scenario configuration failed validation."""
