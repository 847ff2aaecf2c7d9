"""Exception types shared across the package."""


class ConfradError(Exception):
    """Base class for package-specific failures."""


class DomainError(ConfradError, ValueError):
    """Input lies outside the mathematical domain of an operation."""


class BracketError(ConfradError, ValueError):
    """Root bracket does not enclose a sign change."""


class NumericError(ConfradError, ArithmeticError):
    """A non-finite value appeared during iteration."""


class ConfigurationError(ConfradError, ValueError):
    """Invalid system of marked points and domains."""


class SamplingError(ConfradError, RuntimeError):
    """Rejection sampling exhausted its attempt budget."""


class GeometryError(ConfradError, ValueError):
    """Boundary construction failed (clipping, component selection)."""


class PoleError(DomainError):
    """Evaluation requested at a pole of the differential."""


class StructureError(ConfradError, RuntimeError):
    """Critical-graph assembly failed.

    Carries whatever polylines were traced so far in ``diagnostics``.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or []


class NonConvergenceError(ConfradError, RuntimeError):
    """A random walk exceeded its hard step cap."""
