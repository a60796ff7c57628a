"""Exception types shared across the package."""


class CropguardError(Exception):
    """Base class for all package-specific errors."""


class DomainError(CropguardError, ValueError):
    """Raised when an input is outside the mathematical domain of an
    operation: non-finite numbers, negative quantities that must be
    non-negative, or parameter combinations that violate the model's
    standing assumptions."""


class DegenerateParameterError(CropguardError, ValueError):
    """Raised when a formula's denominator is too close to zero for the
    requested quantity to be meaningful (for example a vanishing pest
    conversion margin, or zero natural death rate in a long-run bound)."""


class GridMismatchError(CropguardError, ValueError):
    """Raised when arrays that must share a time grid have inconsistent
    lengths or incompatible grids."""


class BlowUpError(CropguardError, RuntimeError):
    """Raised when a trajectory leaves the representable range (non-finite
    state) during integration.  Carries the time at which it happened."""

    def __init__(self, t: float, message: str | None = None):
        self.t = t
        super().__init__(message or f"state became non-finite at t = {t:.6g}")
