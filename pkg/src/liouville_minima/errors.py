"""Exception types shared across the package.

The CLI maps these onto process exit codes: validation problems exit 2,
resource-budget problems exit 3.
"""


class ValidationError(ValueError):
    """Malformed chain spec, run config, or operation input."""


class ResourceBudgetError(RuntimeError):
    """An enumeration would exceed the configured budget; use witness mode."""


class AmbiguousRoundingError(ArithmeticError):
    """A nearest-integer test cannot be decided at the current truncation
    depth; retry with a larger depth."""

    def __init__(self, message: str, suggested_extra: int | None = None):
        super().__init__(message)
        self.suggested_extra = suggested_extra
