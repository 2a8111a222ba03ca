"""Exception types shared across the package."""


class ResourceLimitError(RuntimeError):
    """Raised when an operation would exceed a hard-coded memory/size guard."""


class NormDriftError(RuntimeError):
    """Raised when a state's norm drifts beyond tolerance (indicates a kernel bug)."""
