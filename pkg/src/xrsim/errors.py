class ConfigError(ValueError):
    """Raised for invalid configuration (bad profile, unknown policy, malformed scenario)."""


class InternalError(RuntimeError):
    """Raised when an engine invariant is violated (event order, RB conservation)."""
