"""xrsim: single-cell 5G NR downlink simulator for XR service provisioning studies."""

__version__ = "0.1.0"

from .errors import ConfigError, InternalError

__all__ = ["ConfigError", "InternalError", "__version__"]
