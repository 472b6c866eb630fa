"""Counter-based deterministic random draws.

Every stochastic quantity in a run (frame sizes, jitter, epochs, positions,
shadowing, transport-block errors, sweep point seeds) is derived by hashing a
tuple of integer/string labels through splitmix64 instead of advancing a shared
stateful generator.  Draws are therefore a pure function of their labels: adding
or removing events elsewhere in a run never shifts them, and identical scenarios
reproduce bit-identically across platforms.

Truncated Gaussians use the inverse-CDF transform (uniform mapped through the
normal quantile function restricted to the truncation interval).
"""

from __future__ import annotations

import hashlib
from functools import lru_cache
from statistics import NormalDist

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_STD_NORMAL = NormalDist()

# open-interval guard for the quantile function
_U_LO = 2.0**-53
_U_HI = 1.0 - 2.0**-53


def splitmix64(x: int) -> int:
    """One splitmix64 finalizer step on a 64-bit value."""
    x = (x + _GOLDEN) & _MASK64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _MASK64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _MASK64
    x ^= x >> 31
    return x


@lru_cache(maxsize=None)
def _label_token(label: str) -> int:
    return int.from_bytes(hashlib.blake2b(label.encode(), digest_size=8).digest(), "big")


def mix64(*parts: int | str) -> int:
    """Fold integers and string labels into one well-mixed 64-bit value."""
    h = 0
    for p in parts:
        t = _label_token(p) if isinstance(p, str) else p & _MASK64
        h = splitmix64(h ^ t)
    return h


def u01(*parts: int | str) -> float:
    """Uniform draw in [0, 1) keyed by the given labels (53-bit resolution)."""
    return (mix64(*parts) >> 11) * 2.0**-53


def normal(mean: float, std: float, u: float) -> float:
    """Gaussian sample from a uniform via the quantile function."""
    if std == 0.0:
        return mean
    u = min(max(u, _U_LO), _U_HI)
    return mean + std * _STD_NORMAL.inv_cdf(u)


def truncated_gaussian(mean: float, std: float, lo: float, hi: float, u: float) -> float:
    """Gaussian(mean, std) conditioned on [lo, hi], sampled by inverse CDF.

    std == 0 degenerates to clamp(mean, lo, hi).  Raises ConfigError on an
    empty interval or a negative std.
    """
    from .errors import ConfigError

    if lo > hi:
        raise ConfigError(f"truncation interval empty: lo={lo} > hi={hi}")
    if std < 0:
        raise ConfigError(f"std must be nonnegative, got {std}")
    if std == 0.0 or lo == hi:
        return min(max(mean, lo), hi)
    p_lo = _STD_NORMAL.cdf((lo - mean) / std)
    p_hi = _STD_NORMAL.cdf((hi - mean) / std)
    if p_hi <= p_lo:  # interval far in a tail; all mass collapses to the near edge
        return lo if p_lo >= 0.5 else hi
    u = min(max(p_lo + u * (p_hi - p_lo), _U_LO), _U_HI)
    x = mean + std * _STD_NORMAL.inv_cdf(u)
    return min(max(x, lo), hi)
