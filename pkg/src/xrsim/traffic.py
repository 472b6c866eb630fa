"""Pseudo-periodic XR downlink traffic: periodic frames, truncated-Gaussian
sizes, truncated-Gaussian arrival jitter (REL-17 style evaluation model)."""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import seeds
from .errors import ConfigError

# label tags for the counter-based draws
_TAG_SIZE = "frame-size"
_TAG_JITTER = "frame-jitter"
_TAG_EPOCH = "epoch"


@dataclass(frozen=True)
class TrafficProfile:
    """Per-user traffic parameters.  Mean frame size is data_rate / frame_rate."""

    frame_rate_fps: float = 60.0
    data_rate_bps: float = 30e6
    size_std_frac: float = 0.105
    size_trunc_frac: float = 0.5
    jitter_std_ms: float = 2.0
    jitter_trunc_ms: float = 4.0

    @property
    def frame_period_ms(self) -> float:
        return 1000.0 / self.frame_rate_fps

    @property
    def mean_frame_bits(self) -> float:
        return self.data_rate_bps / self.frame_rate_fps

    def validate(self, path: str = "traffic") -> list[str]:
        bad = []
        if self.frame_rate_fps <= 0:
            bad.append(f"{path}.frame_rate_fps: must be positive")
        if self.data_rate_bps <= 0:
            bad.append(f"{path}.data_rate_bps: must be positive")
        if not 0 <= self.size_std_frac < 1:
            bad.append(f"{path}.size_std_frac: must be in [0, 1)")
        if not 0 < self.size_trunc_frac <= 1:
            bad.append(f"{path}.size_trunc_frac: must be in (0, 1]")
        if self.jitter_std_ms < 0:
            bad.append(f"{path}.jitter_std_ms: must be nonnegative")
        if self.jitter_trunc_ms < 0:
            bad.append(f"{path}.jitter_trunc_ms: must be nonnegative")
        return bad


@dataclass
class XrFrame:
    """One application-layer video frame as seen at the edge node.

    gen_time is the nominal generation instant (epoch + frame_idx * period);
    edge_arrival_time adds the upstream transport/encoding jitter.  A predicted
    frame carries the true future frame's size and timing with is_predicted set
    and effective_horizon > 0.
    """

    user_id: int
    frame_idx: int
    gen_time: float
    edge_arrival_time: float
    size_bits: int
    display_deadline: float
    is_predicted: bool = False
    effective_horizon: int = 0


def sample_truncated_gaussian(mean: float, std: float, lo: float, hi: float, u: float) -> float:
    """Draw from Gaussian(mean, std) conditioned on [lo, hi].

    `u` is a uniform in [0, 1) supplied by the caller (see seeds.u01); the
    sample is its deterministic inverse-CDF image.
    """
    return seeds.truncated_gaussian(mean, std, lo, hi, u)


def generate_stream(
    profile: TrafficProfile,
    user_id: int,
    duration_ms: float,
    seed: int,
    *,
    delay_bound_ms: float = 2.5,
    randomize_epoch: bool = True,
    epoch_shift_ms: float = 0.0,
    clamp_negative_jitter: bool = True,
    start_frame_idx: int = 0,
) -> list[XrFrame]:
    """Generate the user's frame sequence for one run, in frame_idx order.

    Frames are placed at epoch + i * period for i in [start_frame_idx,
    floor(duration * rate)); sizes and jitters are i.i.d. truncated Gaussians
    drawn from per-frame counters, so the sequence is a pure function of the
    arguments.  With clamp_negative_jitter a frame never reaches the edge
    before its generation instant.
    """
    if duration_ms <= 0:
        raise ConfigError(f"duration_ms must be positive, got {duration_ms}")
    bad = profile.validate()
    if bad:
        raise ConfigError("; ".join(bad))

    period = profile.frame_period_ms
    mean_bits = profile.mean_frame_bits
    size_std = mean_bits * profile.size_std_frac
    size_lo = mean_bits * (1.0 - profile.size_trunc_frac)
    size_hi = mean_bits * (1.0 + profile.size_trunc_frac)
    # integer sizes must stay inside the real truncation interval
    lo_bits = max(1, math.ceil(size_lo))
    hi_bits = max(lo_bits, math.floor(size_hi))
    j_std = profile.jitter_std_ms
    j_trunc = profile.jitter_trunc_ms

    stream = seeds.mix64(seed, "traffic", user_id)
    epoch = epoch_shift_ms
    if randomize_epoch:
        epoch += seeds.u01(stream, _TAG_EPOCH) * period

    n_frames = int(duration_ms * profile.frame_rate_fps / 1000.0)
    frames = []
    for i in range(start_frame_idx, n_frames):
        gen = epoch + i * period
        size = sample_truncated_gaussian(
            mean_bits, size_std, size_lo, size_hi, seeds.u01(stream, _TAG_SIZE, i)
        )
        jitter = sample_truncated_gaussian(
            0.0, j_std, -j_trunc, j_trunc, seeds.u01(stream, _TAG_JITTER, i)
        )
        delay = max(0.0, jitter) if clamp_negative_jitter else jitter
        frames.append(
            XrFrame(
                user_id=user_id,
                frame_idx=i,
                gen_time=gen,
                edge_arrival_time=gen + delay,
                size_bits=min(hi_bits, max(lo_bits, round(size))),
                display_deadline=gen + delay_bound_ms,
            )
        )
    return frames
