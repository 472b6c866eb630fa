"""Static single-cell link model: UMa NLOS pathloss, per-user SINR, CQI link
adaptation and transport-block error draws.

The channel is frozen at scenario setup (no fading, no mobility): each user gets
one pathloss + shadowing realisation, hence one SINR, CQI and per-RB rate for
the whole run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import seeds
from .errors import ConfigError

# 15-entry link adaptation tables (CQI 1..15).  Spectral efficiencies are the
# standard NR 256QAM CQI table; SINR thresholds are a fixed monotone ladder,
# 2 dB spacing from -6 dB, tuned for a 1% BLER operating point.  CQI 0 = out of
# range, zero rate.
CQI_EFFICIENCY = (
    0.1523, 0.3770, 0.8770, 1.4766, 1.9141, 2.4063, 2.7305, 3.3223,
    3.9023, 4.5234, 5.1152, 5.5547, 6.2266, 6.9141, 7.4063,
)
CQI_SINR_THRESHOLDS_DB = (
    -6.0, -4.0, -2.0, 0.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0, 18.0, 20.0, 22.0,
)

SUBCARRIERS_PER_RB = 12
SYMBOLS_PER_SLOT = 14
THERMAL_NOISE_DBM_HZ = -174.0

_MIN_PATHLOSS_DISTANCE_M = 10.0


@dataclass(frozen=True)
class RadioConfig:
    carrier_ghz: float = 2.4
    bandwidth_mhz: float = 100.0
    numerology_index: int = 2
    num_rbs: int = 135
    bs_power_dbm: float = 44.0
    bs_height_m: float = 25.0
    ue_height_m: float = 1.5
    ue_noise_figure_db: float = 7.0
    target_bler: float = 0.01
    shadowing_std_db: float = 6.0
    overhead_frac: float = 0.14

    @property
    def scs_hz(self) -> float:
        return 15e3 * 2**self.numerology_index

    @property
    def slot_ms(self) -> float:
        return 1.0 / 2**self.numerology_index

    def validate(self, path: str = "radio") -> list[str]:
        bad = []
        if self.carrier_ghz <= 0:
            bad.append(f"{path}.carrier_ghz: must be positive")
        if self.numerology_index < 0 or self.numerology_index > 4:
            bad.append(f"{path}.numerology_index: must be in 0..4")
        if self.num_rbs <= 0:
            bad.append(f"{path}.num_rbs: must be positive")
        elif self.num_rbs * SUBCARRIERS_PER_RB * self.scs_hz > self.bandwidth_mhz * 1e6:
            bad.append(f"{path}.num_rbs: {self.num_rbs} RBs exceed bandwidth_mhz")
        if not 0 < self.target_bler < 1 and self.target_bler not in (0.0, 1.0):
            bad.append(f"{path}.target_bler: must be in [0, 1]")
        if self.shadowing_std_db < 0:
            bad.append(f"{path}.shadowing_std_db: must be nonnegative")
        if not 0 <= self.overhead_frac < 1:
            bad.append(f"{path}.overhead_frac: must be in [0, 1)")
        return bad


@dataclass(frozen=True)
class LinkState:
    """Per-user radio state, immutable for the whole run."""

    user_id: int
    distance_3d_m: float
    pathloss_db: float
    shadowing_db: float
    sinr_db: float
    cqi: int
    bits_per_rb_slot: int


def pathloss_uma_nlos(
    distance_3d_m: float,
    carrier_ghz: float,
    ue_height_m: float,
    bs_height_m: float = 25.0,
) -> float:
    """UMa NLOS pathloss in dB (urban-macro closed form, NLOS branch).

    NLOS term: 13.54 + 39.08 log10(d3D) + 20 log10(fc_GHz) - 0.6 (h_UE - 1.5),
    lower-bounded by the LOS dual-slope curve with breakpoint
    4 (h_BS - 1)(h_UE - 1) fc / c.  Distances below 10 m are clamped to the
    model validity floor.
    """
    if distance_3d_m <= 0:
        raise ConfigError(f"distance must be positive, got {distance_3d_m}")
    d3d = max(distance_3d_m, _MIN_PATHLOSS_DISTANCE_M)
    log_fc = math.log10(carrier_ghz)

    dh = bs_height_m - ue_height_m
    d2d_sq = max(d3d * d3d - dh * dh, 0.0)
    d_break = 4.0 * (bs_height_m - 1.0) * (ue_height_m - 1.0) * carrier_ghz * 1e9 / 3e8
    if d2d_sq <= d_break * d_break:
        pl_los = 28.0 + 22.0 * math.log10(d3d) + 20.0 * log_fc
    else:
        pl_los = (
            28.0 + 40.0 * math.log10(d3d) + 20.0 * log_fc
            - 9.0 * math.log10(d_break**2 + dh**2)
        )

    pl_nlos = 13.54 + 39.08 * math.log10(d3d) + 20.0 * log_fc - 0.6 * (ue_height_m - 1.5)
    return max(pl_los, pl_nlos)


def noise_dbm_per_rb(cfg: RadioConfig) -> float:
    return THERMAL_NOISE_DBM_HZ + cfg.ue_noise_figure_db + 10.0 * math.log10(
        SUBCARRIERS_PER_RB * cfg.scs_hz
    )


def sinr_for_user(
    cfg: RadioConfig,
    position: tuple[float, float],
    seed: int,
    user_id: int = 0,
    bs_position: tuple[float, float] = (0.0, 0.0),
) -> LinkState:
    """Freeze the user's link: distance -> pathloss (+shadowing) -> SINR -> CQI.

    Single cell, equal power per RB, no interference: SINR is per-RB transmit
    power minus pathloss, shadowing and per-RB noise.  Deterministic given the
    seed (the shadowing draw is keyed on it).
    """
    dx = position[0] - bs_position[0]
    dy = position[1] - bs_position[1]
    dh = cfg.bs_height_m - cfg.ue_height_m
    d3d = math.sqrt(dx * dx + dy * dy + dh * dh)
    pl = pathloss_uma_nlos(d3d, cfg.carrier_ghz, cfg.ue_height_m, cfg.bs_height_m)
    shadow = seeds.normal(0.0, cfg.shadowing_std_db, seeds.u01(seed, "shadowing", user_id))
    tx_per_rb = cfg.bs_power_dbm - 10.0 * math.log10(cfg.num_rbs)
    sinr = tx_per_rb - pl - shadow - noise_dbm_per_rb(cfg)
    cqi, rate = cqi_and_rate(sinr, cfg)
    return LinkState(
        user_id=user_id,
        distance_3d_m=d3d,
        pathloss_db=pl,
        shadowing_db=shadow,
        sinr_db=sinr,
        cqi=cqi,
        bits_per_rb_slot=rate,
    )


def cqi_and_rate(sinr_db: float, cfg: RadioConfig) -> tuple[int, int]:
    """Highest CQI whose threshold is <= sinr_db, and its bits per RB per slot.

    bits = floor(efficiency * 12 subcarriers * 14 symbols * (1 - overhead)).
    CQI 0 (below the lowest threshold) transmits nothing.
    """
    if not math.isfinite(sinr_db):
        raise ConfigError(f"sinr_db must be finite, got {sinr_db}")
    cqi = 0
    for i, thr in enumerate(CQI_SINR_THRESHOLDS_DB):
        if sinr_db >= thr:
            cqi = i + 1
        else:
            break
    if cqi == 0:
        return 0, 0
    eff = CQI_EFFICIENCY[cqi - 1]
    bits = int(eff * SUBCARRIERS_PER_RB * SYMBOLS_PER_SLOT * (1.0 - cfg.overhead_frac))
    return cqi, bits


def tb_success(u: float, cfg: RadioConfig) -> bool:
    """One transport-block outcome: fails with probability target_bler.

    `u` is a uniform in [0, 1); independence across blocks comes from keying
    each block's draw on (user, slot).
    """
    return u >= cfg.target_bler


def link_adaptation_tables(cfg: RadioConfig | None = None) -> dict:
    """Dump the CQI tables (for the audit CLI/endpoint)."""
    cfg = cfg or RadioConfig()
    rows = []
    for i in range(15):
        eff = CQI_EFFICIENCY[i]
        rows.append(
            {
                "cqi": i + 1,
                "sinr_threshold_db": CQI_SINR_THRESHOLDS_DB[i],
                "efficiency_bits_per_symbol": eff,
                "bits_per_rb_slot": int(
                    eff * SUBCARRIERS_PER_RB * SYMBOLS_PER_SLOT * (1.0 - cfg.overhead_frac)
                ),
            }
        )
    return {"overhead_frac": cfg.overhead_frac, "entries": rows}
