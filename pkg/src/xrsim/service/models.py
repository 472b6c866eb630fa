"""Pydantic request/response models for the HTTP service.

These mirror the engine's scenario schema at the service boundary; unknown
fields are rejected so config typos surface as 422s naming the bad key.
"""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ErrorModelModel(_Strict):
    one_step_mse: float = 0.018
    growth: str = "linear"
    exponent: float = 1.0


class TrafficModel(_Strict):
    frame_rate_fps: float = 60.0
    data_rate_bps: float = 30e6
    size_std_frac: float = 0.105
    size_trunc_frac: float = 0.5
    jitter_std_ms: float = 2.0
    jitter_trunc_ms: float = 4.0
    clamp_negative_jitter: bool = True
    randomize_epoch: bool = True
    epoch_shift_ms: float = 0.0
    start_frame_idx: int = 0


class RadioModel(_Strict):
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


class SchedulerModel(_Strict):
    policy: str = "PF"
    pf_beta: float = 0.01
    drr_quantum_bits: int | None = None
    harq_rtt_slots: int = 4
    max_harq_attempts: int = 4
    queue_capacity_frames: float = 16.0


class EdgeModel(_Strict):
    prediction_interval: int = 0
    delay_bound_ms: float = 2.5
    playout_delay_ms: float | None = None
    error_model: ErrorModelModel = Field(default_factory=ErrorModelModel)
    transmit_cold_start: bool = True
    mse_over_predicted_only: bool = False


class UsersModel(_Strict):
    count: int = 1
    positions: list[list[float]] | None = None


class MetricsModel(_Strict):
    reliability_target: float = 0.99
    end_margin_ms: float | None = None
    sinr_bin_db: float = 2.0


class SweepModel(_Strict):
    num_users: list[int] = Field(default_factory=list)
    prediction_interval: list[int] = Field(default_factory=list)
    policy: list[str] = Field(default_factory=list)
    runs_per_point: int = 100
    workers: int | None = None


class ScenarioModel(_Strict):
    duration_ms: float = 10000.0
    warmup_ms: float = 1000.0
    seed: int = 1
    area_m: float = 250.0
    radio: RadioModel = Field(default_factory=RadioModel)
    scheduler: SchedulerModel = Field(default_factory=SchedulerModel)
    traffic: TrafficModel = Field(default_factory=TrafficModel)
    edge: EdgeModel = Field(default_factory=EdgeModel)
    users: UsersModel = Field(default_factory=UsersModel)
    metrics: MetricsModel = Field(default_factory=MetricsModel)
    sweep: SweepModel = Field(default_factory=SweepModel)

    def to_config(self) -> dict:
        return self.model_dump()


class ValidateRequest(_Strict):
    scenario: ScenarioModel = Field(default_factory=ScenarioModel)


class ValidateResponse(_Strict):
    violations: list[str]


class RunRequest(_Strict):
    scenario: ScenarioModel = Field(default_factory=ScenarioModel)
    out_dir: str | None = None  # server-side bundle directory; None = no files


class RunResponse(_Strict):
    summary: dict
    out_dir: str | None = None
    files: dict[str, int] | None = None


class SweepRequest(_Strict):
    scenario: ScenarioModel = Field(default_factory=ScenarioModel)
    out_dir: str | None = None
    workers: int | None = None
    wait: bool = False  # run inline instead of returning a polling job


class SweepSummary(_Strict):
    axes: dict
    total_runs: int
    failed_runs: int
    points: list[dict]
    out_dir: str | None = None
    files: dict[str, int] | None = None


class JobStatus(_Strict):
    job_id: str
    state: str  # queued | running | done | failed
    done: int = 0
    total: int = 0
    error: str | None = None
    result: SweepSummary | None = None


class CrossoverRequest(_Strict):
    points: list[dict] | None = None  # sweep point rows (inline)
    sweep_path: str | None = None  # or a server-side sweep(.csv)/sweep_points.csv
    thresholds: list[float] = Field(default_factory=lambda: [0.02, 0.035, 0.04])
    out_dir: str | None = None


class CrossoverResponse(_Strict):
    thresholds: list[float]
    policies: dict[str, dict]
    out_dir: str | None = None
