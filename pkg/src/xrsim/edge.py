"""Edge-node logic: dejitter (play-off) buffering, the predictor buffer with
original-replaces-placeholder semantics, and emission of frames to the MAC.

With a prediction interval p >= 1, receipt (release) of frame i emits the
*predicted* frame i+p to the MAC.  The predicted frame carries the true future
frame's size and display deadline, so the scheduler gains p frame periods of
slack per frame while the display timeline is untouched.  When frame i fails to
reach the edge within p*period + bound of its generation, a placeholder enters
the predictor buffer instead and the prediction for i+p extrapolates further
(larger effective horizon, larger modeled error).  A later original replaces
the placeholder and never reverts.

The first p frames of a session have no earlier frame to be predicted from;
they are forwarded as originals (cold start) and flagged so metrics can exclude
them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConfigError, InternalError
from .traffic import XrFrame

_PRUNE_SPAN = 128  # predictor-buffer entries kept behind the newest index


@dataclass(frozen=True)
class ErrorModel:
    """Parametric stand-in for a learned frame predictor.

    one_step_mse is the error of a one-frame extrapolation from fully original
    inputs; the error grows linearly or as a power of the effective horizon.
    """

    one_step_mse: float = 0.018
    growth: str = "linear"
    exponent: float = 1.0

    def mse(self, horizon: int) -> float:
        if horizon <= 0:
            return 0.0
        if self.growth == "linear":
            return self.one_step_mse * horizon
        return self.one_step_mse * horizon**self.exponent

    def validate(self, path: str = "edge.error_model") -> list[str]:
        bad = []
        if self.one_step_mse < 0:
            bad.append(f"{path}.one_step_mse: must be nonnegative")
        if self.growth not in ("linear", "power"):
            bad.append(f"{path}.growth: must be 'linear' or 'power'")
        if self.exponent < 1:
            bad.append(f"{path}.exponent: must be >= 1")
        return bad


@dataclass(frozen=True)
class PredictionRecord:
    target_idx: int
    effective_horizon: int
    mse: float


@dataclass
class EdgeUserState:
    """Per-user edge state (single-writer: the engine's event loop)."""

    user_id: int
    prediction_interval: int
    frame_period_ms: float
    delay_bound_ms: float
    playout_delay_ms: float
    error_model: ErrorModel
    frames: list[XrFrame] = field(default_factory=list)  # true frames, idx order
    first_frame_idx: int = 0
    transmit_cold_start: bool = True
    # predictor buffer: frame_idx -> is_predicted (False = original stored)
    predictor_buffer: dict[int, bool] = field(default_factory=dict)
    next_expected_idx: int = 0
    last_stored_idx: int = -1
    highest_emitted_idx: int = -1
    emitted: set[int] = field(default_factory=set)
    triggered: set[int] = field(default_factory=set)
    last_event_ms: float = float("-inf")

    @property
    def virtual_budget_ms(self) -> float:
        return effective_budget(
            self.prediction_interval, self.frame_period_ms, self.delay_bound_ms
        )

    def true_frame(self, idx: int) -> XrFrame | None:
        j = idx - self.first_frame_idx
        if 0 <= j < len(self.frames):
            return self.frames[j]
        return None

    def store(self, idx: int, predicted: bool) -> None:
        """Insert or upgrade a predictor-buffer entry; originals are final."""
        cur = self.predictor_buffer.get(idx)
        if cur is False:
            return
        self.predictor_buffer[idx] = predicted
        if idx > self.last_stored_idx:
            self.last_stored_idx = idx
        if len(self.predictor_buffer) > 2 * _PRUNE_SPAN:
            floor = self.last_stored_idx - _PRUNE_SPAN
            for k in [k for k in self.predictor_buffer if k < floor]:
                del self.predictor_buffer[k]
            self.triggered = {k for k in self.triggered if k >= floor}
            self.emitted = {k for k in self.emitted if k >= floor}

    def mark_emitted(self, idx: int) -> None:
        self.emitted.add(idx)
        if idx > self.highest_emitted_idx:
            self.highest_emitted_idx = idx

    def tail_placeholder_run(self) -> int:
        """Consecutive placeholder entries at the newest end of the buffer."""
        run = 0
        i = self.last_stored_idx
        while self.predictor_buffer.get(i) is True:
            run += 1
            i -= 1
        return run


def effective_budget(prediction_interval: int, frame_period_ms: float, delay_bound_ms: float) -> float:
    """Scheduling slack from content availability to display deadline (ms).

    Predicting `prediction_interval` frames ahead starts the downlink that many
    periods early, so the usable budget is interval * period + bound.
    """
    if prediction_interval < 0 or frame_period_ms < 0 or delay_bound_ms < 0:
        raise ConfigError("effective_budget arguments must be nonnegative")
    return prediction_interval * frame_period_ms + delay_bound_ms


def playoff_release(state: EdgeUserState, frame: XrFrame, now_ms: float | None = None) -> float:
    """Time at which the frame becomes visible to the predictor.

    The play-off buffer holds early frames until gen + playout_delay, restoring
    the periodic spacing the predictor expects; late frames pass through.
    """
    return max(frame.edge_arrival_time, frame.gen_time + state.playout_delay_ms)


def predict_frame(state: EdgeUserState, target: XrFrame) -> tuple[XrFrame, PredictionRecord]:
    """Materialise the predicted frame for `target` from the buffer state.

    The emitted frame reuses the true frame's size and timing (the predictor is
    idealised to timing-only gains); its effective horizon is the prediction
    interval plus the placeholder run at the buffer tail, and the modeled MSE
    follows the error model.
    """
    if target.frame_idx in state.emitted:
        raise InternalError(f"prediction target {target.frame_idx} already emitted")
    horizon = state.prediction_interval + state.tail_placeholder_run()
    record = PredictionRecord(
        target_idx=target.frame_idx,
        effective_horizon=horizon,
        mse=state.error_model.mse(horizon),
    )
    predicted = XrFrame(
        user_id=target.user_id,
        frame_idx=target.frame_idx,
        gen_time=target.gen_time,
        edge_arrival_time=target.edge_arrival_time,
        size_bits=target.size_bits,
        display_deadline=target.display_deadline,
        is_predicted=True,
        effective_horizon=horizon,
    )
    return predicted, record


def on_frame_event(
    state: EdgeUserState,
    kind: str,
    frame: XrFrame,
    now_ms: float,
) -> list[tuple[XrFrame, PredictionRecord | None, bool]]:
    """Handle one edge event for the user; returns frames to hand to the MAC.

    kind is "release" (original content available, at arrival or after the
    play-off hold) or "deadline" (the per-frame edge deadline expired without
    the original).  Each returned tuple is (frame, prediction record or None,
    cold_start flag).  Events must arrive in nondecreasing time order.
    """
    if now_ms < state.last_event_ms:
        raise InternalError(
            f"edge event out of order for user {state.user_id}: "
            f"{now_ms} < {state.last_event_ms}"
        )
    state.last_event_ms = now_ms
    if kind not in ("release", "deadline"):
        raise InternalError(f"unknown edge event kind {kind!r}")

    p = state.prediction_interval
    i = frame.frame_idx
    emissions: list[tuple[XrFrame, PredictionRecord | None, bool]] = []

    if p == 0:
        # degenerate mode: forward the original as-is on arrival
        state.store(i, predicted=False)
        if kind == "release" and i not in state.emitted:
            state.next_expected_idx = max(state.next_expected_idx, i + 1)
            state.mark_emitted(i)
            emissions.append((frame, None, False))
        return emissions

    if kind == "release":
        already = i in state.triggered
        state.store(i, predicted=False)
        if already:
            return emissions  # late original: replacement only, already triggered
    else:
        if i in state.triggered or state.predictor_buffer.get(i) is False:
            return emissions  # original made it in time
        state.store(i, predicted=True)

    state.triggered.add(i)
    state.next_expected_idx = max(state.next_expected_idx, i + 1)

    cold_start = i < state.first_frame_idx + p
    if cold_start and kind == "release" and state.transmit_cold_start and i not in state.emitted:
        state.mark_emitted(i)
        emissions.append((frame, None, True))

    target = state.true_frame(i + p)
    if target is not None and target.frame_idx not in state.emitted:
        predicted, record = predict_frame(state, target)
        state.mark_emitted(predicted.frame_idx)
        emissions.append((predicted, record, False))
    return emissions
