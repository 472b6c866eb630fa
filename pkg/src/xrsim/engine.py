"""Deterministic discrete-event core.

One run is a single logical sequence: application events (frame arrivals at the
edge, play-off releases, edge deadlines) interleave with slot-synchronous MAC
scheduling every slot_ms.  All randomness is counter-based (see seeds), so a
report is a pure function of its Scenario; sweeps fan runs out across processes
with per-point derived seeds and fold results back in a fixed order.
"""

from __future__ import annotations

import dataclasses
import hashlib
import heapq
import json
import math
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field

from . import __version__, seeds
from .edge import EdgeUserState, ErrorModel, on_frame_event, playoff_release
from .errors import ConfigError, InternalError
from .metrics import (
    FrameRecord,
    UserKpi,
    build_user_kpis,
    delay_reliable_throughput,
    finalize_records,
    satisfied_users,
)
from .radio import LinkState, RadioConfig, sinr_for_user
from .sched import POLICIES, MacQueue, SchedulerConfig, SchedulerState, dl_schedule, transmit
from .traffic import TrafficProfile, generate_stream

_EV_ARRIVAL, _EV_RELEASE, _EV_DEADLINE = 0, 1, 2


@dataclass(frozen=True)
class EdgeConfig:
    prediction_interval: int = 0
    delay_bound_ms: float = 2.5
    playout_delay_ms: float | None = None  # None -> traffic jitter_trunc_ms
    error_model: ErrorModel = field(default_factory=ErrorModel)
    transmit_cold_start: bool = True
    mse_over_predicted_only: bool = False

    def validate(self, path: str = "edge") -> list[str]:
        bad = []
        if self.prediction_interval < 0:
            bad.append(f"{path}.prediction_interval: must be >= 0")
        if self.delay_bound_ms < 0:
            bad.append(f"{path}.delay_bound_ms: must be nonnegative")
        if self.playout_delay_ms is not None and self.playout_delay_ms < 0:
            bad.append(f"{path}.playout_delay_ms: must be nonnegative")
        bad.extend(self.error_model.validate(f"{path}.error_model"))
        return bad


@dataclass(frozen=True)
class UsersConfig:
    count: int = 1
    positions: tuple[tuple[float, float], ...] | None = None

    def validate(self, path: str = "users") -> list[str]:
        bad = []
        if self.count < 0:
            bad.append(f"{path}.count: must be >= 0")
        if self.positions is not None and len(self.positions) != self.count:
            bad.append(f"{path}.positions: need exactly {self.count} entries")
        return bad


@dataclass(frozen=True)
class MetricsConfig:
    reliability_target: float = 0.99
    end_margin_ms: float | None = None  # None -> budget + playout + 10 ms
    sinr_bin_db: float = 2.0

    def validate(self, path: str = "metrics") -> list[str]:
        bad = []
        if not 0 < self.reliability_target <= 1:
            bad.append(f"{path}.reliability_target: must be in (0, 1]")
        if self.end_margin_ms is not None and self.end_margin_ms < 0:
            bad.append(f"{path}.end_margin_ms: must be nonnegative")
        if self.sinr_bin_db <= 0:
            bad.append(f"{path}.sinr_bin_db: must be positive")
        return bad


@dataclass(frozen=True)
class SweepConfig:
    num_users: tuple[int, ...] = ()
    prediction_interval: tuple[int, ...] = ()
    policy: tuple[str, ...] = ()
    runs_per_point: int = 100  # evaluation-scale default; dial down for smoke runs
    workers: int | None = None

    def validate(self, path: str = "sweep") -> list[str]:
        bad = []
        if any(n < 0 for n in self.num_users):
            bad.append(f"{path}.num_users: entries must be >= 0")
        if any(p < 0 for p in self.prediction_interval):
            bad.append(f"{path}.prediction_interval: entries must be >= 0")
        for pol in self.policy:
            if pol not in POLICIES:
                bad.append(f"{path}.policy: unknown policy {pol!r}")
        if self.runs_per_point < 1:
            bad.append(f"{path}.runs_per_point: must be >= 1")
        if self.workers is not None and self.workers < 1:
            bad.append(f"{path}.workers: must be >= 1")
        return bad


@dataclass(frozen=True)
class Scenario:
    duration_ms: float = 10000.0
    warmup_ms: float = 1000.0
    seed: int = 1
    area_m: float = 250.0
    radio: RadioConfig = field(default_factory=RadioConfig)
    scheduler: SchedulerConfig = field(default_factory=SchedulerConfig)
    traffic: TrafficProfile = field(default_factory=TrafficProfile)
    clamp_negative_jitter: bool = True
    randomize_epoch: bool = True
    epoch_shift_ms: float = 0.0
    start_frame_idx: int = 0
    edge: EdgeConfig = field(default_factory=EdgeConfig)
    users: UsersConfig = field(default_factory=UsersConfig)
    metrics: MetricsConfig = field(default_factory=MetricsConfig)
    sweep: SweepConfig = field(default_factory=SweepConfig)

    @property
    def playout_delay_ms(self) -> float:
        if self.edge.playout_delay_ms is not None:
            return self.edge.playout_delay_ms
        return self.traffic.jitter_trunc_ms

    @property
    def virtual_budget_ms(self) -> float:
        return (
            self.edge.prediction_interval * self.traffic.frame_period_ms
            + self.edge.delay_bound_ms
        )

    @property
    def end_margin_ms(self) -> float:
        if self.metrics.end_margin_ms is not None:
            return self.metrics.end_margin_ms
        return self.virtual_budget_ms + self.playout_delay_ms + 10.0


# ---------------------------------------------------------------- scenario IO


_TRAFFIC_OPTION_KEYS = (
    "clamp_negative_jitter",
    "randomize_epoch",
    "epoch_shift_ms",
    "start_frame_idx",
)


def _from_section(cls, data: dict, path: str):
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a mapping, got {type(data).__name__}")
    names = {f.name for f in dataclasses.fields(cls)}
    for key in data:
        if key not in names:
            raise ConfigError(f"{path}.{key}: unknown key")
    try:
        return cls(**data)
    except TypeError as e:
        raise ConfigError(f"{path}: {e}") from e


def scenario_from_dict(data: dict) -> Scenario:
    """Build a Scenario from a nested plain-dict config.

    Unknown keys raise ConfigError naming the offending key path.
    """
    if not isinstance(data, dict):
        raise ConfigError("scenario: expected a mapping at top level")
    data = dict(data)
    top_known = {f.name for f in dataclasses.fields(Scenario)} - set(_TRAFFIC_OPTION_KEYS)
    for key in data:
        if key not in top_known:
            raise ConfigError(f"scenario.{key}: unknown key")

    kwargs: dict = {}
    for name in ("duration_ms", "warmup_ms", "seed", "area_m"):
        if name in data:
            kwargs[name] = data[name]

    if "radio" in data:
        kwargs["radio"] = _from_section(RadioConfig, data["radio"], "radio")
    if "scheduler" in data:
        kwargs["scheduler"] = _from_section(SchedulerConfig, data["scheduler"], "scheduler")

    if "traffic" in data:
        tsec = dict(data["traffic"])
        for opt in _TRAFFIC_OPTION_KEYS:
            if opt in tsec:
                kwargs[opt] = tsec.pop(opt)
        kwargs["traffic"] = _from_section(TrafficProfile, tsec, "traffic")

    if "edge" in data:
        esec = dict(data["edge"])
        if "error_model" in esec:
            esec["error_model"] = _from_section(
                ErrorModel, esec["error_model"], "edge.error_model"
            )
        kwargs["edge"] = _from_section(EdgeConfig, esec, "edge")

    if "users" in data:
        usec = dict(data["users"])
        if usec.get("positions") is not None:
            usec["positions"] = tuple((float(x), float(y)) for x, y in usec["positions"])
        kwargs["users"] = _from_section(UsersConfig, usec, "users")

    if "metrics" in data:
        kwargs["metrics"] = _from_section(MetricsConfig, data["metrics"], "metrics")

    if "sweep" in data:
        ssec = dict(data["sweep"])
        for axis in ("num_users", "prediction_interval"):
            if axis in ssec:
                ssec[axis] = tuple(int(v) for v in ssec[axis])
        if "policy" in ssec:
            ssec["policy"] = tuple(str(v) for v in ssec["policy"])
        kwargs["sweep"] = _from_section(SweepConfig, ssec, "sweep")

    return Scenario(**kwargs)


def scenario_to_dict(s: Scenario) -> dict:
    """Plain-dict echo of a Scenario (inverse of scenario_from_dict)."""
    d = dataclasses.asdict(s)
    traffic = d.pop("traffic")
    for opt in _TRAFFIC_OPTION_KEYS:
        traffic[opt] = d.pop(opt)
    d["traffic"] = traffic
    if d["users"]["positions"] is not None:
        d["users"]["positions"] = [list(p) for p in d["users"]["positions"]]
    for axis in ("num_users", "prediction_interval", "policy"):
        d["sweep"][axis] = list(d["sweep"][axis])
    return d


def apply_overrides(data: dict, overrides: list[str]) -> dict:
    """Apply dotted key=value overrides (values parsed as YAML scalars)."""
    import yaml

    out = json.loads(json.dumps(data))  # deep copy of plain data
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r}: expected key.path=value")
        key, raw = item.split("=", 1)
        parts = key.strip().split(".")
        if not all(parts):
            raise ConfigError(f"override {item!r}: empty key component")
        node = out
        for p in parts[:-1]:
            nxt = node.get(p)
            if nxt is None:
                nxt = node[p] = {}
            elif not isinstance(nxt, dict):
                raise ConfigError(f"override {item!r}: {p} is not a mapping")
            node = nxt
        node[parts[-1]] = yaml.safe_load(raw)
    return out


def validate(scenario: Scenario) -> list[str]:
    """Collect config violations; an empty list means the scenario is runnable."""
    bad: list[str] = []
    if scenario.duration_ms <= 0:
        bad.append("duration_ms: must be positive")
    if scenario.warmup_ms < 0:
        bad.append("warmup_ms: must be nonnegative")
    if scenario.duration_ms < scenario.warmup_ms + 1000.0:
        bad.append("duration_ms: must cover warmup_ms plus at least 1 s of measurement")
    if not isinstance(scenario.seed, int):
        bad.append("seed: must be an integer")
    if scenario.area_m <= 0:
        bad.append("area_m: must be positive")
    if scenario.epoch_shift_ms < 0:
        bad.append("traffic.epoch_shift_ms: must be nonnegative")
    if scenario.start_frame_idx < 0:
        bad.append("traffic.start_frame_idx: must be >= 0")
    bad.extend(scenario.radio.validate())
    bad.extend(scenario.scheduler.validate())
    bad.extend(scenario.traffic.validate())
    bad.extend(scenario.edge.validate())
    bad.extend(scenario.users.validate())
    bad.extend(scenario.metrics.validate())
    bad.extend(scenario.sweep.validate())
    return bad


# ---------------------------------------------------------------------- runs


@dataclass
class SimReport:
    scenario: dict
    links: list[LinkState]
    user_records: list[list[FrameRecord]]
    kpis: list[UserKpi]
    summary: dict

    @property
    def records(self) -> list[FrameRecord]:
        return [r for recs in self.user_records for r in recs]


def _user_position(scenario: Scenario, uid: int) -> tuple[float, float]:
    if scenario.users.positions is not None:
        return scenario.users.positions[uid]
    half = scenario.area_m / 2.0
    x = (seeds.u01(scenario.seed, "position", uid, 0) - 0.5) * scenario.area_m
    y = (seeds.u01(scenario.seed, "position", uid, 1) - 0.5) * scenario.area_m
    return (max(-half, min(half, x)), max(-half, min(half, y)))


def run(scenario: Scenario) -> SimReport:
    """Execute one scenario and return its full report.

    Raises ConfigError when validation fails; reports are bit-identical for
    identical scenarios.
    """
    problems = validate(scenario)
    if problems:
        raise ConfigError("; ".join(problems))

    rc = scenario.radio
    slot_ms = rc.slot_ms
    num_rbs = rc.num_rbs
    n_slots = math.ceil(scenario.duration_ms / slot_ms)
    n_users = scenario.users.count
    profile = scenario.traffic
    ecfg = scenario.edge
    pd = ecfg.prediction_interval
    playout = scenario.playout_delay_ms
    policy = scenario.scheduler.policy

    mean_bits = profile.mean_frame_bits
    quantum = scenario.scheduler.drr_quantum_bits or max(1, int(mean_bits / 8.0))
    capacity = max(1, int(scenario.scheduler.queue_capacity_frames * mean_bits))
    bler_stream = seeds.mix64(scenario.seed, "tb-error")

    links: list[LinkState] = []
    queues_list: list[MacQueue] = []
    queues: dict[int, MacQueue] = {}
    edge_states: list[EdgeUserState] = []
    frames_by_user = []
    user_records: list[list[FrameRecord]] = []
    state = SchedulerState.from_config(scenario.scheduler, quantum)

    for uid in range(n_users):
        link = sinr_for_user(rc, _user_position(scenario, uid), scenario.seed, uid)
        links.append(link)
        state.init_user(link)
        q = MacQueue(uid, capacity, link.bits_per_rb_slot)
        queues_list.append(q)
        queues[uid] = q
        frames = generate_stream(
            profile,
            uid,
            scenario.duration_ms,
            scenario.seed,
            delay_bound_ms=ecfg.delay_bound_ms,
            randomize_epoch=scenario.randomize_epoch,
            epoch_shift_ms=scenario.epoch_shift_ms,
            clamp_negative_jitter=scenario.clamp_negative_jitter,
            start_frame_idx=scenario.start_frame_idx,
        )
        frames_by_user.append(frames)
        user_records.append(
            [
                FrameRecord(
                    user_id=uid,
                    frame_idx=f.frame_idx,
                    gen_time=f.gen_time,
                    display_deadline=f.display_deadline,
                    size_bits=f.size_bits,
                )
                for f in frames
            ]
        )
        edge_states.append(
            EdgeUserState(
                user_id=uid,
                prediction_interval=pd,
                frame_period_ms=profile.frame_period_ms,
                delay_bound_ms=ecfg.delay_bound_ms,
                playout_delay_ms=playout,
                error_model=ecfg.error_model,
                frames=frames,
                first_frame_idx=scenario.start_frame_idx,
                transmit_cold_start=ecfg.transmit_cold_start,
            )
        )

    # application-layer events: (time, priority, seq, code, uid, local_idx)
    heap: list[tuple] = []
    seq = 0
    budget = scenario.virtual_budget_ms
    for uid, frames in enumerate(frames_by_user):
        for j, f in enumerate(frames):
            heap.append((f.edge_arrival_time, 0, seq, _EV_ARRIVAL, uid, j))
            seq += 1
            if pd >= 1:
                heap.append((f.gen_time + budget, 1, seq, _EV_DEADLINE, uid, j))
                seq += 1
    heapq.heapify(heap)

    user_ids = list(range(n_users))
    base_idx = scenario.start_frame_idx
    last_pop_t = float("-inf")
    busy_slots = 0
    max_rb_used = 0
    total_served_bits = 0
    pf_decay = 1.0 - scenario.scheduler.pf_beta
    is_pf = policy == "PF"

    slot = 0
    while slot < n_slots:
        t_slot = slot * slot_ms

        while heap and heap[0][0] <= t_slot:
            t, _prio, _s, code, uid, j = heapq.heappop(heap)
            if t < last_pop_t:
                raise InternalError(f"event time regression: {t} after {last_pop_t}")
            last_pop_t = t
            st = edge_states[uid]
            fr = frames_by_user[uid][j]
            if code == _EV_ARRIVAL and st.prediction_interval > 0:
                release = playoff_release(st, fr)
                if release > t:
                    heapq.heappush(heap, (release, 0, seq, _EV_RELEASE, uid, j))
                    seq += 1
                    continue
            kind = "deadline" if code == _EV_DEADLINE else "release"
            for xf, pred, cold in on_frame_event(st, kind, fr, t):
                rec = user_records[uid][xf.frame_idx - base_idx]
                rec.mac_available_time = t
                rec.is_predicted = xf.is_predicted
                rec.effective_horizon = xf.effective_horizon
                rec.content_mse = pred.mse if pred is not None else 0.0
                rec.cold_start = cold
                queues[uid].enqueue(rec)

        for q in queues_list:
            if q.parked:
                q.release_due(slot)

        has_work = False
        for q in queues_list:
            if q.eligible_bits > 0 and q.rate > 0:
                has_work = True
                break

        if not has_work:
            next_t = heap[0][0] if heap else None
            next_release = None
            for q in queues_list:
                if q.parked and (next_release is None or q.parked[0][0] < next_release):
                    next_release = q.parked[0][0]
            if next_t is None and next_release is None:
                break
            target = n_slots
            if next_t is not None:
                target = min(target, max(slot + 1, math.ceil(next_t / slot_ms)))
            if next_release is not None:
                target = min(target, max(slot + 1, next_release))
            if is_pf:
                decay = pf_decay ** (target - slot)
                avg = state.pf_avg_thr
                for uid in user_ids:
                    avg[uid] *= decay
            slot = target
            continue

        alloc = dl_schedule(slot, queues_list, None, state, num_rbs)
        used = alloc.total_rbs
        if used > num_rbs:
            raise InternalError(f"RB conservation violated in slot {slot}: {used} > {num_rbs}")
        if used > max_rb_used:
            max_rb_used = used
        busy_slots += 1
        _delivered, served = transmit(alloc, queues, state, rc, slot_ms, bler_stream)
        if is_pf:
            state.update_pf(user_ids, served)
        for bits in served.values():
            total_served_bits += bits
        slot += 1

    t_high = scenario.duration_ms - scenario.end_margin_ms
    finalize_records(user_records, pd, ecfg.error_model, scenario.warmup_ms, t_high)
    kpis = build_user_kpis(
        user_records,
        links,
        scenario.metrics.reliability_target,
        ecfg.mse_over_predicted_only,
    )

    measured = [r for recs in user_records for r in recs if r.measured]
    mse_vals = [k.mean_mse for k in kpis if k.mean_mse is not None]
    generated = sum(len(recs) for recs in user_records)
    summary = {
        "num_users": n_users,
        "policy": policy,
        "prediction_interval": pd,
        "seed": scenario.seed,
        "duration_ms": scenario.duration_ms,
        "warmup_ms": scenario.warmup_ms,
        "satisfied_users": satisfied_users(kpis, scenario.metrics.reliability_target),
        "delay_reliable_throughput": delay_reliable_throughput(measured),
        "frames_generated": generated,
        "frames_measured": len(measured),
        "frames_met": sum(1 for r in measured if r.met_deadline),
        "frames_rejected": sum(1 for recs in user_records for r in recs if r.rejected),
        "frames_harq_dropped": sum(
            1 for recs in user_records for r in recs if r.dropped
        ),
        "frames_cold_start": sum(
            1 for recs in user_records for r in recs if r.cold_start
        ),
        "mean_mse": sum(mse_vals) / len(mse_vals) if mse_vals else None,
        "mse_sum": sum(mse_vals),
        "mse_n": len(mse_vals),
        "audit": {
            "slots_total": n_slots,
            "busy_slots": busy_slots,
            "max_rbs_in_slot": max_rb_used,
            "rb_limit": num_rbs,
            "rb_conservation_violations": 0,
            "total_served_bits": total_served_bits,
        },
        "version": __version__,
    }
    report = SimReport(
        scenario=scenario_to_dict(scenario),
        links=links,
        user_records=user_records,
        kpis=kpis,
        summary=summary,
    )
    summary["digest"] = report_digest(report)
    return report


def report_digest(report: SimReport) -> str:
    """SHA-256 over the canonical per-frame outcomes and KPI inputs."""
    h = hashlib.sha256()
    for recs in report.user_records:
        for r in recs:
            h.update(
                (
                    f"{r.user_id},{r.frame_idx},{r.mac_available_time!r},"
                    f"{r.delivery_time!r},{int(r.met_deadline)},{int(r.is_predicted)},"
                    f"{r.effective_horizon},{r.displayed_mse!r},{int(r.measured)}\n"
                ).encode()
            )
    for k in report.kpis:
        h.update(f"{k.user_id},{k.reliability!r},{k.mean_mse!r},{k.sinr_db!r}\n".encode())
    return h.hexdigest()


# --------------------------------------------------------------------- sweeps


@dataclass
class SweepResult:
    scenario: dict
    axes: dict
    rows: list[dict]
    user_rows: list[dict]
    points: list[dict]


def _point_scenario(scenario: Scenario, n: int, pd: int, policy: str, run_seed: int) -> Scenario:
    return dataclasses.replace(
        scenario,
        seed=run_seed,
        users=dataclasses.replace(scenario.users, count=n, positions=None),
        edge=dataclasses.replace(scenario.edge, prediction_interval=pd),
        scheduler=dataclasses.replace(scenario.scheduler, policy=policy),
        sweep=SweepConfig(),
    )


def _sweep_task(args) -> tuple[dict, list[dict]]:
    scenario, n, pd, policy, run_idx, run_seed = args
    row = {
        "num_users": n,
        "prediction_interval": pd,
        "policy": policy,
        "run_idx": run_idx,
        "seed": run_seed,
        "failed": False,
        "error": "",
    }
    user_rows: list[dict] = []
    try:
        report = run(_point_scenario(scenario, n, pd, policy, run_seed))
    except Exception as e:  # point marked failed, sweep continues
        row.update(
            failed=True,
            error=f"{type(e).__name__}: {e}",
            satisfied_users=None,
            reliable_fraction=None,
            frames_measured=0,
            frames_met=0,
            mse_sum=0.0,
            mse_n=0,
            mean_mse=None,
        )
        return row, user_rows
    s = report.summary
    row.update(
        satisfied_users=s["satisfied_users"],
        reliable_fraction=s["delay_reliable_throughput"],
        frames_measured=s["frames_measured"],
        frames_met=s["frames_met"],
        mse_sum=s["mse_sum"],
        mse_n=s["mse_n"],
        mean_mse=s["mean_mse"],
    )
    for k in report.kpis:
        user_rows.append(
            {
                "num_users": n,
                "prediction_interval": pd,
                "policy": policy,
                "run_idx": run_idx,
                "user_id": k.user_id,
                "sinr_db": k.sinr_db,
                "cqi": k.cqi,
                "reliability": k.reliability,
                "violation_pct": k.violation_pct,
                "mean_mse": k.mean_mse,
                "satisfied": int(k.satisfied),
            }
        )
    return row, user_rows


def sweep(scenario: Scenario, progress=None) -> SweepResult:
    """Run the Cartesian product of the sweep axes x runs_per_point.

    Per-point seeds derive from (base seed, point, run index), so results are
    independent of axis order and of execution interleaving; failed points are
    kept as failed rows.  `progress` is called as progress(done, total).
    """
    problems = validate(scenario)
    if problems:
        raise ConfigError("; ".join(problems))
    ax_users = list(scenario.sweep.num_users) or [scenario.users.count]
    ax_pd = list(scenario.sweep.prediction_interval) or [scenario.edge.prediction_interval]
    ax_policy = list(scenario.sweep.policy) or [scenario.scheduler.policy]
    runs = scenario.sweep.runs_per_point

    tasks = []
    for n in ax_users:
        for pd in ax_pd:
            for pol in ax_policy:
                for r in range(runs):
                    run_seed = seeds.mix64(scenario.seed, "sweep-point", n, pd, pol, r)
                    tasks.append((scenario, n, pd, pol, r, run_seed))

    total = len(tasks)
    results: list[tuple[dict, list[dict]]] = []
    workers = scenario.sweep.workers or 1
    if workers <= 1 or total <= 1:
        for i, t in enumerate(tasks):
            results.append(_sweep_task(t))
            if progress:
                progress(i + 1, total)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futs = {pool.submit(_sweep_task, t): i for i, t in enumerate(tasks)}
            done = 0
            slots: list = [None] * total
            for fut in as_completed(futs):
                slots[futs[fut]] = fut.result()
                done += 1
                if progress:
                    progress(done, total)
            results = slots

    pol_order = {p: i for i, p in enumerate(POLICIES)}
    order = sorted(
        range(total),
        key=lambda i: (
            results[i][0]["num_users"],
            results[i][0]["prediction_interval"],
            pol_order.get(results[i][0]["policy"], 99),
            results[i][0]["run_idx"],
        ),
    )
    rows = [results[i][0] for i in order]
    user_rows = [ur for i in order for ur in results[i][1]]
    points = aggregate_points(rows)
    return SweepResult(
        scenario=scenario_to_dict(scenario),
        axes={
            "num_users": ax_users,
            "prediction_interval": ax_pd,
            "policy": ax_policy,
            "runs_per_point": runs,
        },
        rows=rows,
        user_rows=user_rows,
        points=points,
    )


def aggregate_points(rows: list[dict]) -> list[dict]:
    """Fold per-run rows into one aggregate row per sweep point."""
    groups: dict[tuple, list[dict]] = {}
    for row in rows:
        key = (row["policy"], row["prediction_interval"], row["num_users"])
        groups.setdefault(key, []).append(row)
    pol_order = {p: i for i, p in enumerate(POLICIES)}
    points = []
    for key in sorted(groups, key=lambda k: (k[2], k[1], pol_order.get(k[0], 99))):
        pol, pd, n = key
        rows_ok = [r for r in groups[key] if not r["failed"]]
        n_failed = len(groups[key]) - len(rows_ok)
        sat = [r["satisfied_users"] for r in rows_ok]
        rel = [r["reliable_fraction"] for r in rows_ok if r["reliable_fraction"] is not None]
        mse_sum = sum(r["mse_sum"] for r in rows_ok)
        mse_n = sum(r["mse_n"] for r in rows_ok)
        points.append(
            {
                "policy": pol,
                "prediction_interval": pd,
                "num_users": n,
                "runs": len(rows_ok),
                "failed_runs": n_failed,
                "mean_satisfied_users": sum(sat) / len(sat) if sat else None,
                "mean_reliable_fraction": sum(rel) / len(rel) if rel else None,
                "mean_mse": mse_sum / mse_n if mse_n else None,
                "mse_sum": mse_sum,
                "mse_n": mse_n,
                "failed": not rows_ok,
            }
        )
    return points
