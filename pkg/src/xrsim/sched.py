"""Per-slot downlink MAC: frame fragmentation into transport blocks, RB
allocation under PF / DRR / MAX_CQI, BLER-driven retransmission.

Allocation granularity is one RB.  Within a slot the PF and MAX_CQI metrics are
constant (PF averages update once per slot), so the per-RB argmax collapses to
a single greedy pass: rank backlogged users by metric and hand each its backlog
rounded up to whole RBs until RBs run out.  The outcome is identical to the
RB-by-RB loop, at a fraction of the cost.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from . import seeds
from .errors import ConfigError, InternalError
from .radio import LinkState, RadioConfig

POLICIES = ("PF", "DRR", "MAX_CQI")

# queue segment layout: [record, bits, harq_attempts]
_REC, _BITS, _ATT = 0, 1, 2


@dataclass(frozen=True)
class SchedulerConfig:
    policy: str = "PF"
    pf_beta: float = 0.01
    drr_quantum_bits: int | None = None  # None -> mean frame size / 8
    harq_rtt_slots: int = 4
    max_harq_attempts: int = 4
    queue_capacity_frames: float = 16.0  # per-user capacity in mean frame sizes

    def validate(self, path: str = "scheduler") -> list[str]:
        bad = []
        if self.policy not in POLICIES:
            bad.append(f"{path}.policy: unknown policy {self.policy!r} (use PF, DRR or MAX_CQI)")
        if not 0 < self.pf_beta < 1:
            bad.append(f"{path}.pf_beta: must be in (0, 1)")
        if self.drr_quantum_bits is not None and self.drr_quantum_bits < 1:
            bad.append(f"{path}.drr_quantum_bits: must be a positive integer")
        if self.harq_rtt_slots < 1:
            bad.append(f"{path}.harq_rtt_slots: must be >= 1")
        if self.max_harq_attempts < 1:
            bad.append(f"{path}.max_harq_attempts: must be >= 1")
        if self.queue_capacity_frames <= 0:
            bad.append(f"{path}.queue_capacity_frames: must be positive")
        return bad


class MacQueue:
    """Per-user FIFO of frame segments awaiting transmission.

    Segments of a failed transport block are parked for the HARQ round trip and
    re-join at the queue front in their original order.  Occupancy (eligible +
    parked bits) is capped at capacity_bits; an arriving frame that does not
    fit is dropped and counted.
    """

    __slots__ = (
        "user_id", "capacity_bits", "rate", "segs", "eligible_bits",
        "parked", "parked_bits", "dropped_frames",
    )

    def __init__(self, user_id: int, capacity_bits: int, rate: int = 0):
        self.user_id = user_id
        self.capacity_bits = capacity_bits
        self.rate = rate  # bits per RB per slot, frozen per run
        self.segs: deque[list] = deque()
        self.eligible_bits = 0
        self.parked: deque[tuple[int, list]] = deque()  # (release_slot, seg)
        self.parked_bits = 0
        self.dropped_frames = 0

    def occupancy_bits(self) -> int:
        return self.eligible_bits + self.parked_bits

    def enqueue(self, record) -> bool:
        if self.occupancy_bits() + record.size_bits > self.capacity_bits:
            self.dropped_frames += 1
            record.rejected = True
            return False
        self.segs.append([record, record.size_bits, 0])
        self.eligible_bits += record.size_bits
        return True

    def release_due(self, slot_idx: int) -> None:
        due = []
        while self.parked and self.parked[0][0] <= slot_idx:
            due.append(self.parked.popleft()[1])
        for seg in reversed(due):
            self.segs.appendleft(seg)
            self.eligible_bits += seg[_BITS]
            self.parked_bits -= seg[_BITS]

    def take_front(self, bits: int) -> list[list]:
        """Pop up to `bits` from the queue front, splitting the last segment."""
        parts = []
        left = bits
        segs = self.segs
        while left > 0 and segs:
            seg = segs[0]
            if seg[_BITS] <= left:
                segs.popleft()
                parts.append(seg)
                left -= seg[_BITS]
            else:
                parts.append([seg[_REC], left, seg[_ATT]])
                seg[_BITS] -= left
                left = 0
        taken = bits - left
        self.eligible_bits -= taken
        return parts

    def park(self, release_slot: int, seg: list) -> None:
        self.parked.append((release_slot, seg))
        self.parked_bits += seg[_BITS]

    def purge_record(self, record) -> None:
        """Remove every trace of a dropped frame."""
        kept = deque()
        for seg in self.segs:
            if seg[_REC] is record:
                self.eligible_bits -= seg[_BITS]
            else:
                kept.append(seg)
        self.segs = kept
        kept_parked = deque()
        for release, seg in self.parked:
            if seg[_REC] is record:
                self.parked_bits -= seg[_BITS]
            else:
                kept_parked.append((release, seg))
        self.parked = kept_parked


@dataclass
class SchedulerState:
    """Mutable scheduler state shared across slots of one run."""

    policy: str
    pf_beta: float = 0.01
    drr_quantum_bits: int = 62500
    harq_rtt_slots: int = 4
    max_harq_attempts: int = 4
    pf_avg_thr: dict[int, float] = field(default_factory=dict)
    drr_deficit: dict[int, int] = field(default_factory=dict)
    drr_pointer: int = 0

    @classmethod
    def from_config(cls, cfg: SchedulerConfig, quantum_bits: int) -> "SchedulerState":
        if cfg.policy not in POLICIES:
            raise ConfigError(f"unknown policy {cfg.policy!r}")
        return cls(
            policy=cfg.policy,
            pf_beta=cfg.pf_beta,
            drr_quantum_bits=cfg.drr_quantum_bits or quantum_bits,
            harq_rtt_slots=cfg.harq_rtt_slots,
            max_harq_attempts=cfg.max_harq_attempts,
        )

    def init_user(self, link: LinkState) -> None:
        # PF average warm-started at one RB's rate so the ratio is defined
        self.pf_avg_thr[link.user_id] = float(max(link.bits_per_rb_slot, 1))
        self.drr_deficit[link.user_id] = 0

    def update_pf(self, user_ids, served: dict[int, int]) -> None:
        beta = self.pf_beta
        avg = self.pf_avg_thr
        for uid in user_ids:
            avg[uid] = (1.0 - beta) * avg[uid] + beta * served.get(uid, 0)


@dataclass
class SlotAllocation:
    slot_idx: int
    assignments: list[tuple[int, int, int]]  # (user_id, rb_count, tb_bits)

    @property
    def total_rbs(self) -> int:
        return sum(a[1] for a in self.assignments)


def enqueue_frame(queues: dict[int, MacQueue], record) -> bool:
    """Append a frame to its user's MAC queue; overflow drops it (a modeled
    outcome counted as a delay-bound violation, not an error)."""
    return queues[record.user_id].enqueue(record)


def dl_schedule(
    slot_idx: int,
    queues: list[MacQueue],
    links: dict[int, LinkState] | None,
    state: SchedulerState,
    num_rbs: int,
) -> SlotAllocation:
    """Allocate the slot's RBs to backlogged users under the configured policy.

    Per-RB rates are frozen on the queues at setup, so `links` is accepted for
    interface completeness only.  Ties break on the lowest user_id everywhere,
    so runs are reproducible.  No user receives more than its backlog rounded
    up to one RB.
    """
    if state.policy == "PF" or state.policy == "MAX_CQI":
        pf = state.policy == "PF"
        avg = state.pf_avg_thr
        ranked = []
        for q in queues:
            if q.eligible_bits <= 0 or q.rate <= 0:
                continue
            metric = q.rate / avg[q.user_id] if pf else float(q.rate)
            ranked.append((-metric, q.user_id, q))
        ranked.sort()
        assignments = []
        rb_left = num_rbs
        for _, uid, q in ranked:
            if rb_left <= 0:
                break
            need = -(-q.eligible_bits // q.rate)  # ceil
            g = need if need < rb_left else rb_left
            assignments.append((uid, g, g * q.rate))
            rb_left -= g
        return SlotAllocation(slot_idx, assignments)

    if state.policy == "DRR":
        return _drr_schedule(slot_idx, queues, state, num_rbs)

    raise ConfigError(f"unknown policy {state.policy!r}")


def _drr_schedule(
    slot_idx: int, queues: list[MacQueue], state: SchedulerState, num_rbs: int
) -> SlotAllocation:
    n = len(queues)
    if n == 0:
        return SlotAllocation(slot_idx, [])
    deficit = state.drr_deficit
    quantum = state.drr_quantum_bits
    remaining = [q.eligible_bits if q.rate > 0 else 0 for q in queues]
    active = sum(1 for r in remaining if r > 0)
    rb_left = num_rbs
    grants: dict[int, int] = {}
    idx = state.drr_pointer % n
    guard = 0
    while rb_left > 0 and active > 0:
        q = queues[idx]
        pos = idx
        idx = (idx + 1) % n
        if remaining[pos] <= 0:
            continue
        uid = q.user_id
        deficit[uid] += quantum
        need = -(-remaining[pos] // q.rate)
        afford = deficit[uid] // q.rate
        g = min(need, afford, rb_left)
        if g > 0:
            grants[pos] = grants.get(pos, 0) + g
            deficit[uid] -= g * q.rate
            rb_left -= g
            served = g * q.rate
            remaining[pos] = remaining[pos] - served if served < remaining[pos] else 0
            if remaining[pos] == 0:
                active -= 1
                deficit[uid] = 0  # queue drains this slot; no credit banking
        guard += 1
        if guard > 10000 * n:
            raise InternalError("DRR visit loop failed to converge")
    state.drr_pointer = idx
    assignments = [
        (queues[pos].user_id, g, g * queues[pos].rate) for pos, g in sorted(grants.items())
    ]
    return SlotAllocation(slot_idx, assignments)


def transmit(
    alloc: SlotAllocation,
    queues: dict[int, MacQueue],
    state: SchedulerState,
    cfg: RadioConfig,
    slot_ms: float,
    bler_seed: int,
) -> tuple[list, dict[int, int]]:
    """Send each assignment as one transport block and settle the outcomes.

    Success credits the covered frames' bits; a frame completes (delivery_time
    = end of slot) when all its bits are in.  Failure parks the block's bits
    for harq_rtt_slots; bits failing max_harq_attempts times drop their frames.
    Returns (delivered records, served bits per user).
    """
    delivered = []
    served: dict[int, int] = {}
    bler = cfg.target_bler
    slot_end = (alloc.slot_idx + 1) * slot_ms
    for uid, _rbs, tb_bits in alloc.assignments:
        q = queues[uid]
        take = tb_bits if tb_bits < q.eligible_bits else q.eligible_bits
        if take <= 0:
            continue
        parts = q.take_front(take)
        served[uid] = served.get(uid, 0) + take
        if bler <= 0.0:
            ok = True
        elif bler >= 1.0:
            ok = False
        else:
            ok = seeds.u01(bler_seed, uid, alloc.slot_idx) >= bler
        if ok:
            for seg in parts:
                rec = seg[_REC]
                rec.delivered_bits += seg[_BITS]
                if rec.delivered_bits >= rec.size_bits and not rec.dropped:
                    rec.delivery_time = slot_end
                    delivered.append(rec)
        else:
            release = alloc.slot_idx + state.harq_rtt_slots
            drops = []
            for seg in parts:
                seg[_ATT] += 1
                if seg[_ATT] >= state.max_harq_attempts:
                    drops.append(seg[_REC])
            for seg in parts:
                rec = seg[_REC]
                if rec.dropped or rec in drops:
                    continue
                q.park(release, seg)
            for rec in drops:
                if not rec.dropped:
                    rec.dropped = True
                    q.dropped_frames += 1
                    q.purge_record(rec)
    return delivered, served
