import pytest

from xrsim.errors import ConfigError
from xrsim.metrics import FrameRecord
from xrsim.radio import RadioConfig
from xrsim.sched import (
    MacQueue,
    SchedulerConfig,
    SchedulerState,
    dl_schedule,
    enqueue_frame,
    transmit,
)

SLOT_MS = 0.25


def rec(uid, idx, bits, deadline=1e9):
    return FrameRecord(
        user_id=uid,
        frame_idx=idx,
        gen_time=0.0,
        display_deadline=deadline,
        size_bits=bits,
    )


def make_queue(uid, rate, backlog_bits=None, capacity=10**9):
    q = MacQueue(uid, capacity, rate)
    if backlog_bits:
        r = rec(uid, 0, backlog_bits)
        assert q.enqueue(r)
    return q


def make_state(policy="PF", **kw):
    st = SchedulerState(policy=policy, **kw)
    return st


def init_avgs(st, queues):
    for q in queues:
        st.pf_avg_thr[q.user_id] = float(max(q.rate, 1))
        st.drr_deficit[q.user_id] = 0
    return st


def test_max_cqi_argmax_until_backlog_clears():
    q0 = make_queue(0, 1000, backlog_bits=50_000)  # needs 50 RBs
    q1 = make_queue(1, 500, backlog_bits=10**6)
    st = init_avgs(make_state("MAX_CQI"), [q0, q1])
    alloc = dl_schedule(0, [q0, q1], None, st, 135)
    assert alloc.assignments[0] == (0, 50, 50_000)
    assert alloc.assignments[1] == (1, 85, 42_500)
    assert alloc.total_rbs == 135


def test_pf_with_equal_averages_reduces_to_max_cqi():
    q0 = make_queue(0, 1000, backlog_bits=10**6)
    q1 = make_queue(1, 500, backlog_bits=10**6)
    st = make_state("PF")
    st.pf_avg_thr = {0: 700.0, 1: 700.0}
    st.drr_deficit = {0: 0, 1: 0}
    alloc = dl_schedule(0, [q0, q1], None, st, 135)
    assert alloc.assignments[0][0] == 0  # higher rate wins at equal averages
    assert alloc.total_rbs == 135


def test_pf_ties_break_on_lowest_user_id():
    q0 = make_queue(0, 1000, backlog_bits=10**6)
    q1 = make_queue(1, 1000, backlog_bits=10**6)
    st = make_state("PF")
    st.pf_avg_thr = {0: 700.0, 1: 700.0}
    alloc = dl_schedule(0, [q0, q1], None, st, 135)
    assert alloc.assignments[0][0] == 0


def test_pf_average_update_formula():
    st = make_state("PF", pf_beta=0.01)
    st.pf_avg_thr = {0: 1000.0, 1: 1000.0}
    st.update_pf([0, 1], {0: 5000})
    assert st.pf_avg_thr[0] == pytest.approx(0.99 * 1000 + 0.01 * 5000)
    assert st.pf_avg_thr[1] == pytest.approx(0.99 * 1000)


def test_drr_hand_trace_two_users_drain_in_own_visit():
    # quantum 8000, both backlogged 8000 bits, equal rates of 1000 bits/RB:
    # each visit affords exactly 8 RBs and drains its user
    q0 = make_queue(0, 1000, backlog_bits=8000)
    q1 = make_queue(1, 1000, backlog_bits=8000)
    st = init_avgs(make_state("DRR", drr_quantum_bits=8000), [q0, q1])
    alloc = dl_schedule(0, [q0, q1], None, st, 135)
    assert sorted(alloc.assignments) == [(0, 8, 8000), (1, 8, 8000)]
    # fully covered queues do not bank residual deficit
    assert st.drr_deficit[0] == 0 and st.drr_deficit[1] == 0


def test_drr_residual_deficit_retained_while_backlogged():
    q0 = make_queue(0, 1000, backlog_bits=10**6)
    st = init_avgs(make_state("DRR", drr_quantum_bits=2500), [q0])
    alloc = dl_schedule(0, [q0], None, st, 2)
    # one visit: deficit 2500 affords 2 RBs; 500 bits of credit remain
    assert alloc.assignments == [(0, 2, 2000)]
    assert st.drr_deficit[0] == 500


def test_drr_pointer_rotates_across_slots():
    q0 = make_queue(0, 1000, backlog_bits=10**9)
    q1 = make_queue(1, 1000, backlog_bits=10**9)
    st = init_avgs(make_state("DRR", drr_quantum_bits=135_000), [q0, q1])
    first = dl_schedule(0, [q0, q1], None, st, 135)
    second = dl_schedule(1, [q0, q1], None, st, 135)
    # one user per slot at this quantum, alternating
    assert first.assignments[0][0] != second.assignments[0][0]


def test_unknown_policy_rejected():
    q0 = make_queue(0, 1000, backlog_bits=1000)
    st = make_state("WFQ")
    with pytest.raises(ConfigError):
        dl_schedule(0, [q0], None, st, 135)
    assert SchedulerConfig(policy="WFQ").validate()


def test_enqueue_capacity_two_fit_third_rejected():
    cap = 2 * 500_000
    q = MacQueue(0, cap, 1000)
    queues = {0: q}
    r1, r2, r3 = rec(0, 0, 500_000), rec(0, 1, 500_000), rec(0, 2, 500_000)
    assert enqueue_frame(queues, r1)
    assert enqueue_frame(queues, r2)
    assert not enqueue_frame(queues, r3)
    assert q.dropped_frames == 1
    assert r3.rejected and not r1.rejected


def test_allocation_never_exceeds_backlog_rounded_up():
    q = make_queue(0, 1000, backlog_bits=1500)
    st = init_avgs(make_state("MAX_CQI"), [q])
    alloc = dl_schedule(0, [q], None, st, 135)
    assert alloc.assignments == [(0, 2, 2000)]  # ceil(1500/1000) = 2 RBs


def test_transmit_full_cell_delivers_in_one_slot():
    # 500 kbit frame, 5000 bits/RB, 135 RBs -> 675 kbit/slot covers it
    q = make_queue(0, 5000)
    r = rec(0, 0, 500_000)
    q.enqueue(r)
    st = init_avgs(make_state("MAX_CQI"), [q])
    cfg = RadioConfig(target_bler=0.0)
    alloc = dl_schedule(0, [q], None, st, 135)
    delivered, served = transmit(alloc, {0: q}, st, cfg, SLOT_MS, bler_seed=1)
    assert delivered == [r]
    assert r.delivery_time == SLOT_MS
    assert served[0] == 500_000  # only backlogged bits count as served


def test_transmit_two_slots_at_fifty_rbs():
    q = make_queue(0, 5000)
    r = rec(0, 0, 500_000)
    q.enqueue(r)
    st = init_avgs(make_state("MAX_CQI"), [q])
    cfg = RadioConfig(target_bler=0.0)
    slots = 0
    for slot in range(10):
        alloc = dl_schedule(slot, [q], None, st, 50)
        if not alloc.assignments:
            break
        transmit(alloc, {0: q}, st, cfg, SLOT_MS, bler_seed=1)
        slots += 1
        if r.delivery_time is not None:
            break
    assert slots == 2  # ceil(500000 / 250000)
    assert r.delivery_time == 2 * SLOT_MS


def test_zero_bler_outcome_independent_of_seed():
    results = []
    for seed in (1, 99):
        q = make_queue(0, 5000)
        r = rec(0, 0, 400_000)
        q.enqueue(r)
        st = init_avgs(make_state("PF"), [q])
        alloc = dl_schedule(0, [q], None, st, 135)
        transmit(alloc, {0: q}, st, RadioConfig(target_bler=0.0), SLOT_MS, bler_seed=seed)
        results.append(r.delivery_time)
    assert results[0] == results[1] == SLOT_MS


def test_harq_park_and_retransmit_timing():
    q = make_queue(0, 5000)
    r = rec(0, 0, 100_000)
    q.enqueue(r)
    st = init_avgs(make_state("MAX_CQI", harq_rtt_slots=4, max_harq_attempts=4), [q])
    bad = RadioConfig(target_bler=1.0)
    good = RadioConfig(target_bler=0.0)
    alloc = dl_schedule(0, [q], None, st, 135)
    transmit(alloc, {0: q}, st, bad, SLOT_MS, bler_seed=1)
    assert q.eligible_bits == 0 and q.parked_bits == 100_000
    # nothing eligible until the HARQ round trip elapses
    for slot in (1, 2, 3):
        q.release_due(slot)
        assert q.eligible_bits == 0
    q.release_due(4)
    assert q.eligible_bits == 100_000
    alloc = dl_schedule(4, [q], None, st, 135)
    transmit(alloc, {0: q}, st, good, SLOT_MS, bler_seed=1)
    assert r.delivery_time == 5 * SLOT_MS


def test_harq_abandons_frame_after_max_attempts():
    q = make_queue(0, 5000)
    r = rec(0, 0, 100_000)
    q.enqueue(r)
    st = init_avgs(make_state("MAX_CQI", harq_rtt_slots=1, max_harq_attempts=3), [q])
    bad = RadioConfig(target_bler=1.0)
    slot = 0
    for _ in range(10):
        q.release_due(slot)
        alloc = dl_schedule(slot, [q], None, st, 135)
        if alloc.assignments:
            transmit(alloc, {0: q}, st, bad, SLOT_MS, bler_seed=1)
        slot += 1
        if r.dropped:
            break
    assert r.dropped
    assert q.dropped_frames == 1
    assert q.eligible_bits == 0 and q.parked_bits == 0
    assert r.delivery_time is None


def test_rb_conservation_random_backlogs():
    import random

    rng = random.Random(4)
    for policy in ("PF", "DRR", "MAX_CQI"):
        queues = []
        st = make_state(policy, drr_quantum_bits=60_000)
        for uid in range(8):
            q = make_queue(uid, rng.choice([0, 200, 500, 1000, 1070]))
            if rng.random() < 0.8:
                q.enqueue(rec(uid, 0, rng.randrange(1, 2_000_000)))
            queues.append(q)
        init_avgs(st, queues)
        for slot in range(50):
            alloc = dl_schedule(slot, queues, None, st, 135)
            assert alloc.total_rbs <= 135
            for uid, rbs, tb in alloc.assignments:
                assert tb == rbs * queues[uid].rate
            transmit(alloc, {q.user_id: q for q in queues}, st,
                     RadioConfig(target_bler=0.0), SLOT_MS, bler_seed=slot)


def test_work_conservation_nonempty_queue_gets_rbs():
    for policy in ("PF", "DRR", "MAX_CQI"):
        q = make_queue(0, 777, backlog_bits=123)
        st = init_avgs(make_state(policy, drr_quantum_bits=100), [q])
        alloc = dl_schedule(0, [q], None, st, 135)
        assert alloc.total_rbs >= 1


def test_drr_long_run_fairness_two_equal_users():
    # continuously backlogged equal-rate users: served-byte ratio -> 1
    q0 = make_queue(0, 1000)
    q1 = make_queue(1, 1000)
    st = init_avgs(make_state("DRR", drr_quantum_bits=62_500), [q0, q1])
    cfg = RadioConfig(target_bler=0.0)
    served_total = {0: 0, 1: 0}
    queues = {0: q0, 1: q1}
    next_idx = {0: 0, 1: 0}
    for slot in range(10_000):
        for q in (q0, q1):
            while q.eligible_bits < 500_000:
                q.enqueue(rec(q.user_id, next_idx[q.user_id], 500_000))
                next_idx[q.user_id] += 1
        alloc = dl_schedule(slot, [q0, q1], None, st, 135)
        _, served = transmit(alloc, queues, st, cfg, SLOT_MS, bler_seed=slot)
        for uid, bits in served.items():
            served_total[uid] += bits
    ratio = served_total[0] / served_total[1]
    assert abs(ratio - 1.0) <= 0.01
