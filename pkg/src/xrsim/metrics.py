"""Evaluation quantities: per-frame delivery records, per-user KPIs, cohort
delay-reliable throughput, MSE-vs-load curves, crossover and threshold points,
and the violation-vs-SINR surface."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .edge import ErrorModel
from .radio import LinkState


@dataclass(slots=True, eq=False)  # identity semantics: one record per frame
class FrameRecord:
    """Lifecycle of one displayed frame, from generation to (non-)delivery.

    mac_available_time is when the edge handed the frame (original or
    predicted) to the MAC queue; delivery_time stays None for frames dropped at
    enqueue, abandoned by HARQ, or still pending at run end.  displayed_mse
    folds in receiver-side concealment for frames that missed their deadline.
    """

    user_id: int
    frame_idx: int
    gen_time: float
    display_deadline: float
    size_bits: int
    mac_available_time: float | None = None
    delivery_time: float | None = None
    is_predicted: bool = False
    effective_horizon: int = 0
    content_mse: float = 0.0
    cold_start: bool = False
    rejected: bool = False
    dropped: bool = False
    delivered_bits: int = 0
    displayed_mse: float = 0.0
    measured: bool = False

    @property
    def met_deadline(self) -> bool:
        return self.delivery_time is not None and self.delivery_time <= self.display_deadline


@dataclass(frozen=True)
class UserKpi:
    user_id: int
    frames_measured: int
    frames_met: int
    reliability: float | None
    violation_pct: float | None
    satisfied: bool
    mean_mse: float | None
    sinr_db: float
    cqi: int


@dataclass(frozen=True)
class CrossoverReport:
    """Curve-pair intersections (gammas) and per-threshold capacity points."""

    gamma_points: list[dict] = field(default_factory=list)
    c_points: list[dict] = field(default_factory=list)


def delay_reliable_throughput(records: list[FrameRecord]) -> float | None:
    """Fraction of the given frames that met their deadline (None if empty).

    Dropped and never-delivered frames count as misses.
    """
    if not records:
        return None
    met = sum(1 for r in records if r.met_deadline)
    return met / len(records)


def satisfied_users(kpis: list[UserKpi], reliability_target: float = 0.99) -> int:
    """Users whose reliability reaches the target (inclusive >=)."""
    return sum(
        1 for k in kpis if k.reliability is not None and k.reliability >= reliability_target
    )


def _pivot_mean(values: list[float]) -> float | None:
    """Mean computed around the first value as pivot; exact when all values
    coincide (a constant pool must average to that constant, bit for bit)."""
    if not values:
        return None
    pivot = values[0]
    return pivot + math.fsum(v - pivot for v in values) / len(values)


def finalize_records(
    user_records: list[list[FrameRecord]],
    prediction_interval: int,
    error_model: ErrorModel,
    warmup_ms: float,
    t_high_ms: float,
) -> None:
    """Assign displayed MSE (with concealment compounding) and the measurement
    window flag, in frame order per user.

    A frame that misses its deadline is displayed as an extrapolation from the
    last good content: horizon = prediction_interval + consecutive misses.
    Measured frames are non-cold-start frames whose MAC availability falls in
    [warmup, t_high].
    """
    for records in user_records:
        miss_run = 0
        for rec in records:
            if rec.met_deadline:
                miss_run = 0
                rec.displayed_mse = rec.content_mse
            else:
                miss_run += 1
                rec.displayed_mse = error_model.mse(prediction_interval + miss_run)
            rec.measured = (
                not rec.cold_start
                and rec.mac_available_time is not None
                and warmup_ms <= rec.mac_available_time <= t_high_ms
            )


def build_user_kpis(
    user_records: list[list[FrameRecord]],
    links: list[LinkState],
    reliability_target: float = 0.99,
    mse_over_predicted_only: bool = False,
) -> list[UserKpi]:
    kpis = []
    for records, link in zip(user_records, links):
        measured = [r for r in records if r.measured]
        met = sum(1 for r in measured if r.met_deadline)
        if measured:
            rel = met / len(measured)
            viol = 100.0 * (1.0 - rel)
        else:
            rel = None
            viol = None
        if mse_over_predicted_only:
            pool = [r.displayed_mse for r in measured if r.is_predicted or not r.met_deadline]
        else:
            pool = [r.displayed_mse for r in measured]
        mean_mse = _pivot_mean(pool)
        kpis.append(
            UserKpi(
                user_id=link.user_id,
                frames_measured=len(measured),
                frames_met=met,
                reliability=rel,
                violation_pct=viol,
                satisfied=rel is not None and rel >= reliability_target,
                mean_mse=mean_mse,
                sinr_db=link.sinr_db,
                cqi=link.cqi,
            )
        )
    return kpis


def mse_curve(point_rows: list[dict]) -> dict[tuple[str, int], list[tuple[int, float]]]:
    """Aggregate sweep point rows into per-(policy, prediction interval) curves
    of mean MSE vs user count.

    Each input row must carry policy, prediction_interval, num_users, mse_sum
    and mse_n (per-run sums over users); the point value pools users and runs.
    Missing points are simply absent from the curve, never interpolated.
    """
    acc: dict[tuple[str, int], dict[int, list[float]]] = {}
    for row in point_rows:
        if row.get("failed"):
            continue
        key = (row["policy"], int(row["prediction_interval"]))
        cell = acc.setdefault(key, {}).setdefault(int(row["num_users"]), [0.0, 0.0])
        cell[0] += row["mse_sum"]
        cell[1] += row["mse_n"]
    curves = {}
    for key, cells in acc.items():
        pts = []
        for n in sorted(cells):
            s, cnt = cells[n]
            if cnt > 0:
                pts.append((n, s / cnt))
        curves[key] = pts
    return curves


def _interp_first_crossing(
    xs: list[float], a: list[float], b: list[float]
) -> float | None:
    """Smallest abscissa where a >= b, by piecewise-linear interpolation."""
    d = [ai - bi for ai, bi in zip(a, b)]
    if d[0] >= 0:
        return float(xs[0])
    for i in range(1, len(d)):
        if d[i] >= 0:
            span = d[i] - d[i - 1]
            if span <= 0:
                return float(xs[i])
            frac = (0.0 - d[i - 1]) / span
            return float(xs[i - 1] + (xs[i] - xs[i - 1]) * frac)
    return None


def _interp_last_below(xs: list[float], c: list[float], m: float) -> float | None:
    """Largest abscissa where the curve is <= m (inclusive), interpolated."""
    if c[-1] <= m:
        return float(xs[-1])
    for i in range(len(c) - 1, 0, -1):
        if c[i - 1] <= m < c[i]:
            span = c[i] - c[i - 1]
            frac = (m - c[i - 1]) / span if span > 0 else 0.0
            return float(xs[i - 1] + (xs[i] - xs[i - 1]) * frac)
    return None


def find_crossovers(
    curves_by_pd: dict[int, list[tuple[int, float]]],
    mse_thresholds: list[float] | None = None,
) -> CrossoverReport:
    """Locate curve-pair intersections and threshold capacity points.

    For each adjacent prediction-interval pair (lower, higher), gamma is the
    smallest user count at which the lower curve rises to meet the higher one.
    For each MSE threshold and curve, the c-point is the largest user count at
    which the curve still satisfies the threshold.  Curves must share a common
    user-count grid; absent intersections are reported with a null user count.
    """
    pds = sorted(curves_by_pd)
    gamma_points = []
    for lo, hi in zip(pds, pds[1:]):
        a_pts, b_pts = curves_by_pd[lo], curves_by_pd[hi]
        xs = [n for n, _ in a_pts]
        if [n for n, _ in b_pts] != xs or len(xs) < 2:
            gamma_points.append({"pair": [lo, hi], "user_count": None})
            continue
        g = _interp_first_crossing(xs, [v for _, v in a_pts], [v for _, v in b_pts])
        gamma_points.append({"pair": [lo, hi], "user_count": g})
    c_points = []
    for m in mse_thresholds or []:
        for pd in pds:
            pts = curves_by_pd[pd]
            if not pts:
                continue
            xs = [n for n, _ in pts]
            c = _interp_last_below(xs, [v for _, v in pts], m)
            c_points.append({"mse_threshold": m, "prediction_interval": pd, "max_users": c})
    return CrossoverReport(gamma_points=gamma_points, c_points=c_points)


def violation_surface(
    user_rows: list[dict], sinr_bin_db: float = 2.0
) -> list[dict]:
    """Mean violation percentage per (SINR bin, other-user count) cell.

    Cells with no samples are absent from the output, never zero-filled.
    Input rows need sinr_db, num_users and violation_pct (None rows skipped).
    """
    cells: dict[tuple[int, int], list[float]] = {}
    for row in user_rows:
        v = row.get("violation_pct")
        if v is None:
            continue
        b = math.floor(row["sinr_db"] / sinr_bin_db)
        cells.setdefault((b, int(row["num_users"]) - 1), []).append(float(v))
    out = []
    for (b, others) in sorted(cells):
        vals = cells[(b, others)]
        out.append(
            {
                "sinr_bin_lo_db": b * sinr_bin_db,
                "sinr_bin_hi_db": (b + 1) * sinr_bin_db,
                "other_users": others,
                "mean_violation_pct": sum(vals) / len(vals),
                "samples": len(vals),
            }
        )
    return out
