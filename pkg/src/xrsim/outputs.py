"""Output bundles: manifest-first CSV/JSON artifacts for runs and sweeps.

Times are milliseconds with 3 decimals, sizes are bits, rates bits/s.  Files
carry no timestamps, so re-running an identical scenario reproduces every byte.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import yaml

from . import __version__
from .engine import SimReport, SweepResult
from .metrics import CrossoverReport

FRAME_COLUMNS = [
    "user_id", "frame_idx", "gen_time_ms", "mac_available_ms", "delivery_ms",
    "display_deadline_ms", "size_bits", "met_deadline", "is_predicted",
    "effective_horizon", "content_mse", "displayed_mse", "cold_start",
    "rejected", "harq_dropped", "measured",
]
USER_COLUMNS = [
    "user_id", "sinr_db", "cqi", "frames_measured", "frames_met",
    "reliability", "violation_pct", "mean_mse", "satisfied",
]
SWEEP_COLUMNS = [
    "num_users", "prediction_interval", "policy", "run_idx", "seed",
    "satisfied_users", "reliable_fraction", "frames_measured", "frames_met",
    "mean_mse", "mse_sum", "mse_n", "failed", "error",
]
SWEEP_POINT_COLUMNS = [
    "policy", "prediction_interval", "num_users", "runs", "failed_runs",
    "mean_satisfied_users", "mean_reliable_fraction", "mean_mse",
]
SWEEP_USER_COLUMNS = [
    "num_users", "prediction_interval", "policy", "run_idx", "user_id",
    "sinr_db", "cqi", "reliability", "violation_pct", "mean_mse", "satisfied",
]


def _ms(x) -> str:
    return "" if x is None else f"{x:.3f}"


def _f6(x) -> str:
    return "" if x is None else f"{x:.6f}"


def _b(x) -> str:
    return "1" if x else "0"


def _rows_frames(report: SimReport) -> list[list[str]]:
    rows = []
    for recs in report.user_records:
        for r in recs:
            rows.append(
                [
                    str(r.user_id), str(r.frame_idx), _ms(r.gen_time),
                    _ms(r.mac_available_time), _ms(r.delivery_time),
                    _ms(r.display_deadline), str(r.size_bits), _b(r.met_deadline),
                    _b(r.is_predicted), str(r.effective_horizon), _f6(r.content_mse),
                    _f6(r.displayed_mse), _b(r.cold_start), _b(r.rejected),
                    _b(r.dropped), _b(r.measured),
                ]
            )
    return rows


def _rows_users(report: SimReport) -> list[list[str]]:
    rows = []
    for k in report.kpis:
        rows.append(
            [
                str(k.user_id), f"{k.sinr_db:.3f}", str(k.cqi),
                str(k.frames_measured), str(k.frames_met), _f6(k.reliability),
                _f6(k.violation_pct), _f6(k.mean_mse), _b(k.satisfied),
            ]
        )
    return rows


def _rows_sweep(result: SweepResult) -> list[list[str]]:
    rows = []
    for r in result.rows:
        rows.append(
            [
                str(r["num_users"]), str(r["prediction_interval"]), r["policy"],
                str(r["run_idx"]), str(r["seed"]),
                "" if r["satisfied_users"] is None else str(r["satisfied_users"]),
                _f6(r["reliable_fraction"]), str(r["frames_measured"]),
                str(r["frames_met"]), _f6(r["mean_mse"]), _f6(r["mse_sum"]),
                str(r["mse_n"]), _b(r["failed"]), r["error"],
            ]
        )
    return rows


def _rows_sweep_points(result: SweepResult) -> list[list[str]]:
    rows = []
    for p in result.points:
        rows.append(
            [
                p["policy"], str(p["prediction_interval"]), str(p["num_users"]),
                str(p["runs"]), str(p["failed_runs"]),
                _f6(p["mean_satisfied_users"]), _f6(p["mean_reliable_fraction"]),
                _f6(p["mean_mse"]),
            ]
        )
    return rows


def _rows_sweep_users(result: SweepResult) -> list[list[str]]:
    rows = []
    for u in result.user_rows:
        rows.append(
            [
                str(u["num_users"]), str(u["prediction_interval"]), u["policy"],
                str(u["run_idx"]), str(u["user_id"]), f"{u['sinr_db']:.3f}",
                str(u["cqi"]), _f6(u["reliability"]), _f6(u["violation_pct"]),
                _f6(u["mean_mse"]), str(u["satisfied"]),
            ]
        )
    return rows


def _write_csv(path: Path, header: list[str], rows: list[list[str]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _write_json(path: Path, data) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_manifest(
    out: Path, command: str, scenario: dict, files: dict[str, int], extra: dict
) -> None:
    manifest = {
        "tool": "xrsim",
        "version": __version__,
        "command": command,
        "seed": scenario.get("seed"),
        "scenario": scenario,
        "files": {name: {"rows": rows} for name, rows in files.items()},
    }
    manifest.update(extra)
    _write_json(out / "manifest.json", manifest)


def write_run_bundle(
    report: SimReport, out_dir: str | Path, command: str = "run", extra: dict | None = None
) -> dict[str, int]:
    """Write manifest.json, scenario.yaml, frames.csv, users.csv, summary.json.

    The manifest is written first and lists every data file with its row count.
    Returns {filename: rows}.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    frames = _rows_frames(report)
    users = _rows_users(report)
    files = {
        "scenario.yaml": 1,
        "frames.csv": len(frames),
        "users.csv": len(users),
        "summary.json": 1,
    }
    _write_manifest(out, command, report.scenario, files, extra or {})
    with open(out / "scenario.yaml", "w", encoding="utf-8") as fh:
        yaml.safe_dump(report.scenario, fh, sort_keys=True)
    _write_csv(out / "frames.csv", FRAME_COLUMNS, frames)
    _write_csv(out / "users.csv", USER_COLUMNS, users)
    _write_json(out / "summary.json", report.summary)
    return files


def write_sweep_bundle(
    result: SweepResult, out_dir: str | Path, command: str = "sweep", extra: dict | None = None
) -> dict[str, int]:
    """Write manifest.json, scenario.yaml, sweep.csv (one row per point x run),
    sweep_points.csv (aggregates), sweep_users.csv (per-user rows)."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = _rows_sweep(result)
    points = _rows_sweep_points(result)
    user_rows = _rows_sweep_users(result)
    files = {
        "scenario.yaml": 1,
        "sweep.csv": len(rows),
        "sweep_points.csv": len(points),
        "sweep_users.csv": len(user_rows),
    }
    extra = dict(extra or {})
    extra["axes"] = result.axes
    _write_manifest(out, command, result.scenario, files, extra)
    with open(out / "scenario.yaml", "w", encoding="utf-8") as fh:
        yaml.safe_dump(result.scenario, fh, sort_keys=True)
    _write_csv(out / "sweep.csv", SWEEP_COLUMNS, rows)
    _write_csv(out / "sweep_points.csv", SWEEP_POINT_COLUMNS, points)
    _write_csv(out / "sweep_users.csv", SWEEP_USER_COLUMNS, user_rows)
    return files


def write_crossover(
    reports_by_policy: dict[str, CrossoverReport],
    thresholds: list[float],
    out_dir: str | Path,
) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    data = {
        "thresholds": thresholds,
        "policies": {
            pol: {"gamma_points": rep.gamma_points, "c_points": rep.c_points}
            for pol, rep in reports_by_policy.items()
        },
    }
    path = out / "crossover.json"
    _write_json(path, data)
    return path


def read_sweep_points_csv(path: str | Path) -> list[dict]:
    """Load sweep_points.csv (or aggregate a raw sweep.csv) into point rows."""
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        fields = reader.fieldnames or []
        if "mse_sum" in fields:  # per-run sweep.csv: aggregate here
            from .engine import aggregate_points

            raw = []
            for r in reader:
                raw.append(
                    {
                        "num_users": int(r["num_users"]),
                        "prediction_interval": int(r["prediction_interval"]),
                        "policy": r["policy"],
                        "run_idx": int(r["run_idx"]),
                        "failed": r["failed"] == "1",
                        "satisfied_users": int(r["satisfied_users"])
                        if r["satisfied_users"]
                        else None,
                        "reliable_fraction": float(r["reliable_fraction"])
                        if r["reliable_fraction"]
                        else None,
                        "mse_sum": float(r["mse_sum"]) if r["mse_sum"] else 0.0,
                        "mse_n": int(r["mse_n"]) if r["mse_n"] else 0,
                    }
                )
            return aggregate_points(raw)
        required = {"policy", "prediction_interval", "num_users", "mean_mse"}
        missing = required - set(fields)
        if missing:
            raise ValueError(f"sweep file missing columns: {sorted(missing)}")
        for r in reader:
            rows.append(
                {
                    "policy": r["policy"],
                    "prediction_interval": int(r["prediction_interval"]),
                    "num_users": int(r["num_users"]),
                    "mean_mse": float(r["mean_mse"]) if r["mean_mse"] else None,
                    "failed": r.get("failed") == "1",
                }
            )
    return rows
