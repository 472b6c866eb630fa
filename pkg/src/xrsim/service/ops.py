"""Service operations shared by the HTTP endpoints and the local CLI."""

from __future__ import annotations

import dataclasses
from pathlib import Path

from .. import engine, metrics, outputs
from ..errors import ConfigError


def validate_config(config: dict) -> list[str]:
    """Parse + validate a scenario config dict; parse errors become violations."""
    try:
        scenario = engine.scenario_from_dict(config)
    except ConfigError as e:
        return [str(e)]
    return engine.validate(scenario)


def run_scenario(config: dict, out_dir: str | None = None, extra: dict | None = None) -> dict:
    """Run one scenario; optionally write its bundle.  Returns summary + files."""
    scenario = engine.scenario_from_dict(config)
    report = engine.run(scenario)
    files = None
    if out_dir is not None:
        files = outputs.write_run_bundle(report, out_dir, command="run", extra=extra)
    return {"summary": report.summary, "out_dir": out_dir, "files": files}


def run_sweep(
    config: dict,
    out_dir: str | None = None,
    workers: int | None = None,
    progress=None,
    extra: dict | None = None,
) -> dict:
    """Run a sweep; optionally write its bundle.  Returns points + files."""
    scenario = engine.scenario_from_dict(config)
    if workers is not None:
        scenario = dataclasses.replace(
            scenario, sweep=dataclasses.replace(scenario.sweep, workers=workers)
        )
    result = engine.sweep(scenario, progress=progress)
    files = None
    if out_dir is not None:
        files = outputs.write_sweep_bundle(result, out_dir, command="sweep", extra=extra)
    return {
        "axes": result.axes,
        "total_runs": len(result.rows),
        "failed_runs": sum(1 for r in result.rows if r["failed"]),
        "points": result.points,
        "out_dir": out_dir,
        "files": files,
    }


def crossover_from_points(
    points: list[dict], thresholds: list[float], out_dir: str | None = None
) -> dict:
    """Compute gamma/c-points per policy from aggregated sweep points."""
    by_policy: dict[str, dict[int, list[tuple[int, float]]]] = {}
    curves = metrics.mse_curve(_ensure_mse_sums(points))
    for (policy, pd), pts in curves.items():
        by_policy.setdefault(policy, {})[pd] = pts
    reports = {
        policy: metrics.find_crossovers(curves_by_pd, thresholds)
        for policy, curves_by_pd in sorted(by_policy.items())
    }
    if out_dir is not None:
        outputs.write_crossover(reports, thresholds, out_dir)
    return {
        "thresholds": thresholds,
        "policies": {
            pol: {"gamma_points": rep.gamma_points, "c_points": rep.c_points}
            for pol, rep in reports.items()
        },
        "out_dir": out_dir,
    }


def crossover_from_csv(
    sweep_path: str, thresholds: list[float], out_dir: str | None = None
) -> dict:
    path = Path(sweep_path)
    if not path.exists():
        raise ConfigError(f"sweep file not found: {sweep_path}")
    try:
        points = outputs.read_sweep_points_csv(path)
    except ValueError as e:
        raise ConfigError(str(e)) from e
    return crossover_from_points(points, thresholds, out_dir)


def _ensure_mse_sums(points: list[dict]) -> list[dict]:
    """metrics.mse_curve pools mse_sum/mse_n; synthesize them from mean_mse
    rows (e.g. loaded from sweep_points.csv) when absent."""
    out = []
    for p in points:
        if "mse_sum" in p and "mse_n" in p:
            out.append(p)
        elif p.get("mean_mse") is None:
            continue
        else:
            q = dict(p)
            q["mse_sum"] = float(p["mean_mse"])
            q["mse_n"] = 1
            out.append(q)
    return out
