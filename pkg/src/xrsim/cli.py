"""Command-line client: run scenarios, execute sweeps, compute crossovers,
dump link tables, serve the HTTP API.

Exit codes: 0 ok, 2 configuration error, 3 I/O error, 4 internal invariant
failure.  By default commands execute in-process; with --server URL the same
requests go to a remote xrsim service (bundles are then written server-side).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import yaml

from . import __version__
from .errors import ConfigError, InternalError
from .radio import RadioConfig, link_adaptation_tables
from .engine import apply_overrides
from .service import ops

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_INTERNAL = 4

_OUT_ENV = "XRSIM_OUT"


def _default_out() -> str:
    return os.environ.get(_OUT_ENV, "xrsim-out")


def _load_config(args) -> dict:
    data: dict = {}
    if args.config:
        path = Path(args.config)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        try:
            with open(path, encoding="utf-8") as fh:
                data = yaml.safe_load(fh) or {}
        except yaml.YAMLError as e:
            raise ConfigError(f"config file {path} is not valid YAML: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"config file {path}: top level must be a mapping")
    overrides = list(args.set or [])
    if getattr(args, "seed", None) is not None:
        overrides.append(f"seed={args.seed}")
    if overrides:
        data = apply_overrides(data, overrides)
    return data


def _parse_int_axis(text: str) -> list[int]:
    """Parse '1..15' / '1,2,5' / '1..4,8' into an integer list."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            raise ConfigError(f"empty axis component in {text!r}")
        if ".." in part:
            lo, hi = part.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    if not out:
        raise ConfigError(f"axis {text!r} is empty")
    return out


def _apply_sweep_flags(config: dict, args) -> dict:
    sweep = dict(config.get("sweep") or {})
    if args.users:
        sweep["num_users"] = _parse_int_axis(args.users)
    if args.pd:
        sweep["prediction_interval"] = _parse_int_axis(args.pd)
    if args.policy:
        sweep["policy"] = [p.strip() for p in args.policy.split(",") if p.strip()]
    if args.runs is not None:
        sweep["runs_per_point"] = args.runs
    if args.workers is not None:
        sweep["workers"] = args.workers
    config = dict(config)
    config["sweep"] = sweep
    return config


def _echo_extra(args) -> dict:
    return {
        "config_path": args.config,
        "overrides": list(args.set or []),
    }


# ------------------------------------------------------------------ commands


def cmd_validate(args) -> int:
    config = _load_config(args)
    violations = ops.validate_config(config)
    if violations:
        for v in violations:
            print(v)
        return EXIT_CONFIG
    print("ok")
    return EXIT_OK


def cmd_run(args) -> int:
    config = _load_config(args)
    out_dir = args.out or _default_out()
    if args.server:
        result = _remote(args.server, "POST", "/runs", {"scenario": config, "out_dir": out_dir})
    else:
        violations = ops.validate_config(config)
        if violations:
            raise ConfigError("; ".join(violations))
        result = ops.run_scenario(config, out_dir, extra=_echo_extra(args))
    summary = result["summary"]
    print(json.dumps({k: summary[k] for k in (
        "num_users", "policy", "prediction_interval", "satisfied_users",
        "delay_reliable_throughput", "mean_mse", "digest")}, indent=2, sort_keys=True))
    print(f"bundle: {result['out_dir']}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    config = _apply_sweep_flags(_load_config(args), args)
    sweep_cfg = config.get("sweep") or {}
    if not any(sweep_cfg.get(k) for k in ("num_users", "prediction_interval", "policy")):
        raise ConfigError("sweep: need at least one axis (--users / --pd / --policy)")
    out_dir = args.out or _default_out()
    if args.server:
        job = _remote(
            args.server, "POST", "/sweeps",
            {"scenario": config, "out_dir": out_dir, "workers": args.workers},
        )
        job = _poll_job(args.server, job)
        result = job["result"]
    else:
        violations = ops.validate_config(config)
        if violations:
            raise ConfigError("; ".join(violations))
        last = {"t": 0.0}

        def progress(done, total):
            now = time.monotonic()
            if now - last["t"] > 5.0 or done == total:
                last["t"] = now
                print(f"  {done}/{total} runs", file=sys.stderr)

        result = ops.run_sweep(config, out_dir, args.workers, progress, extra=_echo_extra(args))
    print(
        f"sweep complete: {result['total_runs']} runs "
        f"({result['failed_runs']} failed), bundle: {result['out_dir']}"
    )
    return EXIT_OK


def cmd_crossover(args) -> int:
    thresholds = [float(t) for t in args.thresholds.split(",") if t.strip()]
    out_dir = args.out or _default_out()
    if args.server:
        result = _remote(
            args.server, "POST", "/crossover",
            {"sweep_path": args.sweep, "thresholds": thresholds, "out_dir": out_dir},
        )
    else:
        result = ops.crossover_from_csv(args.sweep, thresholds, out_dir)
    print(json.dumps({"thresholds": result["thresholds"], "policies": result["policies"]},
                     indent=2, sort_keys=True))
    print(f"bundle: {out_dir}")
    return EXIT_OK


def cmd_tables(args) -> int:
    table = link_adaptation_tables(RadioConfig(overhead_frac=args.overhead))
    text = json.dumps(table, indent=2, sort_keys=True)
    if args.out:
        path = Path(args.out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text + "\n", encoding="utf-8")
        print(f"wrote {path}")
    else:
        print(text)
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="info")
    return EXIT_OK


# -------------------------------------------------------------- remote mode


def _remote(server: str, method: str, path: str, payload: dict) -> dict:
    import httpx

    url = server.rstrip("/") + path
    try:
        resp = httpx.request(method, url, json=payload, timeout=600.0)
    except httpx.HTTPError as e:
        raise OSError(f"cannot reach server {server}: {e}") from e
    if resp.status_code == 400 or resp.status_code == 422:
        raise ConfigError(f"server rejected request: {resp.text}")
    if resp.status_code >= 500:
        raise InternalError(f"server error: {resp.text}")
    return resp.json()


def _poll_job(server: str, job: dict) -> dict:
    import httpx

    url = server.rstrip("/") + f"/jobs/{job['job_id']}"
    while job["state"] in ("queued", "running"):
        time.sleep(1.0)
        try:
            job = httpx.get(url, timeout=60.0).json()
        except httpx.HTTPError as e:
            raise OSError(f"lost contact with server: {e}") from e
        print(f"  {job['done']}/{job['total']} runs", file=sys.stderr)
    if job["state"] == "failed":
        raise InternalError(f"sweep job failed: {job.get('error')}")
    return job


# ------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="xrsim", description=__doc__)
    parser.add_argument("--version", action="version", version=f"xrsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out_help="output bundle directory (default $XRSIM_OUT or ./xrsim-out)"):
        p.add_argument("--config", help="scenario config file (YAML)")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a config key (dotted path), repeatable")
        p.add_argument("--seed", type=int, help="override the scenario seed")
        p.add_argument("--out", help=out_help)
        p.add_argument("--server", help="run against a remote xrsim service URL")

    p = sub.add_parser("run", help="run one scenario and write its bundle")
    common(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="run a sweep over users/prediction/policy axes")
    common(p)
    p.add_argument("--users", help="user-count axis, e.g. 1..15 or 2,4,8")
    p.add_argument("--pd", help="prediction-interval axis, e.g. 0,1,2")
    p.add_argument("--policy", help="policy axis, e.g. PF,DRR,MAX_CQI")
    p.add_argument("--runs", type=int, help="independent runs per point")
    p.add_argument("--workers", type=int, help="parallel worker processes")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("crossover", help="compute gamma/c points from a sweep table")
    p.add_argument("--sweep", required=True, help="sweep.csv or sweep_points.csv path")
    p.add_argument("--thresholds", default="0.02,0.035,0.04",
                   help="comma-separated MSE thresholds")
    p.add_argument("--out", help="output directory for crossover.json")
    p.add_argument("--server", help="run against a remote xrsim service URL")
    p.set_defaults(func=cmd_crossover)

    p = sub.add_parser("tables", help="dump the CQI/efficiency tables")
    p.add_argument("--overhead", type=float, default=RadioConfig().overhead_frac)
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("validate", help="validate a scenario config")
    p.add_argument("--config", help="scenario config file (YAML)")
    p.add_argument("--set", action="append", metavar="KEY=VALUE")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("serve", help="serve the HTTP API")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except InternalError as e:
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except OSError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
