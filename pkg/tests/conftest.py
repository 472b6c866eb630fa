import pytest

from xrsim.engine import scenario_from_dict


def make_scenario(
    n_users=1,
    pd=0,
    fps=120.0,
    mbps=60.0,
    delay_bound_ms=2.5,
    policy="PF",
    seed=7,
    duration_ms=2000.0,
    warmup_ms=500.0,
    jitter=True,
    bler=0.01,
    **extra,
):
    cfg = {
        "duration_ms": duration_ms,
        "warmup_ms": warmup_ms,
        "seed": seed,
        "traffic": {"frame_rate_fps": fps, "data_rate_bps": mbps * 1e6},
        "radio": {"target_bler": bler},
        "scheduler": {"policy": policy},
        "edge": {"prediction_interval": pd, "delay_bound_ms": delay_bound_ms},
        "users": {"count": n_users},
    }
    if not jitter:
        cfg["traffic"].update({"jitter_std_ms": 0.0, "jitter_trunc_ms": 0.0})
    for key, val in extra.items():
        if isinstance(val, dict):
            cfg.setdefault(key, {}).update(val)
        else:
            cfg[key] = val
    return scenario_from_dict(cfg)


@pytest.fixture
def scenario_factory():
    return make_scenario
