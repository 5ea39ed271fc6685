"""V2G charging/discharging insurance toolkit (C++ core bindings)."""

from ._core import (
    config_hash,
    default_config,
    evaluate,
    exact_average_cost,
    exact_gradient,
    max_acceptable_premium,
    run_econ_csv,
    run_sweep_csv,
    run_train_csv,
    run_verify,
    run_voi_csv,
    train,
)

__all__ = [
    "config_hash",
    "default_config",
    "evaluate",
    "exact_average_cost",
    "exact_gradient",
    "max_acceptable_premium",
    "run_econ_csv",
    "run_sweep_csv",
    "run_train_csv",
    "run_verify",
    "run_voi_csv",
    "train",
]
