"""Discrete predictable compensators of fractional Brownian motion.

The heavy lifting lives in the C++ core; this package re-exports it and adds
a dict-returning convenience wrapper around the experiment runners.
"""

import json

from fbmlab._core import (
    Partition,
    __version__,
    analytic_energy,
    decompose,
    fbm_covariance,
    increment_covariance,
    jacod_sum,
    predictor_weights,
    quadratic_variation,
    run_experiment_json,
    sample_increments,
)

__all__ = [
    "Partition",
    "__version__",
    "analytic_energy",
    "decompose",
    "fbm_covariance",
    "increment_covariance",
    "jacod_sum",
    "predictor_weights",
    "quadratic_variation",
    "run_experiment",
    "run_experiment_json",
    "sample_increments",
]


def run_experiment(command, **kwargs):
    """Run one named experiment and return its report as a dict.

    Accepts the same keyword arguments as :func:`run_experiment_json`
    (hurst, horizon, levels, paths, seed, ridge, eps_sup, probe_time,
    allow_large). Violated asserted bounds are listed under
    ``report["violations"]``; an empty list means every bound held.
    """
    text, violations = run_experiment_json(command, **kwargs)
    report = json.loads(text)
    report["violations"] = list(violations)
    return report
