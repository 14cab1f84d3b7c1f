"""Fifth-order KdV simulator and weighted-norm diagnostics."""

import json

from ._kdv5 import (
    BlowUp,
    ConfigError,
    DomainTooSmall,
    Grid,
    NoContraction,
    conserved_quantities,
    default_calibration_path,
    derivative,
    fractional_derivative,
    free_propagate,
    gaussian,
    integrate,
    interpolation_ratio,
    l2_norm,
    lambda_norms,
    odd_weight,
    picard_solve,
    random_family,
    smooth_weight,
    sobolev_norm,
    truncated_weight,
    weighted_energy_residual,
    weighted_l2_norm,
)
from ._kdv5 import run_scenario as _run_scenario


def run_scenario(config, scenario, out=None, calibration=None):
    """Run a scenario from a config file and return the parsed summary."""
    return json.loads(_run_scenario(config, scenario, out, calibration))


__all__ = [
    "BlowUp",
    "ConfigError",
    "DomainTooSmall",
    "Grid",
    "NoContraction",
    "conserved_quantities",
    "default_calibration_path",
    "derivative",
    "fractional_derivative",
    "free_propagate",
    "gaussian",
    "integrate",
    "interpolation_ratio",
    "l2_norm",
    "lambda_norms",
    "odd_weight",
    "picard_solve",
    "random_family",
    "run_scenario",
    "smooth_weight",
    "sobolev_norm",
    "truncated_weight",
    "weighted_energy_residual",
    "weighted_l2_norm",
]
