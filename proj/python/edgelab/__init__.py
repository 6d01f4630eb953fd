"""Edge universality toolkit for the elliptic random normal matrix model."""

import json

from ._edgelab import (
    DomainError,
    Error,
    UsageError,
    edge_density_leading,
    edge_density_prediction,
    edge_kernel_prediction,
    edge_point,
    erfc,
    erfcx,
    experiment_names,
    fit_convergence_rate,
    kernel_contour,
    kernel_exact,
    normalized_kernel,
    report_json,
    rho1,
    scaled_edge_density,
)


def verify(target="all", config="", threads=0):
    """Run experiments and return their reports as dictionaries."""
    return json.loads(report_json(target, config, threads))["reports"]


__all__ = [
    "DomainError",
    "Error",
    "UsageError",
    "edge_density_leading",
    "edge_density_prediction",
    "edge_kernel_prediction",
    "edge_point",
    "erfc",
    "erfcx",
    "experiment_names",
    "fit_convergence_rate",
    "kernel_contour",
    "kernel_exact",
    "normalized_kernel",
    "report_json",
    "rho1",
    "scaled_edge_density",
    "verify",
]
