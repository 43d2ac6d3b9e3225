"""Python bindings of the polarframes toolkit."""

import json

from ._polarframes import (
    ConnectionScalars,
    Error,
    InvalidConfig,
    NonpositiveLambda,
    SingularMetric,
    UnknownSurface,
    WrongSpectrum,
    catalog_names,
    eta_curvatures,
    invariants,
    pencil,
    point,
    polar_point,
    rotate_frame_scalars,
    rotation_invariants,
    run_json,
    shape_and_H,
)

__all__ = [
    "ConnectionScalars",
    "Error",
    "InvalidConfig",
    "NonpositiveLambda",
    "SingularMetric",
    "UnknownSurface",
    "WrongSpectrum",
    "catalog_names",
    "eta_curvatures",
    "invariants",
    "pencil",
    "point",
    "polar_point",
    "rotate_frame_scalars",
    "rotation_invariants",
    "run",
    "shape_and_H",
]


def run(config=None, **overrides):
    """Run the verification suites and return the report as a dict.

    `config` uses the same keys as the JSON config file of the command line
    tool; keyword arguments override top-level keys.
    """
    merged = dict(config or {})
    merged.update(overrides)
    return json.loads(run_json(json.dumps(merged)))
