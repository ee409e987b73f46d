"""Force-torque guided stacking: spatial algebra, contact estimation and experiments."""

import json as _json

from ._stackplace import (  # noqa: F401
    DegenerateNormalForce,
    RigidTransform,
    ScenarioError,
    Wrench,
    estimate_contact,
    flat_direction,
    parse_scenario,
    plot_data,
    recover_contact_offset,
    run_scenario_json,
    tangent_projection,
    transform_wrench,
    wilson_interval,
)


def run_scenario(path, seed=None, jobs=1, out_dir=""):
    """Run a scenario file and return the report as a dict."""
    return _json.loads(run_scenario_json(str(path), seed, jobs, str(out_dir)))
