"""Series elastic actuator motion control: simulation and synthesis."""

import json as _json

from ._seactrl import (
    campaign_json,
    campaign_names,
    campaign_summary,
    default_scenario_json,
    run_json,
)

__version__ = "0.1.0"

__all__ = [
    "campaign_json",
    "campaign_names",
    "campaign_summary",
    "default_scenario_json",
    "run",
    "run_json",
]


def run(scenario=None, *, decimate=1):
    """Simulate a scenario and return the packaged result.

    ``scenario`` may be a dict (serialized to JSON), a JSON string, a
    built-in campaign name, or ``None`` for the default scenario.  See
    :func:`run_json` for the shape of the returned dict.
    """
    if scenario is None:
        text = "{}"
    elif isinstance(scenario, dict):
        text = _json.dumps(scenario)
    elif scenario in campaign_names():
        text = campaign_json(scenario)
    else:
        text = scenario
    return run_json(text, decimate=decimate)
