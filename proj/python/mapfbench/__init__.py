"""Multi-agent pathfinding environment and benchmark toolkit.

The environment lives in the native ``_core`` module; this package only
re-exports it and converts JSON results into Python objects.
"""

import json

from ._core import (
    ACTION_COUNT,
    Env,
    GridConfig,
    InstanceError,
    IoError,
    ParseError,
    __version__,
    bench,
    generate_maze,
    generate_random,
    generate_warehouse,
    get_map,
    map_names,
    reference_episode,
    register_map,
)
from . import _core

# Action ids, matching the core enumeration.
WAIT, UP, DOWN, LEFT, RIGHT = range(ACTION_COUNT)


def run_config(config_text, workers=1):
    """Evaluates a YAML/JSON config; returns (records, manifest)."""
    jsonl, manifest = _core.run_config(config_text, workers)
    records = [json.loads(line) for line in jsonl.splitlines() if line]
    return records, json.loads(manifest)


def compute_report(records):
    """Meta-metric report for records as returned by run_config."""
    jsonl = "".join(json.dumps(r) + "\n" for r in records)
    return json.loads(_core.compute_report(jsonl))


__all__ = [
    "ACTION_COUNT",
    "DOWN",
    "Env",
    "GridConfig",
    "InstanceError",
    "IoError",
    "LEFT",
    "ParseError",
    "RIGHT",
    "UP",
    "WAIT",
    "__version__",
    "bench",
    "compute_report",
    "generate_maze",
    "generate_random",
    "generate_warehouse",
    "get_map",
    "map_names",
    "reference_episode",
    "register_map",
    "run_config",
]
