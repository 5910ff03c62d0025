"""Python bindings for the replica teleoperation core."""

import json as _json
import os as _os

# Installed wheels carry the bundled scene next to the package.
_data = _os.path.join(_os.path.dirname(__file__), "data")
if _os.path.isdir(_data):
    _os.environ.setdefault("REPLICA_SCENE_DIR", _data)

from ._replica import (
    PROTOCOL_VERSION,
    ReplicaError,
    World,
    default_scene_world,
    load_scene_world,
    scene_world_from_json,
    mean_sd,
    paired_t_test,
    proportion,
    round_to,
    student_t_cdf,
    student_t_two_sided,
    sus_score,
    normalize_message,
)
from . import _replica


def default_scene():
    return _json.loads(_replica.default_scene_json())


def conformance_fixture():
    return _json.loads(_replica.conformance_fixture_json())


def latin_plan(subjects, seed):
    return _json.loads(_replica.latin_plan_json(subjects, seed))["subjects"]


def derive_timings(log_text):
    return _json.loads(_replica.derive_timings_json(log_text))


def affordances(world, robot):
    return _json.loads(world.affordances_json(robot))


def bodies(world):
    return _json.loads(world.bodies_json())


def run_headless(subjects=24, plan_seed=7, subject=1, seed=1):
    """Archive text of one scripted subject."""
    return _replica.run_headless_json(subjects, plan_seed, subject, seed)


def replay(archive_text):
    return _json.loads(_replica.replay_json(archive_text))
