"""Shared fixtures: an explicit-generator group file used by several suites."""
from __future__ import annotations

import json

import numpy as np
import pytest


@pytest.fixture(scope="session")
def f4_path(tmp_path_factory):
    # the 1152-element real reflection group from its four simple-root reflections
    roots = [
        (0.0, 1.0, -1.0, 0.0),
        (0.0, 0.0, 1.0, -1.0),
        (0.0, 0.0, 0.0, 1.0),
        (0.5, -0.5, -0.5, -0.5),
    ]
    gens = []
    for r in roots:
        v = np.array(r)
        gens.append((np.eye(4) - 2.0 * np.outer(v, v) / (v @ v)).tolist())
    path = tmp_path_factory.mktemp("explicit") / "f4.json"
    path.write_text(json.dumps({"field": "R", "generators": gens}))
    return str(path)
