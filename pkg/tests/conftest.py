import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # tests/oracles.py

from dpncb.envs import instance_from_spec


@pytest.fixture
def two_constant_instance():
    """k=2 deterministic instance: means 0.9 and 0.3."""
    return instance_from_spec(
        {
            "preset": "custom",
            "arms": [
                {"kind": "constant", "value": 0.9},
                {"kind": "constant", "value": 0.3},
            ],
        }
    )


@pytest.fixture
def all_kinds_instance():
    """One arm of every distribution kind."""
    return instance_from_spec(
        {
            "preset": "custom",
            "arms": [
                {"kind": "bernoulli", "p": 0.7},
                {"kind": "constant", "value": 0.5},
                {"kind": "beta", "a": 4, "b": 1},
                {"kind": "two_point", "lo": 0.4, "hi": 1.0, "p": 0.5},
                {"kind": "uniform01"},
            ],
        }
    )
