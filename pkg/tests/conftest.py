"""Shared fixtures: the named origami registry and a seed-deterministic
random origami sample reused across property suites."""

import random

import pytest

from origami_forge.origami import (
    l_origami,
    o14,
    random_origami,
    wollmilchsau,
    x_origami,
)

SEED = 20240817
SWEEP_COUNT = 200
SWEEP_MAX_D = 12


def named_fixtures():
    return [
        ("wollmilchsau", wollmilchsau()),
        ("o14", o14()),
        ("l22", l_origami(2, 2)),
        ("l23", l_origami(2, 3)),
        ("l32", l_origami(3, 2)),
        ("x3", x_origami(3)),
        ("x4", x_origami(4)),
    ]


@pytest.fixture(scope="session")
def fixture_origamis():
    return named_fixtures()


@pytest.fixture(scope="session")
def random_sample():
    """200 transitive origamis with d <= 12, derived from a fixed seed."""
    sample = []
    for i in range(SWEEP_COUNT):
        rng = random.Random(f"{SEED}:{i}")
        d = rng.randint(2, SWEEP_MAX_D)
        sample.append((i, random_origami(rng, d)))
    return sample
