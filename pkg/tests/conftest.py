"""Shared fixtures: the seeded desk-scale dataset collections used by the
acceptance trend checks are expensive to generate, so they are built once
per session."""

import pytest

from sketchnet.bench import SynthConfig, gen_synthetic

DESK_LINEAR_SEEDS = (100, 101, 102, 103, 104)
DESK_POLY_SEEDS = (300, 301, 302, 303, 304)


@pytest.fixture(scope="session")
def desk_linear_datasets():
    return [gen_synthetic(SynthConfig(seed=s)) for s in DESK_LINEAR_SEEDS]


@pytest.fixture(scope="session")
def desk_poly_datasets():
    return [gen_synthetic(SynthConfig(min_term_card=2, max_term_card=3, seed=s))
            for s in DESK_POLY_SEEDS]
