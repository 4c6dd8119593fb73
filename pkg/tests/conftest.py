import random

import pytest

from threadlens.synth import SpikeConfig, SyntheticConfig, generate_synthetic

BASE_TIME = 1_700_000_000
DAY = 86_400


def make_config(
    posts=5,
    comments_per_post=(0, 30),
    max_depth=5,
    time_range=(BASE_TIME, BASE_TIME + DAY),
    toxicity_range=(0.0, 0.9),
    score_range=(-10, 50),
    tombstone_rate=0.05,
    spikes=(),
):
    return SyntheticConfig(
        posts=posts,
        comments_per_post=comments_per_post,
        max_depth=max_depth,
        time_range=time_range,
        toxicity_range=toxicity_range,
        score_range=score_range,
        tombstone_rate=tombstone_rate,
        spikes=list(spikes),
    )


def make_corpus(seed=1, **overrides):
    return generate_synthetic(make_config(**overrides), seed)


def spike_config(center, width=1200, count=40, toxicity=0.9, post_index=0):
    return SpikeConfig(post_index=post_index, center=center, width=width, count=count, toxicity=toxicity)


@pytest.fixture
def corpus():
    return make_corpus(seed=42)


@pytest.fixture
def rng():
    return random.Random(20240)
