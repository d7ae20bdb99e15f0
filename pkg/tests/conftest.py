from __future__ import annotations

import random

import pytest
from hypothesis import HealthCheck, settings

from bidgames.graphs import GameGraph, Outcome, make_graph

settings.register_profile(
    "suite", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("suite")


def random_bounded_game(
    rng: random.Random, max_v: int = 10, max_deg: int = 3, outcomes=None
) -> GameGraph:
    """Random DAG game: forward edges only, terminals get random outcomes."""
    n = rng.randint(2, max_v)
    red, blue, outcome = [], [], []
    for v in range(n):
        later = list(range(v + 1, n))
        r = rng.sample(later, min(len(later), rng.randint(0, max_deg))) if later else []
        b = rng.sample(later, min(len(later), rng.randint(0, max_deg))) if later else []
        red.append(r)
        blue.append(b)
        outcome.append(None)
    pool = outcomes or [Outcome.ALICE_WIN, Outcome.BOB_WIN, Outcome.TIE]
    for v in range(n):
        if not red[v] and not blue[v]:
            outcome[v] = rng.choice(pool)
    return make_graph([f"v{v}" for v in range(n)], 0, red, blue, outcome, n)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xB1D)
