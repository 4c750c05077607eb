"""Shared helpers: deterministic instance streams for seeded property loops."""

import random

from rcdkit.campaign import random_instance


def instance_stream(seed, count, max_points=10, max_denominator=64):
    """A reproducible list of random finite instances."""
    out = []
    for i in range(count):
        rng = random.Random(f"tests:{seed}:{i}")
        out.append(random_instance(rng, max_points, max_denominator))
    return out
