"""Keyed deterministic RNG substreams.

Every stochastic step derives its own generator from (seed, domain, *key),
so a value never depends on iteration order: regenerating any single
citizen, rating row or hold-out mask yields the same draw regardless of
what was sampled before it. Domains keep the sampling stages off each
other's streams.
"""

import numpy as np

CITIZEN_DOMAIN = 1
NOISE_DOMAIN = 2
HOLDOUT_DOMAIN = 3


def substream(seed: int, domain: int, *key: int) -> np.random.Generator:
    """Generator for one keyed substream of the master seed."""
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    return np.random.default_rng(np.random.SeedSequence([seed, domain, *key]))
