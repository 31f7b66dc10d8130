"""Seeded, counter-based random streams.

Every stream is a Philox generator keyed by ``SeedSequence(seed, spawn_key)``.
A Monte Carlo run asks for ``make_rng(master_seed, run_index)``, so the
stream a run sees depends only on its index and never on scheduling.
"""
import numpy as np

DEFAULT_SEED = 20130917


def make_rng(seed=DEFAULT_SEED, *keys):
    if isinstance(seed, np.random.Generator):
        if keys:
            raise TypeError("cannot derive keyed streams from an existing Generator")
        return seed
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.Philox(ss))


def uniform_open(rng, size):
    """Uniform draws on the open interval (0, 1)."""
    u = rng.random(size)
    # random() is on [0, 1); map the single excluded endpoint away from 0
    return np.where(u == 0.0, np.nextafter(0.0, 1.0), u)
