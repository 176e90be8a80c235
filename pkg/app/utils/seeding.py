from typing import Sequence
import numpy as np

# Stream tags keep derived generators for different roles disjoint.
SKETCH_STREAM = 0
SOLVER_STREAM = 1
QUERY_STREAM = 2
BASELINE_STREAM = 3
BOUNDS_STREAM = 4
DATA_STREAM = 5


def derive_rng(seed: int, key: Sequence[int]) -> np.random.Generator:
    """Build an independent generator for a (seed, key) pair.

    Args:
        seed: Master seed of the run
        key: Path identifying the consumer, e.g. (SKETCH_STREAM, pair, generation, guess, copy)

    Returns:
        A PCG64 generator whose stream depends only on seed and key
    """
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=tuple(int(part) for part in key))
    return np.random.default_rng(sequence)
