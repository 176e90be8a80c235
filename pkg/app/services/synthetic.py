from typing import List, Tuple
import numpy as np
from app.models.point_models import Point

# Rejection attempts before the placement box is enlarged.
PLACEMENT_ATTEMPTS = 1000


def _place_centers(k_true: int, d: int, separation: float, rng: np.random.Generator) -> np.ndarray:
    """Uniform centers in a box, pairwise at least `separation` apart."""
    side = separation * max(2.0, k_true ** (1.0 / d)) * 2
    centers: List[np.ndarray] = []
    failures = 0
    while len(centers) < k_true:
        candidate = rng.uniform(0.0, side, size=d)
        if all(np.linalg.norm(candidate - c) >= separation for c in centers):
            centers.append(candidate)
            continue
        failures += 1
        if failures >= PLACEMENT_ATTEMPTS:
            side *= 1.5
            failures = 0
    return np.vstack(centers)


def synth_sset(
    n: int,
    k_true: int,
    d: int,
    separation: float,
    rng: np.random.Generator
) -> Tuple[List[Point], List[int]]:
    """Isotropic unit-variance Gaussian blobs with ground-truth labels.

    Cluster centers sit at pairwise distance ≥ separation·σ (σ = 1); labels
    are assigned round-robin so cluster sizes differ by at most one.

    Returns:
        Points with arrival indices 1..n, and their labels
    """
    if k_true < 1 or d < 1 or separation <= 0 or n < 0:
        raise ValueError("synth_sset parameters must be positive")
    if n == 0:
        return [], []
    centers = _place_centers(k_true, d, separation, rng)
    labels = [i % k_true for i in range(n)]
    noise = rng.standard_normal(size=(n, d))
    coords = centers[labels] + noise
    points = [Point.of(row, i + 1) for i, row in enumerate(coords)]
    return points, labels
