from itertools import combinations
from typing import List, Tuple
import numpy as np
from app.models.point_models import Point, stack_coords
from app.services.metric import EUCLIDEAN, DistanceMeter, Metric

# Exhaustive enumeration is only tractable on tiny inputs.
BRUTE_FORCE_LIMIT = 20


def brute_force_opt(
    points: List[Point],
    k: int,
    p: float,
    meter: DistanceMeter,
    metric: Metric = EUCLIDEAN
) -> Tuple[float, List[Point]]:
    """Exact k-clustering with centers restricted to the input points.

    Raises:
        ValueError: If there are more than BRUTE_FORCE_LIMIT points, or none
    """
    if len(points) > BRUTE_FORCE_LIMIT:
        raise ValueError(f"Brute force limited to {BRUTE_FORCE_LIMIT} points, got {len(points)}")
    if not points:
        raise ValueError("Cannot cluster an empty point set")

    coords = stack_coords(points)
    powered = metric.pairwise(coords, coords) ** p
    meter.add(powered.size)

    best_cost, best_subset = np.inf, ()
    for subset in combinations(range(len(points)), min(k, len(points))):
        cost = float(powered[:, subset].min(axis=1).sum())
        if cost < best_cost:
            best_cost, best_subset = cost, subset
    return best_cost, [points[i] for i in best_subset]
