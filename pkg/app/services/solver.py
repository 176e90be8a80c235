from typing import List, Tuple
import numpy as np
from app.models.point_models import Point, Solution, WeightedInstance, stack_coords
from app.services.metric import EUCLIDEAN, DistanceMeter, Metric, assign, weighted_cost

# Lloyd stops once a step improves the cost by less than this fraction.
RELATIVE_TOLERANCE = 1e-4


def _require_positive(instance: WeightedInstance) -> WeightedInstance:
    positive = instance.positive()
    if len(positive) == 0:
        raise ValueError("Cannot solve an instance without positive-weight centers")
    return positive


def weighted_seed(
    instance: WeightedInstance,
    k: int,
    p: float,
    rng: np.random.Generator,
    meter: DistanceMeter,
    metric: Metric = EUCLIDEAN
) -> List[Point]:
    """D^p seeding over a weighted instance.

    The first seed is drawn proportionally to weight, every later one
    proportionally to weight·d^p to the seeds chosen so far. Seeding stops
    early once every remaining center coincides with a seed.

    Args:
        instance: Weighted centers to pick from
        k: Maximum number of seeds
        p: Exponent of the clustering objective
        rng: Generator driving the draws
        meter: Distance counter

    Returns:
        Seeds drawn from instance.centers
    """
    positive = _require_positive(instance)
    coords = stack_coords(positive.centers)
    weights = np.asarray(positive.weights, dtype=float)

    first = int(rng.choice(len(positive), p=weights / weights.sum()))
    chosen = [first]
    min_dp = np.full(len(positive), np.inf)

    while len(chosen) < k:
        _, dists = assign(coords, coords[chosen[-1]][None, :], meter, metric)
        min_dp = np.minimum(min_dp, dists ** p)
        mass = weights * min_dp
        total = float(mass.sum())
        if total <= 0:
            break
        chosen.append(int(rng.choice(len(positive), p=mass / total)))

    return [positive.centers[i] for i in chosen]


def _lloyd_step(
    coords: np.ndarray,
    weights: np.ndarray,
    center_rows: List[int],
    meter: DistanceMeter,
    metric: Metric
) -> List[int]:
    """Move every center to its cluster's weighted centroid, snapped to the nearest member."""
    labels, _ = assign(coords, coords[center_rows], meter, metric)
    moved = []
    for j, row in enumerate(center_rows):
        members = np.flatnonzero(labels == j)
        if members.size == 0:
            moved.append(row)
            continue
        centroid = np.average(coords[members], axis=0, weights=weights[members])
        nearest, _ = assign(centroid[None, :], coords[members], meter, metric)
        moved.append(int(members[nearest[0]]))
    return moved


def _refine(
    instance: WeightedInstance,
    seeds: List[Point],
    p: float,
    lloyd_iters: int,
    meter: DistanceMeter,
    metric: Metric
) -> List[Point]:
    if p != 2 or lloyd_iters == 0:
        return seeds
    coords = stack_coords(instance.centers)
    weights = np.asarray(instance.weights, dtype=float)
    rows = [next(i for i, c in enumerate(instance.centers) if c is seed) for seed in seeds]
    cost = weighted_cost(instance, seeds, p, meter, metric)

    for _ in range(lloyd_iters):
        candidate_rows = _lloyd_step(coords, weights, rows, meter, metric)
        candidate = [instance.centers[i] for i in candidate_rows]
        candidate_cost = weighted_cost(instance, candidate, p, meter, metric)
        if candidate_cost > cost:
            break
        improvement = cost - candidate_cost
        rows, cost = candidate_rows, candidate_cost
        if cost == 0 or improvement < RELATIVE_TOLERANCE * (cost + improvement):
            break

    return [instance.centers[i] for i in rows]


def solve(
    instance: WeightedInstance,
    k: int,
    p: float,
    rng: np.random.Generator,
    meter: DistanceMeter,
    lloyd_iters: int = 10,
    restarts: int = 1,
    metric: Metric = EUCLIDEAN
) -> List[Point]:
    """Best of `restarts` seeded and refined runs; centers stay instance points."""
    positive = _require_positive(instance)
    best_centers: List[Point] = []
    best_cost = np.inf
    for _ in range(max(1, restarts)):
        seeds = weighted_seed(positive, k, p, rng, meter, metric)
        centers = _refine(positive, seeds, p, lloyd_iters, meter, metric)
        cost = weighted_cost(positive, centers, p, meter, metric)
        if cost < best_cost:
            best_centers, best_cost = centers, cost
    return best_centers


def estimated_cost(
    view: Tuple[WeightedInstance, float],
    centers: List[Point],
    p: float,
    meter: DistanceMeter,
    metric: Metric = EUCLIDEAN
) -> float:
    """2^{p-1}·(cost_mu + f_p(instance, weight, centers))."""
    instance, cost_mu = view
    return 2 ** (p - 1) * (cost_mu + weighted_cost(instance, centers, p, meter, metric))


def solve_view(
    view: Tuple[WeightedInstance, float],
    k: int,
    p: float,
    rng: np.random.Generator,
    meter: DistanceMeter,
    lloyd_iters: int = 10,
    restarts: int = 1,
    metric: Metric = EUCLIDEAN
) -> Solution:
    """Solve a sketch view and attach its estimated cost."""
    instance, cost_mu = view
    centers = solve(instance, k, p, rng, meter, lloyd_iters, restarts, metric)
    actual = weighted_cost(instance, centers, p, meter, metric)
    return Solution(
        centers=centers,
        estimated_cost=2 ** (p - 1) * (cost_mu + actual),
        actual_instance_cost=actual
    )
