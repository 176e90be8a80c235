import threading
from abc import ABC, abstractmethod
from typing import List, Optional, Tuple
import numpy as np
from app.models.point_models import Point, WeightedInstance, stack_coords


class DistanceMeter:
    """Counts distance evaluations; the update-time proxy of every experiment.

    Workers may fork a private meter and merge it back at a synchronization
    point so that totals stay exact.
    """

    def __init__(self, count: int = 0):
        self.count = count
        self._lock = threading.Lock()

    def add(self, evaluations: int) -> None:
        with self._lock:
            self.count += int(evaluations)

    def fork(self) -> "DistanceMeter":
        return DistanceMeter()

    def merge(self, other: "DistanceMeter") -> None:
        self.add(other.count)
        other.count = 0


class Metric(ABC):
    """Distance function over point coordinates."""

    @abstractmethod
    def pairwise(self, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        """Return the (len(left), len(right)) matrix of distances."""


class EuclideanMetric(Metric):
    """Euclidean distance, the metric of all shipped experiments."""

    def pairwise(self, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        if left.shape[1] != right.shape[1]:
            raise ValueError(
                f"Dimension mismatch: {left.shape[1]} vs {right.shape[1]}"
            )
        diff = left[:, None, :] - right[None, :, :]
        return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


EUCLIDEAN = EuclideanMetric()


def distance(a: Point, b: Point, meter: DistanceMeter, metric: Metric = EUCLIDEAN) -> float:
    """Distance between two points; counts one evaluation."""
    if a.dimension != b.dimension:
        raise ValueError(f"Dimension mismatch: {a.dimension} vs {b.dimension}")
    meter.add(1)
    return float(metric.pairwise(a.coords[None, :], b.coords[None, :])[0, 0])


def assign(
    coords: np.ndarray,
    center_coords: np.ndarray,
    meter: DistanceMeter,
    metric: Metric = EUCLIDEAN
) -> Tuple[np.ndarray, np.ndarray]:
    """Nearest center index and distance for every row of coords.

    Ties break toward the lowest center index.
    """
    if center_coords.shape[0] == 0:
        raise ValueError("Cannot assign points to an empty center set")
    if coords.shape[0] == 0:
        return np.empty(0, dtype=int), np.empty(0)
    matrix = metric.pairwise(coords, center_coords)
    meter.add(matrix.size)
    indices = np.argmin(matrix, axis=1)
    return indices, matrix[np.arange(matrix.shape[0]), indices]


def nearest_center(
    x: Point,
    centers: List[Point],
    meter: Optional[DistanceMeter] = None,
    metric: Metric = EUCLIDEAN
) -> Tuple[int, float]:
    """Index of the closest center (lowest index on ties) and its distance."""
    if not centers:
        raise ValueError("Cannot find nearest center in an empty set")
    indices, dists = assign(
        x.coords[None, :], stack_coords(centers), meter or DistanceMeter(), metric
    )
    return int(indices[0]), float(dists[0])


def clustering_cost(
    points: List[Point],
    centers: List[Point],
    p: float,
    meter: DistanceMeter,
    metric: Metric = EUCLIDEAN
) -> float:
    """f_p(X, C): sum over points of the p-th power of the distance to C."""
    if not centers:
        raise ValueError("Cannot evaluate cost against an empty center set")
    if not points:
        return 0.0
    _, dists = assign(stack_coords(points), stack_coords(centers), meter, metric)
    return float(np.sum(dists ** p))


def weighted_cost(
    instance: WeightedInstance,
    centers: List[Point],
    p: float,
    meter: DistanceMeter,
    metric: Metric = EUCLIDEAN
) -> float:
    """f_p(X, weight, C): weight-scaled clustering cost."""
    if not centers:
        raise ValueError("Cannot evaluate cost against an empty center set")
    if len(instance) == 0:
        return 0.0
    _, dists = assign(stack_coords(instance.centers), stack_coords(centers), meter, metric)
    return float(np.dot(np.asarray(instance.weights, dtype=float), dists ** p))
