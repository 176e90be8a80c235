from dataclasses import dataclass, field
from typing import List, Optional
import numpy as np


@dataclass(frozen=True, eq=False)
class Point:
    """A stream element: coordinates plus its 1-based arrival index.

    Identity is (coords, arrival_index); duplicates of the same coordinates
    may arrive at different times.
    """
    coords: np.ndarray
    arrival_index: int

    @property
    def dimension(self) -> int:
        return int(self.coords.shape[0])

    @classmethod
    def of(cls, coords, arrival_index: int) -> "Point":
        """Build a point from any coordinate sequence."""
        array = np.asarray(coords, dtype=float).reshape(-1)
        array.setflags(write=False)
        return cls(coords=array, arrival_index=int(arrival_index))


def stack_coords(points: List[Point]) -> np.ndarray:
    """Stack point coordinates into an (n, d) matrix."""
    if not points:
        return np.empty((0, 0))
    return np.vstack([point.coords for point in points])


@dataclass
class WeightedInstance:
    """Center points with nonnegative real weights."""
    centers: List[Point] = field(default_factory=list)
    weights: List[float] = field(default_factory=list)

    def __post_init__(self):
        if len(self.centers) != len(self.weights):
            raise ValueError("Weighted instance needs one weight per center")
        if any(weight < 0 for weight in self.weights):
            raise ValueError("Weights must be nonnegative")

    def __len__(self) -> int:
        return len(self.centers)

    @property
    def total_weight(self) -> float:
        return float(sum(self.weights))

    def positive(self) -> "WeightedInstance":
        """Return the sub-instance of centers with positive weight."""
        kept = [(c, w) for c, w in zip(self.centers, self.weights) if w > 0]
        return WeightedInstance([c for c, _ in kept], [w for _, w in kept])

    @classmethod
    def unit(cls, points: List[Point]) -> "WeightedInstance":
        """Unit-weight instance over raw points."""
        return cls(list(points), [1.0] * len(points))


@dataclass
class Solution:
    """A set of at most k centers with its sketch-side cost estimate."""
    centers: List[Point]
    estimated_cost: float
    actual_instance_cost: float
    lambda_value: Optional[float] = None
    branch: Optional[str] = None
    query_mode: Optional[str] = None
