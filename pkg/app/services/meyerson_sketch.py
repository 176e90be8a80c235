from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence
import numpy as np
from app.models.point_models import Point
from app.services.metric import EUCLIDEAN, DistanceMeter, Metric, assign
from app.utils.logger_config import get_logger

logger = get_logger(__name__)


class AssignmentKind(str, Enum):
    NEW_CENTER = "new_center"
    ASSIGNED = "assigned"
    DROPPED = "dropped"
    SKIPPED = "skipped"


@dataclass
class Assignment:
    """What one update did to one copy, with enough state to undo it."""
    kind: AssignmentKind
    point: Point
    center_index: int = -1
    dp: float = 0.0
    previous_cost_mu: float = 0.0
    previous_center_cost: float = 0.0


class SingleSketch:
    """One Meyerson run for a fixed guess L^p of the optimum."""

    def __init__(self, guess: float, size_cap: int, sampling_factor: float, p: float):
        self.guess = guess
        self.size_cap = size_cap
        self.sampling_factor = sampling_factor
        self.p = p
        self.centers: List[Point] = []
        self.weights: List[int] = []
        self.center_costs: List[float] = []
        self.cost_mu = 0.0
        self.closed = False
        self._coords: Optional[np.ndarray] = None

    def __len__(self) -> int:
        return len(self.centers)

    def acceptance_probability(self, dp: float) -> float:
        """min(k(1+log Δ)·d^p / L^p, 1)."""
        return min(self.sampling_factor * dp / self.guess, 1.0)

    def update(
        self,
        x: Point,
        rng: np.random.Generator,
        meter: DistanceMeter,
        metric: Metric = EUCLIDEAN,
        coin: Optional[float] = None
    ) -> Assignment:
        """Process one point: open it as a center or map it to the nearest one.

        The promotion draw is coin when given, otherwise the next value of rng.
        A closed sketch ignores the point and reports SKIPPED.
        """
        if self.closed:
            return Assignment(AssignmentKind.SKIPPED, x)
        if not self.centers:
            return self._open_center(x)

        indices, dists = assign(x.coords[None, :], self._coords, meter, metric)
        index, dp = int(indices[0]), float(dists[0]) ** self.p
        draw = rng.random() if coin is None else coin
        if draw < self.acceptance_probability(dp):
            if len(self.centers) + 1 > self.size_cap:
                self.closed = True
                logger.warning(f"Meyerson copy for guess {self.guess:.4g} closed at size cap {self.size_cap}")
                return Assignment(AssignmentKind.DROPPED, x)
            return self._open_center(x)

        record = Assignment(
            AssignmentKind.ASSIGNED, x, index, dp,
            previous_cost_mu=self.cost_mu,
            previous_center_cost=self.center_costs[index]
        )
        self.weights[index] += 1
        self.center_costs[index] += dp
        self.cost_mu += dp
        return record

    def rollback(self, record: Assignment) -> None:
        """Undo the effect of the update that produced record."""
        if record.kind == AssignmentKind.NEW_CENTER:
            self.centers.pop()
            self.weights.pop()
            self.center_costs.pop()
            self._coords = self._coords[:-1] if self.centers else None
        elif record.kind == AssignmentKind.ASSIGNED:
            self.weights[record.center_index] -= 1
            self.center_costs[record.center_index] = record.previous_center_cost
            self.cost_mu = record.previous_cost_mu
        elif record.kind == AssignmentKind.DROPPED:
            self.closed = False

    def _open_center(self, x: Point) -> Assignment:
        self.centers.append(x)
        self.weights.append(1)
        self.center_costs.append(0.0)
        row = x.coords[None, :]
        self._coords = row.copy() if self._coords is None else np.vstack([self._coords, row])
        return Assignment(AssignmentKind.NEW_CENTER, x, len(self.centers) - 1, 0.0)

    def to_state(self) -> Dict[str, Any]:
        return {
            "guess": self.guess,
            "size_cap": self.size_cap,
            "sampling_factor": self.sampling_factor,
            "p": self.p,
            "centers": [point_to_state(c) for c in self.centers],
            "weights": list(self.weights),
            "center_costs": list(self.center_costs),
            "cost_mu": self.cost_mu,
            "closed": self.closed,
        }

    @classmethod
    def from_state(cls, state: Dict[str, Any]) -> "SingleSketch":
        sketch = cls(state["guess"], state["size_cap"], state["sampling_factor"], state["p"])
        sketch.centers = [point_from_state(c) for c in state["centers"]]
        sketch.weights = list(state["weights"])
        sketch.center_costs = list(state["center_costs"])
        sketch.cost_mu = state["cost_mu"]
        sketch.closed = state["closed"]
        if sketch.centers:
            sketch._coords = np.vstack([c.coords for c in sketch.centers])
        return sketch


class MultiSketch:
    """Independent copies of a SingleSketch sharing one guess and size cap."""

    def __init__(self, copies: List[SingleSketch], rngs: List[np.random.Generator]):
        if len(copies) != len(rngs):
            raise ValueError("Each Meyerson copy needs its own random stream")
        self.copies = copies
        self.rngs = rngs

    def update(
        self,
        x: Point,
        meter: DistanceMeter,
        metric: Metric = EUCLIDEAN,
        coins: Optional[Sequence[float]] = None
    ) -> List[Assignment]:
        """Feed x to every copy; closed copies report SKIPPED.

        coins, when given, holds one promotion draw per copy.
        """
        return [
            sketch.update(x, rng, meter, metric, None if coins is None else float(coins[c]))
            for c, (sketch, rng) in enumerate(zip(self.copies, self.rngs))
        ]

    def select_copy(self) -> Optional[int]:
        """Index of the open copy with minimum cost_mu, or None if all are closed."""
        open_copies = [i for i, sketch in enumerate(self.copies) if not sketch.closed]
        if not open_copies:
            return None
        return min(open_copies, key=lambda i: self.copies[i].cost_mu)


def point_to_state(point: Point) -> Dict[str, Any]:
    return {"coords": [float(v) for v in point.coords], "t": point.arrival_index}


def point_from_state(state: Dict[str, Any]) -> Point:
    return Point.of(state["coords"], state["t"])
