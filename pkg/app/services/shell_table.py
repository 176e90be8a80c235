from bisect import bisect_left
from typing import Any, Dict, List, Optional, Tuple
from app.models.point_models import Point
from app.services.meyerson_sketch import point_from_state, point_to_state
from app.utils.errors import DistanceBoundError


def shell_radii(epsilon: float, power_bound: float, floor: float = 1.0) -> List[float]:
    """Radii floor·(1+ε)^i up to the first value ≥ Δ^p."""
    radii = [floor]
    while radii[-1] < power_bound:
        radii.append(floor * (1 + epsilon) ** len(radii))
    return radii


class ShellTable:
    """Last point seen in each concentric shell around one center.

    Serves ε-replacements: a point of the suffix whose p-th power distance to
    the center is within (1+ε) of the closest suffix point mapped to it.
    """

    def __init__(self, center: Point, radii: List[float]):
        self.center = center
        self.radii = radii
        self.points: List[Optional[Point]] = [center] * len(radii)
        self.times: List[int] = [center.arrival_index] * len(radii)

    def __len__(self) -> int:
        return len(self.radii)

    def record(self, x: Point, dp: float, t: int) -> None:
        """Write (x, t) into every shell whose radius is at least dp."""
        if dp > self.radii[-1]:
            raise DistanceBoundError(
                f"Mapping distance^p {dp:.6g} exceeds bound {self.radii[-1]:.6g}"
            )
        for i in range(bisect_left(self.radii, dp), len(self.radii)):
            self.points[i] = x
            self.times[i] = t

    def query(self, tau: int) -> Optional[Point]:
        """Representative from the smallest shell refreshed at or after tau."""
        if self.center.arrival_index >= tau:
            return self.center
        i = bisect_left(self.times, tau)
        return self.points[i] if i < len(self.times) else None

    def expire(self, tau: int) -> None:
        """Forget representatives recorded before tau.

        Queries for a later tau never return them.
        """
        for i in range(bisect_left(self.times, tau)):
            self.points[i] = None

    def stored_points(self) -> List[Point]:
        seen = {}
        for point in self.points:
            if point is not None:
                seen.setdefault(point.arrival_index, point)
        return list(seen.values())

    def snapshot(self) -> Tuple[List[Optional[Point]], List[int]]:
        return list(self.points), list(self.times)

    def restore(self, snapshot: Tuple[List[Optional[Point]], List[int]]) -> None:
        points, times = snapshot
        self.points, self.times = list(points), list(times)

    def to_state(self) -> Dict[str, Any]:
        return {
            "center": point_to_state(self.center),
            "radii": self.radii,
            "points": [point_to_state(p) if p is not None else None for p in self.points],
            "times": self.times,
        }

    @classmethod
    def from_state(cls, state: Dict[str, Any]) -> "ShellTable":
        table = cls(point_from_state(state["center"]), list(state["radii"]))
        table.points = [point_from_state(p) if p is not None else None for p in state["points"]]
        table.times = list(state["times"])
        return table
