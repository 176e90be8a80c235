from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Set, Tuple
from app.models.config_models import ProblemConfig
from app.models.point_models import Point, WeightedInstance
from app.services.guess_grid import GuessGrid
from app.services.meyerson_sketch import Assignment, AssignmentKind
from app.services.metric import EUCLIDEAN, DistanceMeter, Metric
from app.services.shell_table import ShellTable, shell_radii
from app.services.smooth_histogram import CostHistogram, WeightHistogram
from app.utils.errors import SketchInvalidError

SketchView = Tuple[WeightedInstance, float]


class CopyLedger:
    """Sliding-window bookkeeping for one Meyerson copy.

    Shell tables are kept only when replacements are enabled.
    """

    def __init__(self, config: ProblemConfig, radii: List[float]):
        self.epsilon = config.epsilon
        self.window = config.window
        self.radii = radii
        self.keep_shells = config.use_replacements
        self.weights: List[WeightHistogram] = []
        self.shells: List[ShellTable] = []
        self.cost = CostHistogram(config.epsilon, config.cost_histogram_cap)

    def open_center(self, x: Point) -> None:
        histogram = WeightHistogram(self.epsilon, self.window)
        histogram.record_point(x.arrival_index)
        self.weights.append(histogram)
        if self.keep_shells:
            self.shells.append(ShellTable(x, self.radii))

    def close_last_center(self) -> None:
        self.weights.pop()
        if self.keep_shells:
            self.shells.pop()

    def record_assignment(self, record: Assignment) -> None:
        t = record.point.arrival_index
        self.weights[record.center_index].record_point(t)
        if self.keep_shells:
            self.shells[record.center_index].record(record.point, record.dp, t)
        self.cost.record(t, record.dp)

    def stored_items(self, center_count: int) -> int:
        return (
            center_count
            + sum(len(h) for h in self.weights)
            + sum(len(s) for s in self.shells)
            + len(self.cost)
        )


@dataclass
class AugmentedUpdate:
    """Undo information for one AugSketch update."""
    records: List[List[Assignment]]
    snapshots: Dict[Tuple[int, int], tuple] = field(default_factory=dict)


class AugSketch:
    """Guess grid of Meyerson copies with per-center weight histograms,
    shell tables and a per-copy cost histogram.
    """

    def __init__(self, config: ProblemConfig, seed_key: Sequence[int]):
        self.config = config
        self.grid = GuessGrid(config, seed_key)
        radii = shell_radii(config.epsilon, config.distance_bound ** config.p, config.shell_floor)
        self.ledgers: List[List[CopyLedger]] = [
            [CopyLedger(config, radii) for _ in multi.copies] for multi in self.grid.sketches
        ]
        self.points_seen = 0

    def update(
        self,
        x: Point,
        meter: DistanceMeter,
        metric: Metric = EUCLIDEAN,
        journal: bool = False,
        coins: Optional[Sequence[float]] = None
    ) -> AugmentedUpdate:
        """Insert x into every copy and record the resulting bookkeeping.

        With journal=True the returned record can be passed to rollback.
        coins are per-copy promotion draws shared by every guess; without
        them each copy draws from its own generator.
        """
        update = AugmentedUpdate(self.grid.update(x, meter, metric, coins))
        for g, copy_records in enumerate(update.records):
            for c, record in enumerate(copy_records):
                ledger = self.ledgers[g][c]
                if record.kind == AssignmentKind.NEW_CENTER:
                    ledger.open_center(x)
                elif record.kind == AssignmentKind.ASSIGNED:
                    if journal:
                        update.snapshots[(g, c)] = _snapshot(ledger, record.center_index)
                    ledger.record_assignment(record)
        self.points_seen += 1
        return update

    def rollback(self, update: AugmentedUpdate) -> None:
        """Undo a journaled update exactly."""
        for g, copy_records in enumerate(update.records):
            for c, record in enumerate(copy_records):
                ledger = self.ledgers[g][c]
                if record.kind == AssignmentKind.NEW_CENTER:
                    ledger.close_last_center()
                elif record.kind == AssignmentKind.ASSIGNED:
                    _restore(ledger, record.center_index, update.snapshots[(g, c)])
        self.grid.rollback(update.records)
        self.points_seen -= 1

    def selected(self) -> Optional[Tuple[int, int]]:
        """(guess, copy) the sketch answers from."""
        return self.grid.select_guess()

    def _require_selection(self) -> Tuple[int, int]:
        selection = self.selected()
        if selection is None:
            raise SketchInvalidError("Sketch invalid, widen bounds: no guess qualifies")
        return selection

    def instance(self) -> SketchView:
        """Consistent weighted instance and cost_mu of the selected copy."""
        g, c = self._require_selection()
        sketch = self.grid.copy_at(g, c)
        weights = [float(w) for w in sketch.weights]
        return WeightedInstance(list(sketch.centers), weights), sketch.cost_mu

    def suffix(self, tau: int) -> SketchView:
        """ε-consistent instance for the points that arrived at or after tau."""
        g, c = self._require_selection()
        sketch = self.grid.copy_at(g, c)
        ledger = self.ledgers[g][c]
        centers, weights = [], []
        for i, center in enumerate(sketch.centers):
            weight = ledger.weights[i].query(tau)
            if weight <= 0:
                continue
            replacement = ledger.shells[i].query(tau) if self.config.use_replacements else None
            centers.append(replacement if replacement is not None else center)
            weights.append(weight)
        return WeightedInstance(centers, weights), ledger.cost.query(tau)

    def held_points(self) -> Set[int]:
        """Arrival indices of every point referenced by a center or a shell."""
        held: Set[int] = set()
        for g, c, sketch in self.grid.all_copies():
            held.update(center.arrival_index for center in sketch.centers)
            for shells in self.ledgers[g][c].shells:
                held.update(point.arrival_index for point in shells.stored_points())
        return held

    def stored_points(self) -> int:
        """Distinct points held across all guesses and copies."""
        return len(self.held_points())

    def expire(self, tau: int) -> None:
        """Release shell representatives that arrived before tau."""
        for row in self.ledgers:
            for ledger in row:
                for shells in ledger.shells:
                    shells.expire(tau)

    def stored_items(self) -> int:
        return sum(
            self.ledgers[g][c].stored_items(len(sketch))
            for g, c, sketch in self.grid.all_copies()
        )

    def to_state(self) -> Dict[str, Any]:
        return {
            "grid": self.grid.to_state(),
            "points_seen": self.points_seen,
            "ledgers": [
                [
                    {
                        "weights": [h.to_state() for h in ledger.weights],
                        "shells": [s.to_state() for s in ledger.shells],
                        "cost": ledger.cost.to_state(),
                    }
                    for ledger in row
                ]
                for row in self.ledgers
            ],
        }

    @classmethod
    def from_state(cls, config: ProblemConfig, state: Dict[str, Any]) -> "AugSketch":
        sketch = cls.__new__(cls)
        sketch.config = config
        sketch.grid = GuessGrid.from_state(config, state["grid"])
        sketch.points_seen = state["points_seen"]
        radii = shell_radii(config.epsilon, config.distance_bound ** config.p, config.shell_floor)
        sketch.ledgers = []
        for row in state["ledgers"]:
            ledgers = []
            for entry in row:
                ledger = CopyLedger(config, radii)
                ledger.weights = [WeightHistogram.from_state(h) for h in entry["weights"]]
                ledger.shells = [ShellTable.from_state(s) for s in entry["shells"]]
                ledger.cost = CostHistogram.from_state(entry["cost"])
                ledgers.append(ledger)
            sketch.ledgers.append(ledgers)
        return sketch


def union(a: SketchView, b: SketchView) -> SketchView:
    """Join two sketch views: concatenate centers and weights, add costs."""
    instance_a, cost_a = a
    instance_b, cost_b = b
    joined = WeightedInstance(
        instance_a.centers + instance_b.centers,
        instance_a.weights + instance_b.weights
    )
    return joined, cost_a + cost_b


def _snapshot(ledger: CopyLedger, index: int) -> tuple:
    shells = ledger.shells[index].snapshot() if ledger.keep_shells else None
    return ledger.weights[index].snapshot(), shells, ledger.cost.snapshot()


def _restore(ledger: CopyLedger, index: int, snapshot: tuple) -> None:
    weights, shells, cost = snapshot
    ledger.weights[index].restore(weights)
    if shells is not None:
        ledger.shells[index].restore(shells)
    ledger.cost.restore(cost)
