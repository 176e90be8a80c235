import math
from typing import Any, Dict, List, MutableMapping, Optional, Sequence, Set, Tuple
from app.models.config_models import ProblemConfig, UpdateMode
from app.models.point_models import Point
from app.services.augmented_sketch import AugSketch, AugmentedUpdate
from app.services.meyerson_sketch import AssignmentKind
from app.services.metric import EUCLIDEAN, DistanceMeter, Metric
from app.services.solver import solve_view
from app.utils.errors import SketchInvalidError
from app.utils.logger_config import get_logger
from app.utils.seeding import SKETCH_STREAM, SOLVER_STREAM, derive_rng

logger = get_logger(__name__)


class LambdaPairState:
    """Two sketches over consecutive substreams A and B for one cost threshold λ.

    B always ends at the latest point. Whenever extending B would push its
    estimated solution cost above λ, B becomes A and a fresh B starts at the
    point that caused the overflow.

    Solver draws depend on shared_key, the start of B and the time only, so
    pairs of one clusterer whose B started together evaluate identically.
    """

    def __init__(
        self,
        config: ProblemConfig,
        lam: float,
        seed_key: Sequence[int],
        shared_key: Sequence[int] = ()
    ):
        self.config = config
        self.lam = lam
        self.seed_key = tuple(seed_key)
        self.shared_key = tuple(shared_key)
        self.s1: Optional[AugSketch] = None
        self.s2: Optional[AugSketch] = None
        self.a_start: Optional[int] = None
        self.a_end: Optional[int] = None
        self.b_start: Optional[int] = None
        self.generation = 0
        self.rotations = 0

        # Estimated costs at the last evaluation, kept for diagnostics and invariant checks
        self.s1_cost = 0.0
        self.s2_cost = 0.0
        self.rotation_cost: Optional[float] = None

        # Lazy re-evaluation baseline for S2
        self.eval_selection: Optional[Tuple[int, int]] = None
        self.eval_weights: List[int] = []
        self.eval_costs: List[float] = []

    @property
    def a_length(self) -> int:
        if self.a_start is None:
            return 0
        return self.a_end - self.a_start + 1

    def b_length(self, t: int) -> int:
        if self.b_start is None:
            return 0
        return t - self.b_start + 1

    def update(
        self,
        x: Point,
        meter: DistanceMeter,
        metric: Metric = EUCLIDEAN,
        coins: Optional[Sequence[float]] = None,
        evaluations: Optional[MutableMapping[int, float]] = None
    ) -> None:
        """Advance the pair by one point in the configured update mode.

        Args:
            x: Next stream point
            meter: Distance counter
            metric: Distance function
            coins: Per-copy promotion draws for x shared with other sketches
            evaluations: Estimated costs at this time keyed by the start of B,
                shared by the pairs of one clusterer
        """
        if self.s2 is None:
            self._start_b(x, meter, metric, coins)
            return
        if self.config.update_mode == UpdateMode.EXACT:
            self._exact_update(x, meter, metric, coins, evaluations)
        else:
            self._lazy_update(x, meter, metric, coins, evaluations)

    def _new_sketch(self) -> AugSketch:
        sketch = AugSketch(self.config, self.seed_key + (SKETCH_STREAM, self.generation))
        self.generation += 1
        return sketch

    def _start_b(self, x: Point, meter: DistanceMeter, metric: Metric, coins) -> None:
        self.s2 = self._new_sketch()
        self.s2.update(x, meter, metric, coins=coins)
        self.b_start = x.arrival_index
        self.s2_cost = 0.0
        self._mark_evaluated()

    def _evaluate(self, t: int, meter: DistanceMeter, metric: Metric, evaluations) -> float:
        """Estimated cost of solving S2's consistent instance; ∞ if no guess qualifies."""
        if evaluations is not None and self.b_start in evaluations:
            return evaluations[self.b_start]
        try:
            view = self.s2.instance()
        except SketchInvalidError:
            cost = math.inf
        else:
            rng = derive_rng(self.config.seed, self.shared_key + (SOLVER_STREAM, self.b_start, t))
            cost = solve_view(
                view, self.config.k, self.config.p, rng, meter,
                self.config.lloyd_iters, self.config.solver_restarts, metric
            ).estimated_cost
        if evaluations is not None:
            evaluations[self.b_start] = cost
        return cost

    def _exact_update(self, x: Point, meter: DistanceMeter, metric: Metric, coins, evaluations) -> None:
        """Tentatively add x, evaluate every time and undo the insert on overflow."""
        update = self.s2.update(x, meter, metric, journal=True, coins=coins)
        cost = self._evaluate(x.arrival_index, meter, metric, evaluations)
        if cost <= self.lam:
            self.s2_cost = cost
            return
        self.s2.rollback(update)
        self._rotate(x, cost, meter, metric, coins)

    def _lazy_update(self, x: Point, meter: DistanceMeter, metric: Metric, coins, evaluations) -> None:
        update = self.s2.update(x, meter, metric, journal=True, coins=coins)
        if not self._needs_evaluation(update):
            return
        cost = self._evaluate(x.arrival_index, meter, metric, evaluations)
        if cost <= self.lam:
            self.s2_cost = cost
            self._mark_evaluated()
            return
        self.s2.rollback(update)
        self._rotate(x, cost, meter, metric, coins)

    def _needs_evaluation(self, update: AugmentedUpdate) -> bool:
        """Re-evaluate when the answering copy changed, gained a center, or one
        of its centers grew in count or cost by more than a (1+η) factor.
        """
        selection = self.s2.selected()
        if selection is None or selection != self.eval_selection:
            return True
        g, c = selection
        sketch = self.s2.grid.copy_at(g, c)
        if len(sketch) > len(self.eval_weights):
            return True
        record = update.records[g][c]
        if record.kind != AssignmentKind.ASSIGNED:
            return False
        i = record.center_index
        growth = 1 + self.config.eta
        return (
            sketch.weights[i] > growth * self.eval_weights[i]
            or sketch.center_costs[i] > growth * self.eval_costs[i]
        )

    def _mark_evaluated(self) -> None:
        self.eval_selection = self.s2.selected()
        if self.eval_selection is None:
            self.eval_weights, self.eval_costs = [], []
            return
        sketch = self.s2.grid.copy_at(*self.eval_selection)
        self.eval_weights = list(sketch.weights)
        self.eval_costs = list(sketch.center_costs)

    def _rotate(self, x: Point, cost: float, meter: DistanceMeter, metric: Metric, coins) -> None:
        t = x.arrival_index
        self.s1 = self.s2
        self.s1_cost = self.s2_cost
        self.a_start, self.a_end = self.b_start, t - 1
        self.rotation_cost = cost
        self.rotations += 1
        logger.debug(f"λ={self.lam:.4g} rotated at t={t}: A=[{self.a_start}, {self.a_end}]")
        self._start_b(x, meter, metric, coins)

    def held_points(self) -> Set[int]:
        held: Set[int] = set()
        for sketch in (self.s1, self.s2):
            if sketch is not None:
                held |= sketch.held_points()
        return held

    def stored_points(self) -> int:
        return len(self.held_points())

    def expire(self, tau: int) -> None:
        for sketch in (self.s1, self.s2):
            if sketch is not None:
                sketch.expire(tau)

    def stored_items(self) -> int:
        return sum(s.stored_items() for s in (self.s1, self.s2) if s is not None)

    def to_state(self) -> Dict[str, Any]:
        return {
            "lambda": self.lam,
            "seed_key": list(self.seed_key),
            "shared_key": list(self.shared_key),
            "s1": self.s1.to_state() if self.s1 is not None else None,
            "s2": self.s2.to_state() if self.s2 is not None else None,
            "a_start": self.a_start,
            "a_end": self.a_end,
            "b_start": self.b_start,
            "generation": self.generation,
            "rotations": self.rotations,
            "s1_cost": self.s1_cost,
            "s2_cost": self.s2_cost,
            "rotation_cost": self.rotation_cost,
            "eval_selection": list(self.eval_selection) if self.eval_selection else None,
            "eval_weights": self.eval_weights,
            "eval_costs": self.eval_costs,
        }

    @classmethod
    def from_state(cls, config: ProblemConfig, state: Dict[str, Any]) -> "LambdaPairState":
        pair = cls(config, state["lambda"], state["seed_key"], state["shared_key"])
        if state["s1"] is not None:
            pair.s1 = AugSketch.from_state(config, state["s1"])
        if state["s2"] is not None:
            pair.s2 = AugSketch.from_state(config, state["s2"])
        pair.a_start = state["a_start"]
        pair.a_end = state["a_end"]
        pair.b_start = state["b_start"]
        pair.generation = state["generation"]
        pair.rotations = state["rotations"]
        pair.s1_cost = state["s1_cost"]
        pair.s2_cost = state["s2_cost"]
        pair.rotation_cost = state["rotation_cost"]
        selection = state["eval_selection"]
        pair.eval_selection = tuple(selection) if selection else None
        pair.eval_weights = list(state["eval_weights"])
        pair.eval_costs = list(state["eval_costs"])
        return pair
