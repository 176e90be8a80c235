from typing import Any, Dict, List, Optional, Sequence, Set, Tuple
import numpy as np
from app.models.config_models import ProblemConfig, QueryMode, SelectionRule
from app.models.point_models import Point, Solution
from app.services.augmented_sketch import SketchView, union
from app.services.lambda_pair import LambdaPairState
from app.services.metric import EUCLIDEAN, DistanceMeter, Metric
from app.services.solver import solve_view
from app.utils.errors import SketchInvalidError
from app.utils.logger_config import get_logger
from app.utils.seeding import QUERY_STREAM, SKETCH_STREAM, derive_rng

logger = get_logger(__name__)

BRANCH_EXACT_WINDOW = "exact_window"
BRANCH_UNION = "union"
BRANCH_SUFFIX = "suffix"


def lambda_grid(m: float, M: float, delta: float, beta: float, p: float) -> List[float]:
    """Thresholds m, (1+δ)m, … through the first one ≥ 2^p·β·(1+δ)·M.

    Raises:
        ValueError: If the bounds or parameters are out of range
    """
    if not 0 < m <= M:
        raise ValueError(f"Invalid cost bounds: m={m}, M={M}")
    if delta <= 0:
        raise ValueError("delta must be positive")
    if beta < 1:
        raise ValueError("beta must be at least 1")
    target = 2 ** p * beta * (1 + delta) * M
    grid = []
    i = 0
    while True:
        value = m * (1 + delta) ** i
        grid.append(value)
        if value >= target:
            return grid
        i += 1


class WindowClusterer:
    """k-clustering over the last w points of a stream.

    Runs one LambdaPairState per threshold of the λ grid and composes a
    window instance from them at query time. Every sketch promotes a point
    against the same per-copy draws, so sketches over overlapping substreams
    keep mostly the same points.
    """

    def __init__(
        self,
        config: ProblemConfig,
        instance_id: int = 0,
        metric: Metric = EUCLIDEAN
    ):
        self.config = config
        self.instance_id = instance_id
        self.metric = metric
        self.lambdas = lambda_grid(
            config.lower_bound, config.upper_bound, config.delta, config.beta, config.p
        )
        self.pairs = [
            LambdaPairState(config, lam, (instance_id, index), (instance_id,))
            for index, lam in enumerate(self.lambdas)
        ]
        self.coin_rng = derive_rng(config.seed, (SKETCH_STREAM, instance_id))
        self.t = 0
        self.first_index: Optional[int] = None
        self.points_seen = 0
        logger.info(f"Window clusterer {instance_id} tracks {len(self.lambdas)} thresholds")

    def update(self, x: Point, meter: DistanceMeter, coins: Optional[Sequence[float]] = None) -> None:
        """Advance every λ pair by one point.

        Args:
            x: Next stream point
            meter: Distance counter
            coins: Per-copy promotion draws for x; drawn here when omitted
        """
        if x.arrival_index <= self.t:
            raise ValueError(f"Arrival index {x.arrival_index} does not follow {self.t}")
        if coins is None:
            coins = self.coin_rng.random(self.config.copy_count)
        evaluations: Dict[int, float] = {}
        for pair in self.pairs:
            pair.update(x, meter, self.metric, coins, evaluations)
        if self.first_index is None:
            self.first_index = x.arrival_index
        self.t = x.arrival_index
        self.points_seen += 1
        if self.points_seen % self.config.window == 0:
            self.expire()

    def expire(self) -> None:
        """Release shell representatives that arrived before the window."""
        tau = self.window_start
        for pair in self.pairs:
            pair.expire(tau)

    @property
    def window_start(self) -> int:
        """τ = max(t − w + 1, first index)."""
        if self.first_index is None:
            raise ValueError("Window is empty: no point has been ingested")
        return max(self.t - self.config.window + 1, self.first_index)

    def _candidate(self, pair: LambdaPairState, tau: int) -> Optional[Tuple[SketchView, str]]:
        """Window view composed from one pair, or None when the pair does not reach back to tau."""
        if pair.b_start == tau:
            return pair.s2.instance(), BRANCH_EXACT_WINDOW
        if pair.a_start is not None and pair.a_start <= tau <= pair.a_end:
            return union(pair.s1.suffix(tau), pair.s2.instance()), BRANCH_UNION
        if pair.b_start < tau:
            return pair.s2.suffix(tau), BRANCH_SUFFIX
        return None

    @staticmethod
    def _view_key(pair: LambdaPairState, branch: str) -> Tuple[str, int, int]:
        """Pairs with equal keys compose the same window view."""
        a_start = pair.a_start if branch == BRANCH_UNION else 0
        return branch, a_start, pair.b_start

    def _solve(self, index: int, view: SketchView, branch: str, meter: DistanceMeter) -> Solution:
        _, a_start, b_start = self._view_key(self.pairs[index], branch)
        rng = derive_rng(self.config.seed, (QUERY_STREAM, self.instance_id, self.t, a_start, b_start))
        solution = solve_view(
            view, self.config.k, self.config.p, rng, meter,
            self.config.lloyd_iters, self.config.solver_restarts, self.metric
        )
        solution.lambda_value = self.lambdas[index]
        solution.branch = branch
        return solution

    def strict_index(self) -> int:
        """Index of the pair a strict query answers from.

        Raises:
            SketchInvalidError: If no pair covers the window
        """
        tau = self.window_start
        if self.config.selection_rule == SelectionRule.PROOF:
            return self._proof_index(tau)

        for index, pair in enumerate(self.pairs):
            if pair.b_start == tau:
                return index
        for index, pair in enumerate(self.pairs):
            if pair.a_start is not None and pair.a_start < tau:
                return index
        for index, pair in enumerate(self.pairs):
            if pair.b_start < tau:
                return index
        raise SketchInvalidError("Sketch invalid, widen bounds: no λ pair covers the window")

    def _proof_index(self, tau: int) -> int:
        """First covering pair above the largest λ whose A lies inside the window."""
        start = 0
        for index, pair in enumerate(self.pairs):
            if pair.a_start is not None and pair.a_start >= tau:
                start = index + 1
        for index in range(start, len(self.pairs)):
            if self._covers(self.pairs[index], tau):
                return index
        raise SketchInvalidError("Sketch invalid, widen bounds: no λ pair covers the window")

    @staticmethod
    def _covers(pair: LambdaPairState, tau: int) -> bool:
        if pair.b_start <= tau:
            return True
        return pair.a_start is not None and pair.a_start <= tau

    def query(self, meter: DistanceMeter, mode: Optional[QueryMode] = None) -> Solution:
        """Solve the active window.

        Args:
            meter: Distance counter
            mode: Overrides the configured query mode

        Returns:
            Solution tagged with the λ and composition branch it came from

        Raises:
            ValueError: If nothing has been ingested
            SketchInvalidError: If the sketches cannot answer under the configured bounds
        """
        mode = mode or self.config.query_mode
        tau = self.window_start
        if mode == QueryMode.STRICT:
            index = self.strict_index()
            view, branch = self._candidate(self.pairs[index], tau)
            solution = self._solve(index, view, branch, meter)
        else:
            solution = self._best_effort(tau, meter)
        solution.query_mode = mode.value
        return solution

    def _best_effort(self, tau: int, meter: DistanceMeter) -> Solution:
        best: Optional[Solution] = None
        solved = set()
        for index, pair in enumerate(self.pairs):
            try:
                candidate = self._candidate(pair, tau)
                if candidate is None:
                    continue
                key = self._view_key(pair, candidate[1])
                if key in solved:
                    continue
                solved.add(key)
                solution = self._solve(index, candidate[0], candidate[1], meter)
            except SketchInvalidError:
                continue
            if best is None or solution.estimated_cost < best.estimated_cost:
                best = solution
        if best is None:
            raise SketchInvalidError("Sketch invalid, widen bounds: no λ pair can answer the window")
        return best

    def held_points(self) -> Set[int]:
        held: Set[int] = set()
        for pair in self.pairs:
            held |= pair.held_points()
        return held

    def stored_points(self) -> int:
        """Distinct stream points referenced by any sketch of any pair."""
        return len(self.held_points())

    def stored_items(self) -> int:
        return sum(pair.stored_items() for pair in self.pairs)

    def diagnostics(self) -> Dict[str, Any]:
        """Per-pair boundaries and rotation counts plus space totals."""
        return {
            "t": self.t,
            "thresholds": len(self.lambdas),
            "rotations": sum(pair.rotations for pair in self.pairs),
            "stored_points": self.stored_points(),
            "pairs": [
                {
                    "lambda": pair.lam,
                    "a_start": pair.a_start,
                    "a_end": pair.a_end,
                    "b_start": pair.b_start,
                    "rotations": pair.rotations,
                }
                for pair in self.pairs
            ],
        }

    def to_state(self) -> Dict[str, Any]:
        return {
            "instance_id": self.instance_id,
            "t": self.t,
            "first_index": self.first_index,
            "points_seen": self.points_seen,
            "coin_rng": self.coin_rng.bit_generator.state,
            "pairs": [pair.to_state() for pair in self.pairs],
        }

    @classmethod
    def from_state(
        cls,
        config: ProblemConfig,
        state: Dict[str, Any],
        metric: Metric = EUCLIDEAN
    ) -> "WindowClusterer":
        clusterer = cls.__new__(cls)
        clusterer.config = config
        clusterer.instance_id = state["instance_id"]
        clusterer.metric = metric
        clusterer.lambdas = lambda_grid(
            config.lower_bound, config.upper_bound, config.delta, config.beta, config.p
        )
        clusterer.pairs = [LambdaPairState.from_state(config, s) for s in state["pairs"]]
        clusterer.t = state["t"]
        clusterer.first_index = state["first_index"]
        clusterer.points_seen = state["points_seen"]
        clusterer.coin_rng = np.random.default_rng()
        clusterer.coin_rng.bit_generator.state = state["coin_rng"]
        return clusterer
