from collections import deque
from typing import Deque, Dict, List, Optional, Tuple
import numpy as np
from app.models.point_models import Point, Solution, WeightedInstance
from app.services.metric import DistanceMeter, clustering_cost, weighted_cost
from app.services.solver import solve
from app.utils.seeding import BASELINE_STREAM, derive_rng

# Sub-keys under BASELINE_STREAM
SAMPLER_KEY = 0
SAMPLE_SOLVER_KEY = 1
BATCH_KEY = 2


class SlidingWindowSampler:
    """One uniform sample from the last w points.

    Each arrival draws a uniform key; the sampler keeps the chain of points
    whose key is smaller than that of every later arrival. The front of the
    chain is the minimum-key point of the window.
    """

    def __init__(self, window: int, rng: np.random.Generator):
        self.window = window
        self.rng = rng
        self.chain: Deque[Tuple[float, Point]] = deque()

    def __len__(self) -> int:
        return len(self.chain)

    def update(self, x: Point) -> None:
        key = float(self.rng.random())
        while self.chain and self.chain[-1][0] >= key:
            self.chain.pop()
        self.chain.append((key, x))
        horizon = x.arrival_index - self.window
        while self.chain[0][1].arrival_index <= horizon:
            self.chain.popleft()

    def sample(self) -> Optional[Point]:
        return self.chain[0][1] if self.chain else None


class SamplingBaseline:
    """Batch solver run over a uniform sample of the active window.

    Holds s_max independent samplers and uses the first s at query time.
    When the window fits in s_max points the window itself is kept instead.
    """

    def __init__(
        self,
        window: int,
        k: int,
        p: float,
        s_max: int,
        seed: int,
        lloyd_iters: int = 10
    ):
        if s_max < k:
            raise ValueError(f"Sample size {s_max} must be at least k={k}")
        self.window = window
        self.k = k
        self.p = p
        self.s_max = s_max
        self.seed = seed
        self.lloyd_iters = lloyd_iters
        self.t = 0
        self.exact: Optional[Deque[Point]] = deque(maxlen=window) if window <= s_max else None
        self.samplers: List[SlidingWindowSampler] = []
        if self.exact is None:
            self.samplers = [
                SlidingWindowSampler(window, derive_rng(seed, (BASELINE_STREAM, SAMPLER_KEY, i)))
                for i in range(s_max)
            ]

    def update(self, x: Point) -> None:
        self.t = x.arrival_index
        if self.exact is not None:
            self.exact.append(x)
            return
        for sampler in self.samplers:
            sampler.update(x)

    def sample(self, s: Optional[int] = None) -> WeightedInstance:
        """Distinct sampled points weighted by how many samplers picked them."""
        if self.exact is not None:
            return WeightedInstance.unit(list(self.exact))
        s = self.s_max if s is None else max(self.k, min(s, self.s_max))
        counts: Dict[int, List] = {}
        for sampler in self.samplers[:s]:
            point = sampler.sample()
            if point is None:
                continue
            entry = counts.setdefault(point.arrival_index, [point, 0])
            entry[1] += 1
        return WeightedInstance(
            [point for point, _ in counts.values()],
            [float(count) for _, count in counts.values()]
        )

    def query(self, meter: DistanceMeter, s: Optional[int] = None) -> Solution:
        instance = self.sample(s)
        rng = derive_rng(self.seed, (BASELINE_STREAM, SAMPLE_SOLVER_KEY, self.t))
        centers = solve(instance, self.k, self.p, rng, meter, self.lloyd_iters)
        cost = weighted_cost(instance, centers, self.p, meter)
        return Solution(centers=centers, estimated_cost=cost, actual_instance_cost=cost)

    def stored_points(self) -> int:
        if self.exact is not None:
            return len(self.exact)
        return sum(len(sampler) for sampler in self.samplers)


def batch_baseline(
    window: List[Point],
    k: int,
    p: float,
    rng: np.random.Generator,
    meter: DistanceMeter,
    runs: int = 10,
    lloyd_iters: int = 10
) -> Solution:
    """Best of `runs` solver runs over the full window."""
    if not window:
        raise ValueError("Cannot run the batch baseline on an empty window")
    centers = solve(WeightedInstance.unit(window), k, p, rng, meter, lloyd_iters, runs)
    cost = clustering_cost(window, centers, p, meter)
    return Solution(centers=centers, estimated_cost=cost, actual_instance_cost=cost)


def batch_rng(seed: int, t: int) -> np.random.Generator:
    """Generator for the batch baseline query at time t."""
    return derive_rng(seed, (BASELINE_STREAM, BATCH_KEY, t))
