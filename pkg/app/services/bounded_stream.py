from typing import Any, Dict, List, Optional, Set
import numpy as np
from app.models.config_models import ProblemConfig, QueryMode
from app.models.point_models import Point, Solution
from app.services.metric import EUCLIDEAN, DistanceMeter, Metric
from app.services.window_clusterer import WindowClusterer
from app.utils.logger_config import get_logger
from app.utils.seeding import SKETCH_STREAM, derive_rng

logger = get_logger(__name__)


class BoundedStreamClusterer:
    """Staggered WindowClusterer instances that each see at most 2w points.

    A new instance starts every w points and is discarded once it has
    consumed 2w points; queries go to the oldest live instance. Live
    instances share each point's promotion draws.
    """

    def __init__(self, config: ProblemConfig, metric: Metric = EUCLIDEAN):
        self.config = config
        self.metric = metric
        self.instances: List[WindowClusterer] = []
        self.coin_rng = derive_rng(config.seed, (SKETCH_STREAM,))
        self.points_seen = 0
        self.started = 0

    def update(self, x: Point, meter: DistanceMeter) -> None:
        w = self.config.window
        if self.points_seen % w == 0:
            self.instances.append(WindowClusterer(self.config, self.started, self.metric))
            self.started += 1
        coins = self.coin_rng.random(self.config.copy_count)
        for instance in self.instances:
            instance.update(x, meter, coins)
        self.points_seen += 1

        retired = [i for i in self.instances if i.points_seen >= 2 * w]
        for instance in retired:
            logger.debug(f"Retiring window instance {instance.instance_id} at t={x.arrival_index}")
        self.instances = [i for i in self.instances if i.points_seen < 2 * w]

    @property
    def active(self) -> WindowClusterer:
        if not self.instances:
            raise ValueError("Window is empty: no point has been ingested")
        return self.instances[0]

    def query(self, meter: DistanceMeter, mode: Optional[QueryMode] = None) -> Solution:
        return self.active.query(meter, mode)

    def held_points(self) -> Set[int]:
        held: Set[int] = set()
        for instance in self.instances:
            held |= instance.held_points()
        return held

    def stored_points(self) -> int:
        return len(self.held_points())

    def stored_items(self) -> int:
        return sum(instance.stored_items() for instance in self.instances)

    def diagnostics(self) -> Dict[str, Any]:
        return {
            "instances": [instance.instance_id for instance in self.instances],
            "stored_points": self.stored_points(),
            "active": self.active.diagnostics() if self.instances else None,
        }

    def to_state(self) -> Dict[str, Any]:
        return {
            "points_seen": self.points_seen,
            "started": self.started,
            "coin_rng": self.coin_rng.bit_generator.state,
            "instances": [instance.to_state() for instance in self.instances],
        }

    @classmethod
    def from_state(
        cls,
        config: ProblemConfig,
        state: Dict[str, Any],
        metric: Metric = EUCLIDEAN
    ) -> "BoundedStreamClusterer":
        wrapper = cls(config, metric)
        wrapper.points_seen = state["points_seen"]
        wrapper.started = state["started"]
        wrapper.coin_rng = np.random.default_rng()
        wrapper.coin_rng.bit_generator.state = state["coin_rng"]
        wrapper.instances = [
            WindowClusterer.from_state(config, s, metric) for s in state["instances"]
        ]
        return wrapper
