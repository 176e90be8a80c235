from collections import deque
from pathlib import Path
from typing import Deque, List, Optional, Tuple, Union
import numpy as np
from app.models.config_models import ProblemConfig
from app.models.experiment_models import Algorithm, ExperimentSpec, MetricsRow
from app.models.point_models import Point, Solution, stack_coords
from app.services.baselines import SamplingBaseline, batch_baseline, batch_rng
from app.services.bounded_stream import BoundedStreamClusterer
from app.services.bounds_estimator import estimate_bounds
from app.services.evaluation import v_measure
from app.services.metric import DistanceMeter, assign, clustering_cost
from app.services.stream_loader import load_stream
from app.services.window_clusterer import WindowClusterer
from app.utils.logger_config import get_logger
from app.utils.seeding import BOUNDS_STREAM, derive_rng

logger = get_logger(__name__)

METRICS_VERSION_LINE = "# slidingk-metrics v1"
METRICS_COLUMNS = ["t", "algo", "cost", "estimated_cost", "points_stored", "distance_evals", "v_measure"]


def _prefix_diameter(prefix: List[Point]) -> float:
    """Diagonal of the prefix bounding box, doubled for later arrivals."""
    coords = stack_coords(prefix)
    return 2.0 * float(np.linalg.norm(coords.max(axis=0) - coords.min(axis=0)))


def _format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    if hasattr(value, "value"):
        return str(value.value)
    return str(value)


def write_metrics_csv(rows: List[MetricsRow], path: str) -> None:
    """Write rows under the versioned comment line and header."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    lines = [METRICS_VERSION_LINE, ",".join(METRICS_COLUMNS)]
    for row in rows:
        data = row.model_dump()
        lines.append(",".join(_format_value(data[column]) for column in METRICS_COLUMNS))
    target.write_text("\n".join(lines) + "\n", encoding="utf-8")


class ExperimentRunner:
    """Feeds one stream to every enabled algorithm and measures them at query points.

    Each algorithm owns a distance meter. Window costs are recomputed against
    the retained window with a separate evaluation meter, and the retained
    window never reaches the sketch.
    """

    def __init__(self, spec: ExperimentSpec):
        self.spec = spec
        self.meters = {algo: DistanceMeter() for algo in Algorithm}
        self.evaluation_meter = DistanceMeter()
        self.bounds_meter = DistanceMeter()
        self.sketch: Optional[Union[WindowClusterer, BoundedStreamClusterer]] = None
        self.sampler: Optional[SamplingBaseline] = None
        self.config: Optional[ProblemConfig] = None

    def run(self) -> List[MetricsRow]:
        spec = self.spec
        logger.info(
            f"Starting experiment: w={spec.window}, k={spec.k}, p={spec.p}, "
            f"algos={[a.value for a in spec.algos]}"
        )
        try:
            points, labels = load_stream(spec.source, spec.seed)
            if not points:
                raise ValueError("Input stream is empty")
            self._build(points)
            rows = self._stream(points, labels)
        except Exception as e:
            logger.error(f"Experiment failed: {str(e)}")
            raise

        if spec.out:
            write_metrics_csv(rows, spec.out)
            logger.info(f"Wrote {len(rows)} metric rows to {spec.out}")
        logger.info("Experiment finished")
        return rows

    def _build(self, points: List[Point]) -> None:
        spec = self.spec
        prefix = points[:min(len(points), 2 * spec.window)]
        sample_window = min(spec.window, len(prefix))
        m, M, spread = estimate_bounds(
            prefix, sample_window, spec.k, spec.p, spec.bounds_samples,
            derive_rng(spec.seed, (BOUNDS_STREAM,)), self.bounds_meter, spec.lloyd_iters
        )
        distance_bound = max(spread, _prefix_diameter(prefix))
        self.config = spec.problem_config(m, M, distance_bound)

        if Algorithm.SKETCH in spec.algos:
            if spec.bounded:
                self.sketch = BoundedStreamClusterer(self.config)
            else:
                self.sketch = WindowClusterer(self.config)
        if Algorithm.SAMPLING in spec.algos:
            self.sampler = SamplingBaseline(
                spec.window, spec.k, spec.p, spec.sample_size_cap, spec.seed, spec.lloyd_iters
            )

    def _stream(self, points: List[Point], labels: Optional[List[int]]) -> List[MetricsRow]:
        retained: Deque[Tuple[Point, Optional[int]]] = deque(maxlen=self.spec.window)
        rows: List[MetricsRow] = []
        for i, x in enumerate(points):
            if self.sketch is not None:
                self.sketch.update(x, self.meters[Algorithm.SKETCH])
            if self.sampler is not None:
                self.sampler.update(x)
            retained.append((x, labels[i] if labels is not None else None))
            if (i + 1) % self.spec.query_every == 0:
                rows.extend(self._measure(x.arrival_index, retained, labels is not None))
        return rows

    def _measure(
        self,
        t: int,
        retained: Deque[Tuple[Point, Optional[int]]],
        labeled: bool
    ) -> List[MetricsRow]:
        window = [point for point, _ in retained]
        window_labels = [label for _, label in retained] if labeled else None
        spec = self.spec
        rows = []

        sketch_stored = None
        for algo in [a for a in Algorithm if a in spec.algos]:
            meter = self.meters[algo]
            if algo == Algorithm.SKETCH:
                solution = self.sketch.query(meter)
                stored = self.sketch.stored_points()
                sketch_stored = stored
            elif algo == Algorithm.SAMPLING:
                solution = self.sampler.query(meter, sketch_stored)
                stored = self.sampler.stored_points()
            else:
                rng = batch_rng(spec.seed, t)
                solution = batch_baseline(window, spec.k, spec.p, rng, meter, spec.batch_runs, spec.lloyd_iters)
                stored = len(window)
            rows.append(self._row(t, algo, solution, stored, meter, window, window_labels))

        if isinstance(self.sketch, WindowClusterer):
            diagnostics = self.sketch.diagnostics()
            logger.info(
                f"t={t}: {diagnostics['rotations']} rotations so far, "
                f"{diagnostics['stored_points']} points stored"
            )
        return rows

    def _row(
        self,
        t: int,
        algo: Algorithm,
        solution: Solution,
        stored: int,
        meter: DistanceMeter,
        window: List[Point],
        window_labels: Optional[List[int]]
    ) -> MetricsRow:
        cost = clustering_cost(window, solution.centers, self.spec.p, self.evaluation_meter)
        score = None
        if window_labels is not None:
            predicted, _ = assign(
                stack_coords(window), stack_coords(solution.centers), self.evaluation_meter
            )
            score = v_measure(predicted.tolist(), window_labels)
        return MetricsRow(
            t=t,
            algo=algo,
            cost=cost,
            estimated_cost=solution.estimated_cost,
            points_stored=stored,
            distance_evals=meter.count,
            v_measure=score,
        )


def run_experiment(spec: ExperimentSpec) -> List[MetricsRow]:
    """Run one benchmark spec; writes the metrics CSV when spec.out is set."""
    return ExperimentRunner(spec).run()
