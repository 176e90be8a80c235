from typing import List, Tuple
import numpy as np
from app.models.point_models import Point, WeightedInstance
from app.services.metric import DistanceMeter, clustering_cost
from app.services.solver import solve
from app.utils.logger_config import get_logger

logger = get_logger(__name__)

# Lower bound floor, relative to M', when every sampled window costs zero.
ZERO_COST_FLOOR = 1e-9


def estimate_bounds(
    prefix: List[Point],
    w: int,
    k: int,
    p: float,
    n_samples: int,
    rng: np.random.Generator,
    meter: DistanceMeter,
    lloyd_iters: int = 10,
    runs: int = 1
) -> Tuple[float, float, float]:
    """Estimate (m, M, Δ) from window-sized substreams of a stream prefix.

    Each sampled window is solved with the batch solver. With m′/M′ the
    smallest/largest sampled cost and μ/σ their mean and standard deviation,
    m = max(m′/3, μ−3σ), M = max(3M′, μ+3σ) and Δ = M′.

    Args:
        prefix: Leading points of the stream, at least w of them
        w: Window size
        k: Number of centers
        p: Exponent of the clustering objective
        n_samples: Number of windows to sample
        rng: Generator for window offsets and the solver
        meter: Distance counter

    Returns:
        Tuple of (m, M, Δ)

    Raises:
        ValueError: If the prefix is shorter than one window or n_samples < 1
    """
    if len(prefix) < w:
        raise ValueError(f"Prefix of {len(prefix)} points is shorter than the window {w}")
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")

    costs = []
    for _ in range(n_samples):
        offset = int(rng.integers(0, len(prefix) - w + 1))
        window = prefix[offset:offset + w]
        centers = solve(WeightedInstance.unit(window), k, p, rng, meter, lloyd_iters, runs)
        costs.append(clustering_cost(window, centers, p, meter))

    samples = np.asarray(costs)
    low, high = float(samples.min()), float(samples.max())
    mu = float(samples.mean())
    sigma = float(samples.std(ddof=1)) if len(samples) > 1 else 0.0

    m = max(low / 3, mu - 3 * sigma)
    M = max(3 * high, mu + 3 * sigma)
    if m <= 0:
        positive = samples[samples > 0]
        if positive.size:
            m = float(positive.min()) / 3
        else:
            m = ZERO_COST_FLOOR * high if high > 0 else ZERO_COST_FLOOR
        logger.warning(f"Sampled window costs include zeros; lower bound clamped to {m:.6g}")
    M = max(M, m)

    logger.info(f"Estimated bounds from {n_samples} windows: m={m:.6g}, M={M:.6g}, Δ={high:.6g}")
    return m, M, high
