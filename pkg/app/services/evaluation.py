import statistics
from collections import defaultdict
from typing import Any, Dict, List, Sequence
from sklearn import metrics
from app.models.experiment_models import Algorithm, MetricsRow

BATCH = Algorithm.BATCH.value


def v_measure(pred_labels: Sequence[int], true_labels: Sequence[int]) -> float:
    """Harmonic mean of homogeneity and completeness.

    Only cluster composition matters, so the score is invariant to relabeling::

        v_measure([0, 0, 1, 1], [1, 1, 0, 0])
        >>> 1.0
    """
    if len(pred_labels) != len(true_labels):
        raise ValueError(
            f"Label lengths differ: {len(pred_labels)} predicted vs {len(true_labels)} true"
        )
    if len(pred_labels) == 0:
        raise ValueError("Cannot score empty labelings")
    return float(metrics.v_measure_score(list(true_labels), list(pred_labels)))


def summarize_metrics(rows: List[MetricsRow], window: int) -> Dict[str, Dict[str, Any]]:
    """Per-algorithm summary of a metrics run.

    Cost ratios are taken against the batch baseline at the same query time.
    The distance ratio divides an algorithm's evaluations per stream point by
    the evaluations of one batch recompute, which is the cost per point of a
    baseline that recomputes at every arrival. Both ratios are None without
    batch rows.
    """
    by_algo: Dict[str, List[MetricsRow]] = defaultdict(list)
    for row in rows:
        by_algo[Algorithm(row.algo).value].append(row)
    batch_cost = {row.t: row.cost for row in by_algo.get(BATCH, [])}
    batch_rows = by_algo.get(BATCH)
    recompute_evals = batch_rows[-1].distance_evals / len(batch_rows) if batch_rows else None

    summary = {}
    for algo, algo_rows in by_algo.items():
        ratios = [
            row.cost / batch_cost[row.t]
            for row in algo_rows
            if batch_cost.get(row.t)
        ]
        v_scores = [row.v_measure for row in algo_rows if row.v_measure is not None]
        max_stored = max(row.points_stored for row in algo_rows)
        final_evals = algo_rows[-1].distance_evals
        per_point = final_evals / algo_rows[-1].t
        summary[algo] = {
            "queries": len(algo_rows),
            "median_cost": statistics.median(row.cost for row in algo_rows),
            "median_cost_ratio": statistics.median(ratios) if ratios else None,
            "max_cost_ratio": max(ratios) if ratios else None,
            "max_points_stored": max_stored,
            "max_stored_fraction": max_stored / window,
            "distance_evals": final_evals,
            "distance_ratio": per_point / recompute_evals if recompute_evals else None,
            "mean_v_measure": statistics.fmean(v_scores) if v_scores else None,
        }
    return summary
