import pytest
from app.models.experiment_models import Algorithm, MetricsRow
from app.services.evaluation import summarize_metrics, v_measure


def row(t, algo, cost, stored, evals, score=None):
    return MetricsRow(
        t=t, algo=algo, cost=cost, points_stored=stored, distance_evals=evals, v_measure=score
    )


class TestVMeasure:
    """Test cases for v_measure."""

    def test_identical_partitions(self):
        assert v_measure([0, 0, 1, 1], [0, 0, 1, 1]) == pytest.approx(1.0)

    def test_relabeling_invariance(self):
        assert v_measure([0, 0, 1, 1], [1, 1, 0, 0]) == pytest.approx(1.0)

    def test_uninformative_partition(self):
        assert v_measure([0, 1, 0, 1], [0, 0, 1, 1]) == pytest.approx(0.0)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            v_measure([0, 1], [0, 1, 1])

    def test_empty_labels(self):
        with pytest.raises(ValueError):
            v_measure([], [])


class TestSummarizeMetrics:
    """Test cases for summarize_metrics."""

    def setup_method(self):
        """Set up test fixtures."""
        self.rows = [
            row(100, Algorithm.SKETCH, 12.0, 30, 500, 0.9),
            row(100, Algorithm.BATCH, 10.0, 100, 2000, 1.0),
            row(200, Algorithm.SKETCH, 22.0, 40, 900, 0.7),
            row(200, Algorithm.BATCH, 20.0, 100, 4000, 1.0),
        ]

    def test_ratios_against_batch(self):
        summary = summarize_metrics(self.rows, 100)
        sketch = summary["sketch"]
        assert sketch["queries"] == 2
        assert sketch["median_cost"] == pytest.approx(17.0)
        assert sketch["median_cost_ratio"] == pytest.approx(1.15)
        assert sketch["max_cost_ratio"] == pytest.approx(1.2)
        assert sketch["max_points_stored"] == 40
        assert sketch["max_stored_fraction"] == pytest.approx(0.4)
        assert sketch["distance_ratio"] == pytest.approx((900 / 200) / (4000 / 2))
        assert sketch["mean_v_measure"] == pytest.approx(0.8)

    def test_without_batch_rows(self):
        summary = summarize_metrics(self.rows[::2], 100)
        assert set(summary) == {"sketch"}
        assert summary["sketch"]["median_cost_ratio"] is None
        assert summary["sketch"]["distance_ratio"] is None

    def test_unlabeled_rows(self):
        rows = [row(50, Algorithm.SAMPLING, 3.0, 10, 40)]
        assert summarize_metrics(rows, 50)["sampling"]["mean_v_measure"] is None
