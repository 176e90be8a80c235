from collections import Counter
import numpy as np
import pytest
from app.models.point_models import stack_coords
from app.services.baselines import batch_baseline
from app.services.evaluation import v_measure
from app.services.metric import DistanceMeter, assign
from app.services.synthetic import synth_sset


class TestSynthSset:
    """Test cases for synthetic blob streams."""

    def test_empty_stream(self):
        assert synth_sset(0, 3, 2, 8.0, np.random.default_rng(0)) == ([], [])

    def test_shapes_and_indices(self):
        points, labels = synth_sset(50, 4, 3, 8.0, np.random.default_rng(1))
        assert len(points) == len(labels) == 50
        assert [p.arrival_index for p in points] == list(range(1, 51))
        assert all(p.dimension == 3 for p in points)

    def test_balanced_labels(self):
        _, labels = synth_sset(103, 5, 2, 8.0, np.random.default_rng(2))
        sizes = Counter(labels).values()
        assert max(sizes) - min(sizes) <= 1

    def test_deterministic_under_seed(self):
        a, _ = synth_sset(20, 2, 2, 5.0, np.random.default_rng(3))
        b, _ = synth_sset(20, 2, 2, 5.0, np.random.default_rng(3))
        assert all(np.array_equal(x.coords, y.coords) for x, y in zip(a, b))

    @pytest.mark.parametrize("args", [(10, 0, 2, 8.0), (10, 2, 0, 8.0), (10, 2, 2, 0.0), (-1, 2, 2, 8.0)])
    def test_invalid_parameters(self, args):
        with pytest.raises(ValueError):
            synth_sset(*args, np.random.default_rng(0))

    def test_well_separated_blobs_are_recovered(self):
        meter = DistanceMeter()
        points, labels = synth_sset(200, 4, 2, 50.0, np.random.default_rng(4))
        solution = batch_baseline(points, 4, 2.0, np.random.default_rng(5), meter, runs=10)
        predicted, _ = assign(stack_coords(points), stack_coords(solution.centers), meter)
        assert v_measure(predicted.tolist(), labels) >= 0.99
