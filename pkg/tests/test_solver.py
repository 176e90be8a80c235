import numpy as np
import pytest
from app.models.config_models import ProblemConfig
from app.models.point_models import Point, WeightedInstance
from app.services.augmented_sketch import AugSketch
from app.services.metric import DistanceMeter, clustering_cost, weighted_cost
from app.services.oracles import brute_force_opt
from app.services.solver import estimated_cost, solve, solve_view, weighted_seed


def pts(*coords):
    return [Point.of(c, i + 1) for i, c in enumerate(coords)]


class TestWeightedSeed:
    """Test cases for D^p seeding."""

    def setup_method(self):
        """Set up test fixtures."""
        self.meter = DistanceMeter()

    def test_k_covers_all_centers(self):
        instance = WeightedInstance.unit(pts((0, 0), (1, 0), (5, 5)))
        seeds = weighted_seed(instance, 5, 2.0, np.random.default_rng(0), self.meter)
        assert sorted(s.arrival_index for s in seeds) == [1, 2, 3]
        assert weighted_cost(instance, seeds, 2.0, self.meter) == 0.0

    def test_duplicates_count_once(self):
        instance = WeightedInstance.unit(pts((0, 0), (0, 0), (3, 3)))
        seeds = weighted_seed(instance, 3, 2.0, np.random.default_rng(1), self.meter)
        assert len(seeds) == 2

    def test_single_positive_center(self):
        instance = WeightedInstance(pts((0, 0), (4, 4), (8, 8)), [0.0, 3.0, 0.0])
        seeds = weighted_seed(instance, 2, 2.0, np.random.default_rng(0), self.meter)
        assert [s.arrival_index for s in seeds] == [2]

    def test_far_point_always_seeded(self):
        instance = WeightedInstance.unit(pts((0, 0), (10, 0), (10.1, 0)))
        rng = np.random.default_rng(42)
        hits = 0
        for _ in range(1000):
            seeds = weighted_seed(instance, 2, 2.0, rng, self.meter)
            hits += any(s.arrival_index == 1 for s in seeds)
        assert hits >= 995

    def test_empty_instance(self):
        with pytest.raises(ValueError):
            weighted_seed(WeightedInstance(), 2, 2.0, np.random.default_rng(0), self.meter)

    def test_all_zero_weights(self):
        instance = WeightedInstance(pts((0, 0)), [0.0])
        with pytest.raises(ValueError):
            weighted_seed(instance, 1, 2.0, np.random.default_rng(0), self.meter)


class TestSolve:
    """Test cases for solve."""

    def setup_method(self):
        """Set up test fixtures."""
        self.meter = DistanceMeter()

    def test_no_lloyd_equals_seeding(self):
        rng = np.random.default_rng(3)
        instance = WeightedInstance.unit(pts(*rng.normal(size=(30, 2))))
        seeds = weighted_seed(instance, 3, 2.0, np.random.default_rng(9), self.meter)
        centers = solve(instance, 3, 2.0, np.random.default_rng(9), self.meter, lloyd_iters=0)
        assert [c.arrival_index for c in centers] == [s.arrival_index for s in seeds]

    def test_two_separated_clusters_reach_optimum(self):
        offsets = [(0, 0), (0.3, 0.1), (-0.2, 0.4), (0.1, -0.3), (-0.4, -0.1)]
        points = pts(*offsets, *[(100 + x, y) for x, y in offsets])
        centers = solve(WeightedInstance.unit(points), 2, 2.0, np.random.default_rng(0), self.meter)
        opt, _ = brute_force_opt(points, 2, 2.0, self.meter)
        assert clustering_cost(points, centers, 2.0, self.meter) == pytest.approx(opt)

    def test_refinement_never_increases_cost(self):
        rng = np.random.default_rng(17)
        for trial in range(100):
            n = int(rng.integers(5, 40))
            instance = WeightedInstance(
                pts(*rng.normal(size=(n, 2))), list(rng.integers(1, 5, size=n).astype(float))
            )
            seeds = weighted_seed(instance, 3, 2.0, np.random.default_rng(trial), self.meter)
            refined = solve(instance, 3, 2.0, np.random.default_rng(trial), self.meter, lloyd_iters=10)
            assert weighted_cost(instance, refined, 2.0, self.meter) <= (
                weighted_cost(instance, seeds, 2.0, self.meter) + 1e-9
            )

    def test_centers_are_instance_points(self):
        rng = np.random.default_rng(4)
        instance = WeightedInstance.unit(pts(*rng.normal(size=(25, 3))))
        centers = solve(instance, 4, 2.0, np.random.default_rng(1), self.meter, restarts=3)
        assert len(centers) <= 4
        assert all(any(c is member for member in instance.centers) for c in centers)

    def test_deterministic_under_seed(self):
        rng = np.random.default_rng(8)
        instance = WeightedInstance.unit(pts(*rng.normal(size=(40, 2))))
        first = solve(instance, 3, 1.0, np.random.default_rng(5), self.meter)
        second = solve(instance, 3, 1.0, np.random.default_rng(5), self.meter)
        assert [c.arrival_index for c in first] == [c.arrival_index for c in second]


class TestEstimatedCost:
    """Test cases for estimated_cost."""

    def setup_method(self):
        """Set up test fixtures."""
        self.meter = DistanceMeter()
        self.instance = WeightedInstance(pts((0.0,)), [2.0])
        self.center = [Point.of((1.0,), 9)]

    def test_zero_when_centers_cover_instance(self):
        instance = WeightedInstance.unit(pts((0, 0), (3, 3)))
        assert estimated_cost((instance, 0.0), instance.centers, 2.0, self.meter) == 0.0

    def test_linear_objective(self):
        assert estimated_cost((self.instance, 3.0), self.center, 1.0, self.meter) == pytest.approx(5.0)

    def test_squared_objective(self):
        assert estimated_cost((self.instance, 3.0), self.center, 2.0, self.meter) == pytest.approx(10.0)

    def test_upper_bounds_true_cost_on_consistent_sketches(self):
        config = ProblemConfig(
            k=3, window=500, lower_bound=1.0, upper_bound=1e4, distance_bound=100.0
        )
        for seed in range(20):
            rng = np.random.default_rng(seed)
            points = [Point.of(row, i + 1) for i, row in enumerate(rng.normal(scale=4.0, size=(200, 2)))]
            sketch = AugSketch(config.model_copy(update={"seed": seed}), (0,))
            for x in points:
                sketch.update(x, self.meter)
            solution = solve_view(sketch.instance(), 3, 2.0, np.random.default_rng(seed), self.meter)
            true_cost = clustering_cost(points, solution.centers, 2.0, self.meter)
            assert true_cost <= solution.estimated_cost * (1 + 1e-9)
