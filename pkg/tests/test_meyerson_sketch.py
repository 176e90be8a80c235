import numpy as np
import pytest
from app.models.config_models import CopyMode, ProblemConfig
from app.models.point_models import Point
from app.services.guess_grid import GuessGrid
from app.services.meyerson_sketch import AssignmentKind, MultiSketch, SingleSketch
from app.services.metric import DistanceMeter


def stream(n, seed=0, d=2, scale=3.0):
    rng = np.random.default_rng(seed)
    return [Point.of(row, i + 1) for i, row in enumerate(rng.normal(scale=scale, size=(n, d)))]


class TestSingleSketch:
    """Test cases for SingleSketch."""

    def setup_method(self):
        """Set up test fixtures."""
        self.meter = DistanceMeter()
        self.rng = np.random.default_rng(0)

    def test_first_point_becomes_center(self):
        sketch = SingleSketch(guess=4.0, size_cap=100, sampling_factor=2.0, p=1.0)
        record = sketch.update(Point.of((0.0,), 1), self.rng, self.meter)
        assert record.kind == AssignmentKind.NEW_CENTER
        assert sketch.weights == [1]
        assert sketch.cost_mu == 0.0

    def test_coincident_point_is_assigned(self):
        sketch = SingleSketch(guess=4.0, size_cap=100, sampling_factor=2.0, p=1.0)
        sketch.update(Point.of((1.0, 1.0), 1), self.rng, self.meter)
        record = sketch.update(Point.of((1.0, 1.0), 2), self.rng, self.meter)
        assert record.kind == AssignmentKind.ASSIGNED
        assert sketch.weights == [2]
        assert sketch.cost_mu == 0.0

    def test_acceptance_probability_formula(self):
        sketch = SingleSketch(guess=4.0, size_cap=100, sampling_factor=2.0, p=1.0)
        assert sketch.acceptance_probability(1.0) == pytest.approx(0.5)
        assert sketch.acceptance_probability(100.0) == 1.0

    @pytest.mark.parametrize("coin,kind", [
        (0.4, AssignmentKind.NEW_CENTER),
        (0.6, AssignmentKind.ASSIGNED),
    ])
    def test_explicit_coin_decides_promotion(self, coin, kind):
        sketch = SingleSketch(guess=4.0, size_cap=100, sampling_factor=2.0, p=1.0)
        sketch.update(Point.of((0.0,), 1), self.rng, self.meter)
        state = self.rng.bit_generator.state
        record = sketch.update(Point.of((1.0,), 2), self.rng, self.meter, coin=coin)
        assert record.kind == kind
        assert self.rng.bit_generator.state == state

    def test_empirical_acceptance_rate(self):
        accepted = 0
        trials = 10_000
        for _ in range(trials):
            sketch = SingleSketch(guess=4.0, size_cap=100, sampling_factor=2.0, p=1.0)
            sketch.update(Point.of((0.0,), 1), self.rng, self.meter)
            record = sketch.update(Point.of((1.0,), 2), self.rng, self.meter)
            accepted += record.kind == AssignmentKind.NEW_CENTER
        assert abs(accepted / trials - 0.5) <= 0.02

    def test_size_cap_closes_copy(self):
        sketch = SingleSketch(guess=1.0, size_cap=1, sampling_factor=1.0, p=1.0)
        sketch.update(Point.of((0.0,), 1), self.rng, self.meter)
        record = sketch.update(Point.of((50.0,), 2), self.rng, self.meter)
        assert record.kind == AssignmentKind.DROPPED
        assert sketch.closed
        assert len(sketch) == 1
        assert sketch.update(Point.of((0.0,), 3), self.rng, self.meter).kind == AssignmentKind.SKIPPED

    def test_consistency_and_cost_accounting(self):
        sketch = SingleSketch(guess=50.0, size_cap=10_000, sampling_factor=2.0, p=2.0)
        expected_cost = 0.0
        for x in stream(200):
            record = sketch.update(x, self.rng, self.meter)
            if record.kind == AssignmentKind.ASSIGNED:
                center = sketch.centers[record.center_index]
                assert center.arrival_index < x.arrival_index
                expected_cost += float(np.sum((center.coords - x.coords) ** 2))
        assert sum(sketch.weights) == 200
        assert sketch.cost_mu == pytest.approx(expected_cost)
        assert len(sketch) <= sketch.size_cap

    def test_rollback_undoes_assignment_and_new_center(self):
        sketch = SingleSketch(guess=50.0, size_cap=10_000, sampling_factor=2.0, p=2.0)
        for x in stream(30):
            before = sketch.to_state()
            record = sketch.update(x, self.rng, self.meter)
            sketch.rollback(record)
            assert sketch.to_state() == before
            sketch.update(x, self.rng, self.meter)


class TestMultiSketch:
    """Test cases for MultiSketch."""

    def setup_method(self):
        """Set up test fixtures."""
        self.meter = DistanceMeter()

    def build(self, copies):
        sketches = [SingleSketch(10.0, 10_000, 1.0, 2.0) for _ in range(copies)]
        rngs = [np.random.default_rng(seed) for seed in range(copies)]
        return MultiSketch(sketches, rngs)

    def test_copies_diverge(self):
        multi = self.build(4)
        for x in stream(100, seed=1):
            multi.update(x, self.meter)
        center_sets = [frozenset(c.arrival_index for c in s.centers) for s in multi.copies]
        assert len(set(center_sets)) == 4

    def test_select_copy_minimum_open_cost(self):
        multi = self.build(3)
        multi.copies[0].cost_mu = 5.0
        multi.copies[1].cost_mu = 3.0
        multi.copies[2].cost_mu = 1.0
        multi.copies[2].closed = True
        assert multi.select_copy() == 1

    def test_select_copy_single(self):
        assert self.build(1).select_copy() == 0

    def test_select_copy_all_closed(self):
        multi = self.build(2)
        for sketch in multi.copies:
            sketch.closed = True
        assert multi.select_copy() is None

    def test_all_closed_state_unchanged(self):
        multi = self.build(2)
        for sketch in multi.copies:
            sketch.closed = True
        records = multi.update(Point.of((1.0, 2.0), 1), self.meter)
        assert all(r.kind == AssignmentKind.SKIPPED for r in records)
        assert all(len(s) == 0 for s in multi.copies)

    def test_mismatched_rngs(self):
        with pytest.raises(ValueError):
            MultiSketch([SingleSketch(1.0, 10, 1.0, 1.0)], [])


class TestGuessGrid:
    """Test cases for GuessGrid."""

    def setup_method(self):
        """Set up test fixtures."""
        self.meter = DistanceMeter()
        self.config = ProblemConfig(
            k=2, window=100, lower_bound=1.0, upper_bound=5.0, distance_bound=100.0
        )

    def test_guesses_double_up_to_upper_bound(self):
        grid = GuessGrid(self.config, (0,))
        assert grid.guesses == [1.0, 2.0, 4.0, 8.0]
        assert grid.guesses[-1] >= self.config.upper_bound

    def test_full_copy_mode(self):
        config = self.config.model_copy(update={"copies": CopyMode.FULL})
        grid = GuessGrid(config, (0,))
        assert all(len(multi.copies) == config.copy_count for multi in grid.sketches)
        assert config.copy_count == 2 * config.log_inverse_gamma

    def test_identical_points_select_smallest_guess(self):
        grid = GuessGrid(self.config, (0,))
        for t in range(1, 4):
            grid.update(Point.of((2.0, 2.0), t), self.meter)
        assert grid.select_guess() == (0, 0)

    def test_no_guess_qualifies(self):
        grid = GuessGrid(self.config, (0,))
        grid.update(Point.of((0.0, 0.0), 1), self.meter)
        for _, _, sketch in grid.all_copies():
            sketch.cost_mu = 1e12
        assert grid.select_guess() is None

    def test_guesses_share_coins(self):
        grid = GuessGrid(self.config, (0,))
        grid.update(Point.of((0.0, 0.0), 1), self.meter)
        records = grid.update(Point.of((3.0, 0.0), 2), self.meter, coins=[0.0])
        assert all(copy_records[0].kind == AssignmentKind.NEW_CENTER for copy_records in records)
        records = grid.update(Point.of((3.0, 0.5), 3), self.meter, coins=[1.0])
        assert all(copy_records[0].kind == AssignmentKind.ASSIGNED for copy_records in records)

    def test_selected_guess_meets_filters(self):
        grid = GuessGrid(self.config, (0,))
        for x in stream(60, seed=4):
            grid.update(x, self.meter)
        selection = grid.select_guess()
        if selection is not None:
            g, c = selection
            sketch = grid.copy_at(g, c)
            assert sketch.cost_mu < 2 ** (self.config.p + 6) * grid.guesses[g]
            assert len(sketch) < self.config.selection_size_bound

    def test_deterministic_under_seed(self):
        first, second = GuessGrid(self.config, (3,)), GuessGrid(self.config, (3,))
        for x in stream(40, seed=2):
            first.update(x, self.meter)
            second.update(x, self.meter)
        assert first.to_state() == second.to_state()

    def test_state_round_trip(self):
        grid = GuessGrid(self.config, (1,))
        for x in stream(20, seed=5):
            grid.update(x, self.meter)
        restored = GuessGrid.from_state(self.config, grid.to_state())
        assert restored.to_state() == grid.to_state()
