import pytest
from app.models.experiment_models import Algorithm, ExperimentSpec, StreamSource, SynthSpec
from app.services.experiment_runner import (
    METRICS_COLUMNS, METRICS_VERSION_LINE, ExperimentRunner, run_experiment
)


def make_spec(**overrides):
    values = {
        "source": StreamSource(synth=SynthSpec(k_true=3, n=120, d=2, separation=8.0)),
        "window": 40,
        "k": 3,
        "query_every": 40,
        "bounds_samples": 3,
        "batch_runs": 2,
        "seed": 3,
    }
    values.update(overrides)
    return ExperimentSpec(**values)


class TestExperimentRunner:
    """Test cases for ExperimentRunner."""

    def test_rows_per_query_and_algorithm(self):
        runner = ExperimentRunner(make_spec())
        rows = runner.run()
        assert [(row.t, row.algo) for row in rows] == [
            (t, algo) for t in (40, 80, 120) for algo in Algorithm
        ]
        for row in rows:
            assert row.cost >= 0.0
            assert row.v_measure is not None
            if row.algo == Algorithm.BATCH:
                assert row.points_stored == 40

    def test_meters_are_separate(self):
        runner = ExperimentRunner(make_spec(algos=[Algorithm.SKETCH]))
        rows = runner.run()
        assert rows[-1].distance_evals == runner.meters[Algorithm.SKETCH].count
        assert runner.meters[Algorithm.BATCH].count == 0
        assert runner.evaluation_meter.count > 0
        assert runner.bounds_meter.count > 0
        evals = [row.distance_evals for row in rows]
        assert evals == sorted(evals)

    def test_metrics_file_is_deterministic(self, tmp_path):
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        run_experiment(make_spec(out=str(first)))
        run_experiment(make_spec(out=str(second)))
        assert first.read_bytes() == second.read_bytes()
        lines = first.read_text(encoding="utf-8").splitlines()
        assert lines[0] == METRICS_VERSION_LINE
        assert lines[1] == ",".join(METRICS_COLUMNS)
        assert len(lines) == 2 + 9

    def test_bounded_sketch(self):
        rows = run_experiment(make_spec(algos=[Algorithm.SKETCH], bounded=True))
        assert len(rows) == 3

    def test_empty_stream(self):
        spec = make_spec(source=StreamSource(synth=SynthSpec(k_true=2, n=0, d=2, separation=8.0)))
        with pytest.raises(ValueError):
            run_experiment(spec)

    def test_unlabeled_file_stream(self, tmp_path):
        path = tmp_path / "stream.csv"
        path.write_text("\n".join(f"{i % 7},{(i * 3) % 11}" for i in range(60)) + "\n", encoding="utf-8")
        spec = make_spec(source=StreamSource(path=str(path)), window=20, k=2, query_every=30)
        rows = run_experiment(spec)
        assert len(rows) == 6
        assert all(row.v_measure is None for row in rows)
