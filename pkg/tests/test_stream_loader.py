import numpy as np
import pytest
from unittest.mock import patch
from app.models.experiment_models import StreamOrder, StreamSource, SynthSpec
from app.services.stream_loader import load_csv, load_stream, standardize
from app.utils.errors import StreamFormatError


class TestStandardize:
    """Test cases for standardize."""

    def test_single_column(self):
        result = standardize(np.array([[1.0], [2.0], [3.0]]))
        np.testing.assert_allclose(result[:, 0], [-1.224744871, 0.0, 1.224744871], rtol=1e-8)

    def test_constant_column_is_centered(self):
        result = standardize(np.array([[5.0, 1.0], [5.0, 3.0]]))
        np.testing.assert_allclose(result[:, 0], [0.0, 0.0])
        np.testing.assert_allclose(result[:, 1], [-1.0, 1.0])


class TestLoadCsv:
    """Test cases for load_csv."""

    def write(self, tmp_path, text):
        path = tmp_path / "stream.csv"
        path.write_text(text, encoding="utf-8")
        return str(path)

    def test_raw_rows(self, tmp_path):
        points, labels = load_csv(self.write(tmp_path, "1,2\n3,4\n"), standardize_columns=False)
        assert labels is None
        assert [p.arrival_index for p in points] == [1, 2]
        np.testing.assert_array_equal(points[1].coords, [3.0, 4.0])

    def test_header_is_skipped(self, tmp_path):
        points, _ = load_csv(self.write(tmp_path, "x,y\n1,2\n3,4\n5,6\n"))
        assert len(points) == 3
        np.testing.assert_allclose(points[0].coords, [-1.224744871, -1.224744871], rtol=1e-8)

    def test_label_column_is_excluded(self, tmp_path):
        points, labels = load_csv(
            self.write(tmp_path, "0.5,1\n1.5,0\n2.5,1\n"), label_column=1, standardize_columns=False
        )
        assert labels == [1, 0, 1]
        assert all(p.dimension == 1 for p in points)

    def test_ragged_row(self, tmp_path):
        with pytest.raises(StreamFormatError, match="Row 3"):
            load_csv(self.write(tmp_path, "1,2\n3,4\n5\n"))

    def test_non_numeric_cell(self, tmp_path):
        with pytest.raises(StreamFormatError, match="Row 2"):
            load_csv(self.write(tmp_path, "1,2\n3,abc\n"))

    def test_fractional_label(self, tmp_path):
        with pytest.raises(StreamFormatError, match="Row 2: label '1.5'"):
            load_csv(self.write(tmp_path, "0.5,1\n2.5,1.5\n"), label_column=1)

    def test_integral_float_label(self, tmp_path):
        _, labels = load_csv(self.write(tmp_path, "0.5,2.0\n2.5,0\n"), label_column=1)
        assert labels == [2, 0]

    def test_label_column_out_of_range(self, tmp_path):
        with pytest.raises(StreamFormatError):
            load_csv(self.write(tmp_path, "1,2\n"), label_column=5)

    @patch('app.services.stream_loader.logger')
    def test_empty_file(self, mock_logger, tmp_path):
        assert load_csv(self.write(tmp_path, "")) == ([], None)
        mock_logger.warning.assert_called_once()


class TestLoadStream:
    """Test cases for load_stream."""

    def test_missing_file(self, tmp_path):
        source = StreamSource(path=str(tmp_path / "missing.csv"))
        with pytest.raises(FileNotFoundError):
            load_stream(source, seed=0)

    def test_synthetic_source_is_deterministic(self):
        source = StreamSource(synth=SynthSpec(k_true=3, n=30, d=2, separation=8.0))
        a, labels_a = load_stream(source, seed=7)
        b, labels_b = load_stream(source, seed=7)
        assert labels_a == labels_b
        assert all(np.array_equal(x.coords, y.coords) for x, y in zip(a, b))

    def test_shuffle_reindexes_arrivals(self):
        natural = StreamSource(synth=SynthSpec(k_true=3, n=30, d=2, separation=8.0))
        shuffled = natural.model_copy(update={"order": StreamOrder.SHUFFLED})
        points, labels = load_stream(natural, seed=1)
        mixed, mixed_labels = load_stream(shuffled, seed=1)
        assert [p.arrival_index for p in mixed] == list(range(1, 31))
        assert sorted(mixed_labels) == sorted(labels)
        assert sorted(tuple(p.coords) for p in mixed) == sorted(tuple(p.coords) for p in points)
