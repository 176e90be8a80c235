import csv
from pathlib import Path
from typing import List, Optional, Tuple
import numpy as np
from app.models.experiment_models import StreamOrder, StreamSource
from app.models.point_models import Point
from app.services.synthetic import synth_sset
from app.utils.errors import StreamFormatError
from app.utils.logger_config import get_logger
from app.utils.seeding import DATA_STREAM, derive_rng

logger = get_logger(__name__)


def _is_header(row: List[str]) -> bool:
    try:
        [float(cell) for cell in row]
    except ValueError:
        return True
    return False


def standardize(coords: np.ndarray) -> np.ndarray:
    """Zero mean and unit population standard deviation per column.

    Constant columns are only centered.
    """
    if coords.shape[0] == 0:
        return coords
    mean = coords.mean(axis=0)
    std = coords.std(axis=0)
    std[std == 0] = 1.0
    return (coords - mean) / std


def load_csv(
    path: str,
    label_column: Optional[int] = None,
    standardize_columns: bool = True
) -> Tuple[List[Point], Optional[List[int]]]:
    """Read a comma-separated stream, one point per row.

    A non-numeric first row is taken as a header. Row numbers in errors are
    1-based file lines.

    Args:
        path: CSV file path (UTF-8)
        label_column: Index of an integer label column excluded from coordinates
        standardize_columns: Standardize every coordinate over the whole file

    Returns:
        Points in file order and the labels, or None without a label column

    Raises:
        StreamFormatError: On ragged rows, non-numeric cells or a bad label column
    """
    rows: List[List[float]] = []
    labels: List[int] = []
    width: Optional[int] = None

    with open(path, newline="", encoding="utf-8") as handle:
        for line_number, row in enumerate(csv.reader(handle), start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            if width is None and not rows and _is_header(row):
                width = len(row)
                continue
            if width is None:
                width = len(row)
            if len(row) != width:
                raise StreamFormatError(f"Row {line_number}: expected {width} columns, got {len(row)}")
            if label_column is not None and label_column >= width:
                raise StreamFormatError(f"Label column {label_column} out of range for {width} columns")

            values = []
            for column, cell in enumerate(row):
                try:
                    value = float(cell)
                except ValueError:
                    raise StreamFormatError(f"Row {line_number}: non-numeric value '{cell}'")
                if column == label_column:
                    if not value.is_integer():
                        raise StreamFormatError(f"Row {line_number}: label '{cell}' is not an integer")
                    labels.append(int(value))
                else:
                    values.append(value)
            rows.append(values)

    if not rows:
        logger.warning(f"Input file {path} holds no points")
        return [], ([] if label_column is not None else None)

    coords = np.asarray(rows, dtype=float)
    if standardize_columns:
        coords = standardize(coords)
    points = [Point.of(row, i + 1) for i, row in enumerate(coords)]
    logger.info(f"Loaded {len(points)} points of dimension {coords.shape[1]} from {path}")
    return points, (labels if label_column is not None else None)


def load_stream(source: StreamSource, seed: int) -> Tuple[List[Point], Optional[List[int]]]:
    """Materialize a stream source, applying standardization and ordering."""
    if source.path is not None:
        if not Path(source.path).exists():
            raise FileNotFoundError(f"Input file not found: {source.path}")
        points, labels = load_csv(source.path, source.label_column, source.standardize)
    else:
        synth = source.synth
        points, labels = synth_sset(
            synth.n, synth.k_true, synth.d, synth.separation, derive_rng(seed, (DATA_STREAM, 0))
        )
        if source.standardize and points:
            coords = standardize(np.vstack([p.coords for p in points]))
            points = [Point.of(row, i + 1) for i, row in enumerate(coords)]

    if source.order == StreamOrder.SHUFFLED and points:
        order = derive_rng(seed, (DATA_STREAM, 1)).permutation(len(points))
        points = [Point.of(points[j].coords, i + 1) for i, j in enumerate(order)]
        if labels is not None:
            labels = [labels[j] for j in order]
    return points, labels
