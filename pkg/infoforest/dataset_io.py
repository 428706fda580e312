"""
CSV dataset reading and writing
One row per sample: k feature columns followed by a 0/1 label column.
Header rows start with '#' and are skipped on read.
"""

import hashlib
import logging
from pathlib import Path
from typing import Optional, Tuple

import numpy as np
import pandas as pd

from .core_model import Dataset
from .errors import DatasetFormatError, DimensionMismatchError, NonFiniteFeatureError

logger = logging.getLogger(__name__)


def _read_numeric_table(path: Path) -> np.ndarray:
    """Parse a CSV into a float matrix, rejecting empty or non-numeric content"""
    path = Path(path)
    logger.info(f"Reading CSV: {path}")
    try:
        df = pd.read_csv(path, header=None, comment="#", skip_blank_lines=True,
                         float_precision="round_trip")
    except pd.errors.EmptyDataError as e:
        raise DatasetFormatError(f"{path}: no data rows") from e
    except pd.errors.ParserError as e:
        raise DatasetFormatError(f"{path}: malformed CSV ({e})") from e

    if df.empty:
        raise DatasetFormatError(f"{path}: no data rows")

    for col in df.columns:
        if not pd.api.types.is_numeric_dtype(df[col]):
            raise DatasetFormatError(f"{path}: non-numeric value in column {col + 1}")

    logger.info(f"  Rows read: {len(df):,}")
    return df.to_numpy(dtype=np.float64)


def _split_labels(table: np.ndarray, path: Path) -> Tuple[np.ndarray, np.ndarray]:
    features, raw_labels = table[:, :-1], table[:, -1]
    if not np.all((raw_labels == 0) | (raw_labels == 1)):
        raise DatasetFormatError(f"{path}: label column must contain only 0 or 1")
    if not np.all(np.isfinite(features)):
        raise NonFiniteFeatureError(f"{path}: features contain NaN or infinite values")
    return features, raw_labels.astype(np.int8)


def read_dataset_csv(path: Path) -> Dataset:
    """
    Load a labeled dataset

    Raises:
        DatasetFormatError: missing rows, non-numeric cells, bad labels, < 2 columns
        NonFiniteFeatureError: NaN or infinite feature values
    """
    table = _read_numeric_table(path)
    if table.shape[1] < 2:
        raise DatasetFormatError(f"{path}: need at least one feature column and a label column")
    features, labels = _split_labels(table, path)
    return Dataset(features, labels)


def read_feature_table(path: Path, dimension: int) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    """
    Load rows for prediction: k feature columns, optionally followed by labels

    Returns:
        (features, labels or None)
    """
    table = _read_numeric_table(path)
    if table.shape[1] == dimension:
        if not np.all(np.isfinite(table)):
            raise NonFiniteFeatureError(f"{path}: features contain NaN or infinite values")
        return table, None
    if table.shape[1] == dimension + 1:
        return _split_labels(table, path)
    raise DimensionMismatchError(
        f"{path}: model expects {dimension} feature columns (plus optional label), "
        f"got {table.shape[1]} columns"
    )


def write_dataset_csv(dataset: Dataset, path: Path) -> Path:
    """Write the shared CSV format with a '#' header row; reals round-trip exactly"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    columns = [f"x{j}" for j in range(dataset.dimension)]
    df = pd.DataFrame(dataset.features, columns=columns)
    df["label"] = dataset.labels.astype(int)

    with open(path, "w", newline="") as f:
        f.write("# " + ",".join(df.columns) + "\n")
        df.to_csv(f, header=False, index=False)
    logger.info(f"[OK] Dataset saved → {path} ({dataset.n_samples:,} rows)")
    return path


def fingerprint_arrays(features: np.ndarray, labels: Optional[np.ndarray] = None) -> str:
    """sha256 over the canonical little-endian bytes of features (and labels when given)"""
    digest = hashlib.sha256()
    digest.update(np.ascontiguousarray(features, dtype="<f8").tobytes())
    if labels is not None:
        digest.update(np.ascontiguousarray(labels, dtype="i1").tobytes())
    return digest.hexdigest()


def dataset_fingerprint(dataset: Dataset) -> str:
    return fingerprint_arrays(dataset.features, dataset.labels)
