"""
Lossless CSV and JSON writers for numeric output.

Floats are written with 17 significant digits so that every double reads
back bit-identical; no timestamps or other run-dependent data are written,
so reruns produce byte-identical files.
"""
from dataclasses import asdict, is_dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Dict
import json
import logging
import os

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def to_jsonable(value: Any) -> Any:
    """Convert numpy, dataclass, enum and Fraction values into plain JSON types"""
    if is_dataclass(value) and not isinstance(value, type):
        return to_jsonable(asdict(value))
    if isinstance(value, dict):
        return {str(key): to_jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(item) for item in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(item) for item in value.tolist()]
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (np.floating, float)):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def _ensure_parent(path: str) -> None:
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)


def write_csv(frame: pd.DataFrame, path: str) -> str:
    """Write a table without index, floats in 17-digit form"""
    _ensure_parent(path)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.info(f"Wrote {len(frame)} rows to {path}")
    return path


def write_json(payload: Dict, path: str) -> str:
    """Write a JSON document with sorted keys"""
    _ensure_parent(path)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(to_jsonable(payload), f, indent=2, sort_keys=True, allow_nan=True)
        f.write("\n")
    logger.info(f"Wrote {path}")
    return path


def read_csv_column(path: str, column: str) -> np.ndarray:
    """Read one required float column from a CSV file"""
    frame = pd.read_csv(path, float_precision="round_trip")
    if column not in frame.columns:
        raise ValueError(f"{path} has no '{column}' column, found {list(frame.columns)}")
    return frame[column].to_numpy(dtype=float)


def read_json(path: str) -> Dict:
    with open(path, encoding="utf-8") as f:
        return json.load(f)
