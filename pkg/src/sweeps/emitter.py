"""
CSV / JSON emission of sweep tables and steady reports

Output is byte-deterministic: floats are written with repr (shortest
round-trip form), rows keep grid order and JSON keys keep column order.
"""
import math
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

import numpy as np
import orjson
import pandas as pd

from src.refrigerator.thermo import SteadyReport
from src.shared.exceptions import EmissionError
from src.shared.logging import get_logger
from src.sweeps.runner import SweepResult
from src.sweeps.schemas import SweepValidator

logger = get_logger(__name__)

OutputFormat = Literal["csv", "json"]


def convert_numpy_types(obj: Any) -> Any:
    """Convert numpy types to Python native types; non-finite floats become None"""
    if isinstance(obj, np.bool_):
        return bool(obj)
    elif isinstance(obj, np.integer):
        return int(obj)
    elif isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else None
    elif isinstance(obj, np.ndarray):
        return [convert_numpy_types(item) for item in obj.tolist()]
    elif isinstance(obj, dict):
        return {key: convert_numpy_types(value) for key, value in obj.items()}
    elif isinstance(obj, (list, tuple)):
        return [convert_numpy_types(item) for item in obj]
    else:
        return obj


def format_float(value: float) -> str:
    """repr for finite values, empty for NaN, 'inf' / '-inf' otherwise"""
    value = float(value)
    if math.isnan(value):
        return ""
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return repr(value)


def render_csv(frame: pd.DataFrame) -> bytes:
    formatted = frame.copy()
    for column in formatted.columns:
        dtype = formatted[column].dtype
        if pd.api.types.is_bool_dtype(dtype):
            formatted[column] = formatted[column].map(lambda b: "true" if b else "false")
        elif pd.api.types.is_float_dtype(dtype):
            formatted[column] = formatted[column].map(format_float)
    return formatted.to_csv(index=False, lineterminator="\n").encode("utf-8")


def render_json(frame: pd.DataFrame) -> bytes:
    records: List[Dict[str, Any]] = [
        {column: convert_numpy_types(value) for column, value in zip(frame.columns, row)}
        for row in frame.itertuples(index=False, name=None)
    ]
    return orjson.dumps(records, option=orjson.OPT_INDENT_2 | orjson.OPT_APPEND_NEWLINE)


def write_bytes(payload: bytes, path: Union[str, Path]) -> Path:
    """
    Write an emitted payload, creating parent directories

    Raises:
        EmissionError: The file cannot be written
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(payload)
    except OSError as e:
        raise EmissionError(path, str(e)) from e
    logger.info(f"Wrote {len(payload)} bytes to {path}")
    return path


def emit(
    result: SweepResult,
    fmt: OutputFormat = "csv",
    path: Optional[Union[str, Path]] = None,
) -> bytes:
    """
    Validate a sweep table and serialize its requested columns

    Args:
        result: Sweep result (an empty table yields a header-only CSV / empty JSON list)
        fmt: 'csv' or 'json'
        path: Destination file; None only renders

    Returns:
        The serialized bytes

    Raises:
        pa.errors.SchemaError: The table breaks a physical check
        EmissionError: The destination cannot be written
    """
    if fmt not in ("csv", "json"):
        raise ValueError(f"Unsupported output format '{fmt}'")
    SweepValidator().validate_table(result.table, result.spec)

    frame = result.output_frame()
    payload = render_csv(frame) if fmt == "csv" else render_json(frame)
    if path is not None:
        write_bytes(payload, path)
    return payload


def emit_report(report: SteadyReport, path: Optional[Union[str, Path]] = None) -> bytes:
    """Serialize a single steady report as JSON"""
    payload = orjson.dumps(
        convert_numpy_types(report.to_dict()),
        option=orjson.OPT_INDENT_2 | orjson.OPT_APPEND_NEWLINE,
    )
    if path is not None:
        write_bytes(payload, path)
    return payload
