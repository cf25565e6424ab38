"""
File formats.

Sample sets are CSV (one point per row, first row the reference) or JSON
{"ref_index": int, "points": [[...], ...]}. Run configurations are JSON
objects (see config.CONFIG_KEYS). Traces and experiment rows are written
as CSV with full double precision.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .config import DfoConfig
from .dfo import IterateTrace
from .errors import ConfigError
from .sample_set import SampleSet, build_sample_set

TRACE_COLUMNS = ("iter", "f_noisy", "m_k", "E_budget", "E_value", "side", "evals")


def _read_text(path: str | Path) -> str:
    path = Path(path)
    try:
        return path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ConfigError(f"File not found: {path}") from None
    except (OSError, UnicodeDecodeError) as exc:
        raise ConfigError(f"Cannot read {path}: {exc}") from None


def parse_sample_set(text: str, fmt: str | None = None) -> SampleSet:
    """
    Parse a sample set from CSV or JSON text.

    Format is guessed from the first non-blank character when not given.
    """
    stripped = text.strip()
    if not stripped:
        raise ConfigError("Sample-set input is empty")
    fmt = fmt or ("json" if stripped[0] in "{[" else "csv")
    if fmt == "json":
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"Invalid sample-set JSON: {exc.msg}", {"line": exc.lineno}) from None
        if isinstance(data, list):
            data = {"points": data}
        if not isinstance(data, dict) or "points" not in data:
            raise ConfigError("Sample-set JSON needs a 'points' list")
        points, ref_index = data["points"], data.get("ref_index", 0)
        if not isinstance(ref_index, int):
            raise ConfigError("ref_index must be an integer", {"ref_index": ref_index})
    elif fmt == "csv":
        rows = [row for row in csv.reader(io.StringIO(stripped)) if row and not row[0].startswith("#")]
        points, ref_index = rows, 0
    else:
        raise ConfigError(f"Unknown sample-set format: {fmt}")
    try:
        array = np.array(points, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"Sample-set coordinates are not numeric: {exc}") from None
    if array.ndim != 2:
        raise ConfigError("Sample-set rows must all have the same length")
    return build_sample_set(array, ref_index)


def read_sample_set(path: str | Path) -> SampleSet:
    """Read a sample-set file (.json or CSV)."""
    fmt = "json" if Path(path).suffix.lower() == ".json" else None
    return parse_sample_set(_read_text(path), fmt)


def load_config(path: str | Path) -> DfoConfig:
    """Read a DfoConfig from a JSON file."""
    try:
        data = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"Invalid JSON in {path}: {exc.msg}", {"line": exc.lineno}) from None
    return DfoConfig.from_dict(data)


def trace_rows(trace: IterateTrace) -> tuple[list[str], list[list[Any]]]:
    """
    Header and rows of a trace: the FFD evaluations as iteration 0, then
    one row per accepted step. Coordinates go in columns u1..un after iter.
    """
    n_u = trace.initial_points.shape[1]
    coords = [f"u{i + 1}" for i in range(n_u)]
    header = [TRACE_COLUMNS[0], *coords, *TRACE_COLUMNS[1:]]
    rows: list[list[Any]] = []
    for count, (point, value) in enumerate(zip(trace.initial_points, trace.initial_values), start=1):
        rows.append([0, *point.tolist(), float(value), "", "", "", "", count])
    for r in trace.records:
        rows.append(
            [r.iteration, *r.point.tolist(), r.f_noisy, r.model_value, r.budget, r.bound_value, r.side.value, r.evals]
        )
    return header, rows


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """Write rows with repr-precision floats."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])
    return path


def write_trace_csv(trace: IterateTrace, path: str | Path) -> Path:
    header, rows = trace_rows(trace)
    return write_csv(path, header, rows)


def to_json(data: Any, pretty: bool = True) -> str:
    """JSON with numpy scalars and arrays converted."""
    return json.dumps(data, indent=2 if pretty else None, default=_json_default)


def _json_default(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        return value.item()
    raise TypeError(f"Not JSON serializable: {type(value).__name__}")


def format_table(mapping: dict[str, Any], digits: int = 4) -> str:
    """Two-column key/value table; floats rounded for display only."""
    width = max((len(k) for k in mapping), default=0)
    lines = []
    for key, value in mapping.items():
        if isinstance(value, float):
            shown = f"{value:.{digits}f}" if abs(value) < 1e6 else f"{value:.{digits}e}"
        elif isinstance(value, (list, tuple)):
            shown = "[" + ", ".join(f"{v:.{digits}f}" if isinstance(v, float) else str(v) for v in value) + "]"
        else:
            shown = str(value)
        lines.append(f"{key.ljust(width)}  {shown}")
    return "\n".join(lines)
