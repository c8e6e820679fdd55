"""
Result Tables
=============

CSV and JSON writers for experiment results. Both carry the same metadata
block (tool, version, config hash, seed, timestamp) and the same rows, so a
table can be re-read by anything that plots.
"""

import csv
import hashlib
import io
import json
import logging
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional, Sequence, TextIO, Union

import numpy as np

from retraction_kit.models import OutputFormat

logger = logging.getLogger(__name__)

TOOL_NAME = "retraction-kit"

# Metadata keys that change between identical runs.
VOLATILE_KEYS = ("generated_at",)


def canonical_json_bytes(obj: Any) -> bytes:
    """Sorted-key, fixed-separator JSON encoding used for hashing."""
    return json.dumps(
        _plain(obj),
        ensure_ascii=True,
        sort_keys=True,
        separators=(",", ":"),
        allow_nan=True,
    ).encode("ascii")


def config_hash(config: Dict[str, Any]) -> str:
    return hashlib.sha256(canonical_json_bytes(config)).hexdigest()


def build_metadata(
    experiment: str,
    manifold: str,
    config: Dict[str, Any],
    version: str,
    seed: Optional[int] = None,
    summary: Optional[Dict[str, Any]] = None,
) -> Dict[str, Any]:
    """Metadata block written above every table."""
    metadata: Dict[str, Any] = {
        "tool": TOOL_NAME,
        "version": version,
        "experiment": experiment,
        "manifold": manifold,
        "seed": seed,
        "config_hash": config_hash(config),
        "generated_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    for key, value in (summary or {}).items():
        metadata[key] = _plain(value)
    return metadata


def _plain(value: Any) -> Any:
    """Convert numpy scalars/arrays and enums to JSON-ready values."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, np.generic):
        return value.item()
    if hasattr(value, "value") and isinstance(getattr(value, "value"), str):
        return value.value
    return value


def format_cell(value: Any) -> str:
    """Render a cell deterministically: shortest round-trip repr for floats."""
    value = _plain(value)
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, list):
        return " ".join(format_cell(v) for v in value)
    return str(value)


def render_csv(
    metadata: Dict[str, Any], columns: Sequence[str], rows: List[Dict[str, Any]]
) -> str:
    buffer = io.StringIO()
    for key, value in metadata.items():
        buffer.write(f"# {key}: {format_cell(value)}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_cell(row.get(column)) for column in columns])
    return buffer.getvalue()


def render_json(
    metadata: Dict[str, Any], columns: Sequence[str], rows: List[Dict[str, Any]]
) -> str:
    document = {
        "metadata": _plain(metadata),
        "columns": list(columns),
        "rows": [{column: _plain(row.get(column)) for column in columns} for row in rows],
    }
    return json.dumps(document, indent=2, allow_nan=True) + "\n"


def write_table(
    metadata: Dict[str, Any],
    columns: Sequence[str],
    rows: List[Dict[str, Any]],
    fmt: Union[str, OutputFormat] = OutputFormat.CSV,
    path: Optional[str] = None,
    stream: Optional[TextIO] = None,
) -> str:
    """
    Render a table and write it to `path`, or to `stream` when no path is given.

    Returns:
        The rendered text
    """
    fmt = OutputFormat(fmt)
    text = render_csv(metadata, columns, rows) if fmt == OutputFormat.CSV else render_json(
        metadata, columns, rows
    )
    if path:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        logger.info(f"Wrote {len(rows)} rows to {path}")
    elif stream is not None:
        stream.write(text)
    return text


def data_lines(text: str, fmt: Union[str, OutputFormat] = OutputFormat.CSV) -> List[str]:
    """The parts of a rendered table that must match across identical runs."""
    if OutputFormat(fmt) == OutputFormat.CSV:
        return [line for line in text.splitlines() if not line.startswith("#")]
    document = json.loads(text)
    for key in VOLATILE_KEYS:
        document["metadata"].pop(key, None)
    return [json.dumps(document, sort_keys=True)]
