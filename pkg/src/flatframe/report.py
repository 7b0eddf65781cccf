"""Machine-readable report emission (JSON envelope and flat CSV).

Every command emits the same JSON envelope:

    {tool_version, command, inputs: {group, chars, set, k, seed, tolerances},
     results, summary, timestamp}

Serialization is deterministic apart from the timestamp: keys are sorted,
floats use the shortest round-trip representation, complex numbers become
[re, im] pairs, and index sets become sorted lists.  CSV rows carry a header
and print floats with 17 significant digits so values round-trip exactly.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

import numpy as np

from ._version import __version__


def sanitize(obj):
    """Convert nested values to plain JSON-ready Python objects."""
    if isinstance(obj, dict):
        return {str(k): sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [sanitize(v) for v in items]
    if isinstance(obj, np.ndarray):
        return [sanitize(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def build_envelope(command: str, inputs: dict, results: dict, summary: dict) -> dict:
    return {
        "tool_version": __version__,
        "command": command,
        "inputs": sanitize(inputs),
        "results": sanitize(results),
        "summary": sanitize(summary),
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }


def json_text(envelope: dict) -> str:
    return json.dumps(envelope, sort_keys=True, indent=2) + "\n"


def write_json(envelope: dict, path: str | Path | None) -> None:
    text = json_text(envelope)
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _format_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    if isinstance(value, (list, tuple)):
        return ";".join(_format_cell(v) for v in value)
    return str(value)


def csv_text(rows: Sequence[dict]) -> str:
    """Render rows (all sharing the first row's keys) with a header line."""
    if not rows:
        return "\n"
    fields = list(rows[0].keys())
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        writer.writerow([_format_cell(sanitize(row.get(f))) for f in fields])
    return buf.getvalue()


def write_csv(rows: Sequence[dict], path: str | Path | None) -> None:
    text = csv_text(rows)
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)
