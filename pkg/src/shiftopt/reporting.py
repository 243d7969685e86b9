"""Serialization of reports: versioned JSON, aligned text and flat CSV."""
from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

import numpy as np

from .cocycle import Bounds
from .symbolic import Word

__all__ = ["SCHEMA", "to_jsonable", "dumps", "to_text", "to_csv"]

SCHEMA = "shiftopt/1"


def to_jsonable(obj):
    """Recursively convert Fractions (to ``"p/q"``), numpy scalars, words and bounds."""
    if isinstance(obj, Bounds):
        return obj.to_json()
    if isinstance(obj, Word):
        return str(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj


def dumps(report: dict) -> str:
    """Deterministic JSON text with the schema tag and sorted keys."""
    doc = {"schema": SCHEMA}
    doc.update(to_jsonable(report))
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _cell(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return str(v)


def to_text(report: dict) -> str:
    """Scalars as aligned ``key  value`` lines, then the ``table`` as columns."""
    doc = to_jsonable(report)
    scalars = {k: v for k, v in doc.items() if k != "table"}
    width = max((len(k) for k in scalars), default=0)
    lines = [f"{k.ljust(width)}  {_cell(scalars[k])}" for k in sorted(scalars)]
    table = doc.get("table") or []
    if table:
        cols = list(table[0].keys())
        cells = [[_cell(row.get(c, "")) for c in cols] for row in table]
        widths = [max(len(c), *(len(r[i]) for r in cells)) for i, c in enumerate(cols)]
        lines.append("")
        lines.append("  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip())
        for r in cells:
            lines.append("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


def to_csv(report: dict) -> str:
    """The ``table`` rows as CSV, or ``key,value`` pairs when there is no table."""
    doc = to_jsonable(report)
    buf = io.StringIO()
    table = doc.get("table")
    if table:
        cols = list(table[0].keys())
        writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        writer.writeheader()
        for row in table:
            writer.writerow({c: _cell(row.get(c, "")) for c in cols})
    else:
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["key", "value"])
        for k in sorted(doc):
            writer.writerow([k, _cell(doc[k])])
    return buf.getvalue()
