"""Deterministic CSV and JSON emission for sweep results.

Identical inputs must produce byte-identical output files, so floats are
formatted explicitly: scientific notation with 15 significant digits in CSV
and 17 (full round-trip precision) in JSON.  Non-finite values serialize as
"inf"/"nan" strings in CSV and null in JSON.
"""

from __future__ import annotations

import csv
import io
import math
from typing import Iterable, Sequence

_CSV_FLOAT = "{:.14e}"
_JSON_FLOAT = "{:.16e}"


def format_csv_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            return "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")
        return _CSV_FLOAT.format(value)
    return str(value)


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    """Render rows to RFC-4180-style CSV with a header line."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_csv_value(v) for v in row])
    return buf.getvalue()


def _json_fragment(obj, out: list[str], indent: int) -> None:
    pad = " " * indent
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(_JSON_FLOAT.format(obj) if math.isfinite(obj) else "null")
    elif isinstance(obj, str):
        out.append('"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"')
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        items = list(obj.items())
        for i, (key, value) in enumerate(items):
            out.append(pad + "  " + '"' + str(key) + '": ')
            _json_fragment(value, out, indent + 2)
            out.append(",\n" if i < len(items) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        out.append("[\n")
        for i, value in enumerate(obj):
            out.append(pad + "  ")
            _json_fragment(value, out, indent + 2)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(pad + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def json_text(obj) -> str:
    """Render a dict/list tree to JSON with fixed float formatting."""
    out: list[str] = []
    _json_fragment(obj, out, 0)
    out.append("\n")
    return "".join(out)
