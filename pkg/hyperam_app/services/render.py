from __future__ import annotations

import csv
import io
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Mapping, Optional

from pydantic import BaseModel

from hyperam_app import __version__
from hyperam_app.core.exact import render_scalar


def render_cell(value: Any) -> str:
    """One CSV cell: rationals in lowest terms, floats with 17 significant digits."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return render_scalar(value)
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, Enum):
        return str(value.value)
    return str(value)


def to_csv(
    schema: str,
    columns: List[str],
    rows: Iterable[Mapping[str, Any]],
    meta: Optional[Dict[str, str]] = None,
) -> str:
    buffer = io.StringIO()
    header = [f"hyperam {__version__}", schema]
    header += [f"{key}={value}" for key, value in (meta or {}).items()]
    header.append("columns=" + ",".join(columns))
    buffer.write("# " + " | ".join(header) + "\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([render_cell(row.get(col)) for col in columns])
    return buffer.getvalue()


def model_rows(models: Iterable[BaseModel]) -> List[Dict[str, Any]]:
    # shallow field mapping; Fractions and enums stay typed for render_cell
    return [dict(m) for m in models]


def to_json(model: BaseModel) -> str:
    return model.model_dump_json(indent=2) + "\n"
