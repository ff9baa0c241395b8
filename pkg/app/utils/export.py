"""
CSV / JSON artifact writers
"""
import csv
import io
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from core.config import settings

logger = logging.getLogger(__name__)

# Integers above this lose precision as JSON numbers
JSON_SAFE_INT = 2 ** 53

Row = Dict[str, Any]


# ============================================
# CELL FORMATTING
# ============================================

def format_cell(value: Any) -> str:
    """
    Render one CSV cell

    Floats use repr, which round-trips at 17 significant digits.
    Complex values print as re+imj.
    """
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _format_float(float(value))
    if isinstance(value, (complex, np.complexfloating)):
        z = complex(value)
        sign = "-" if math.copysign(1.0, z.imag) < 0 else "+"
        return f"{_format_float(z.real)}{sign}{_format_float(abs(z.imag))}j"
    return str(value)


def _format_float(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


def to_json_value(value: Any) -> Any:
    """JSON-safe value: big integers and non-finite floats become strings"""
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        v = int(value)
        return str(v) if abs(v) >= JSON_SAFE_INT else v
    if isinstance(value, (float, np.floating)):
        x = float(value)
        return x if math.isfinite(x) else _format_float(x)
    if isinstance(value, (complex, np.complexfloating)):
        return format_cell(value)
    if isinstance(value, Mapping):
        return {str(k): to_json_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [to_json_value(v) for v in value]
    return value


# ============================================
# TABLES
# ============================================

def render_csv(rows: Sequence[Mapping[str, Any]], columns: Sequence[str], meta: Mapping[str, Any]) -> str:
    """
    Comment header, column header, rows; LF line endings

    Args:
        rows: One mapping per row
        columns: Column order; the header row is written even with no rows
        meta: Config echo written as sorted JSON
    """
    buf = io.StringIO()
    buf.write(f"# {settings.APP_NAME} {settings.APP_VERSION}\n")
    buf.write(f"# config: {json.dumps(to_json_value(meta), sort_keys=True)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def render_json(rows: Sequence[Any], meta: Mapping[str, Any]) -> str:
    """
    {"meta": {...}, "rows": [...]} with sorted keys

    Rows are usually mappings; a law table passes its (value, prob) pairs.
    """
    payload = {
        "meta": to_json_value({"version": settings.APP_VERSION, "name": settings.APP_NAME, **meta}),
        "rows": [to_json_value(r) for r in rows],
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def write_table(
    rows: Sequence[Mapping[str, Any]],
    columns: Sequence[str],
    meta: Mapping[str, Any],
    fmt: str = "csv",
    out: Optional[str] = None,
) -> str:
    """
    Render rows and write them to `out`, or return the text when out is None

    Raises:
        OSError: the file cannot be written; the message carries the path
    """
    text = render_csv(rows, columns, meta) if fmt == "csv" else render_json(rows, meta)
    if out is not None:
        _write_text(Path(out), text)
        logger.info("wrote %d rows to %s", len(rows), out)
    return text


def _write_text(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {path}: {exc.strerror}", str(path)) from exc


# ============================================
# PLOT DATA
# ============================================

def emit_plotdata(
    plot_dir: str,
    series: Mapping[str, Tuple[Tuple[str, str], Iterable[Tuple[Any, Any]]]],
) -> List[Path]:
    """
    One two-column CSV per diagnostic

    Args:
        plot_dir: Target directory, created if missing
        series: name -> ((x_label, y_label), [(x, y), ...]); an empty
            stream yields a header-only file

    Returns:
        Paths written, in sorted name order
    """
    root = Path(plot_dir)
    written: List[Path] = []
    for name in sorted(series):
        (x_label, y_label), points = series[name]
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([x_label, y_label])
        for x, y in points:
            writer.writerow([format_cell(x), format_cell(y)])
        path = root / f"{name}.csv"
        _write_text(path, buf.getvalue())
        written.append(path)
    logger.info("emitted %d plot series under %s", len(written), root)
    return written


def columns_of(rows: Sequence[Mapping[str, Any]], default: Sequence[str] = ()) -> List[str]:
    """Column order from the first row, falling back to `default`"""
    return list(rows[0].keys()) if rows else list(default)
