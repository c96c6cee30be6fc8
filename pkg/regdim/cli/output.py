"""
CSV Output

RFC-4180 tables with a leading `# config_sha256=` comment line. Floats are
written with 12 significant digits and infinities as "inf".
"""

import csv
import io
import math
import sys
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Sequence


def format_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return format(value, ".12g")
    if isinstance(value, (tuple, list)):
        return " ".join(format_value(v) for v in value)
    return str(value)


def render_csv(columns: Sequence[str], rows: Iterable[Dict[str, Any]], config_hash: Optional[str] = None) -> str:
    buffer = io.StringIO()
    if config_hash is not None:
        buffer.write(f"# config_sha256={config_hash}\r\n")
    writer = csv.writer(buffer, lineterminator="\r\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row.get(c)) for c in columns])
    return buffer.getvalue()


def write_output(text: str, out: Optional[str]) -> None:
    """Write once to the output file, or to stdout when no path is given."""
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="")
    else:
        sys.stdout.write(text)
        sys.stdout.flush()
