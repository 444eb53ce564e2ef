"""CSV and JSON-lines writers with fixed number formatting."""
import csv
import json
import math
import sys

from contextlib import contextmanager
from enum import Enum
from typing import Any, Iterable, Mapping, Sequence

from .config import OutputFormat


def format_value(value: Any) -> str:
    """Render a value with 12 significant digits for floats."""
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return 'nan'
        return '{:.11e}'.format(value)
    return str(value)


def json_value(value: Any) -> Any:
    """JSON counterpart of :func:`format_value`, nan as null."""
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


@contextmanager
def open_output(path: str = None):
    """Output file, or standard output when ``path`` is None."""
    if path is None:
        yield sys.stdout
        return
    with open(path, 'w', newline='', encoding='utf-8') as f:
        yield f


def write_rows(
    stream,
    columns: Sequence[str],
    rows: Iterable[Mapping[str, Any]],
    fmt: OutputFormat = OutputFormat.csv,
    metadata: Mapping[str, Any] = None,
):
    """Write a header row and ``rows`` restricted to ``columns``."""
    if OutputFormat(fmt) is OutputFormat.jsonl:
        if metadata:
            meta = {k: json_value(v) for k, v in metadata.items()}
            stream.write(json.dumps(meta, allow_nan=False) + '\n')
        for row in rows:
            record = {c: json_value(row[c]) for c in columns}
            stream.write(json.dumps(record, allow_nan=False) + '\n')
        return

    for key, value in (metadata or {}).items():
        stream.write(f'# {key}={format_value(value)}\n')
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row[c]) for c in columns])
