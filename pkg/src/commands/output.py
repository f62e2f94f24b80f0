"""
Output helpers shared by the subcommands

Machine output goes to --out or stdout and never carries colour codes;
status lines go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path
from typing import Any, Iterable, Mapping, Optional

from ..core.constants import COLORS
from ..core.matrix_io import dumps_json, write_text


def emit(args: argparse.Namespace, text: str) -> None:
    """Write machine output to args.out (if set) or stdout"""
    out: Optional[Path] = getattr(args, "out", None)
    if out is not None:
        write_text(out, text)
        status(COLORS.success(f"Wrote {out}"))
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def emit_record(args: argparse.Namespace, record: Mapping[str, Any]) -> None:
    """A dict as JSON, or as a one-row CSV table with --format csv"""
    if getattr(args, "format", "json") == "csv":
        emit(args, csv_table([record]))
    else:
        emit(args, dumps_json(record))


def csv_table(rows: Iterable[Mapping[str, Any]], columns: Optional[list[str]] = None) -> str:
    """Header plus one line per row; None becomes an empty cell, lists are skipped"""
    rows = list(rows)
    if columns is None:
        columns = [k for k, v in rows[0].items() if not isinstance(v, (list, dict))] if rows else []
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(["" if row.get(c) is None else _cell(row[c]) for c in columns])
    return buf.getvalue()


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def status(line: str) -> None:
    """Human status line on stderr"""
    print(line, file=sys.stderr)
