"""Report serialization: JSON is the authoritative record, CSV the summary.

The JSON payload is byte-stable across runs of the same config and seed: keys
are sorted, wall times are excluded, and every value inside is produced by
exact arithmetic.  The CSV adds the wall-time column for humans and is *not*
expected to be byte-identical between runs.
"""

from __future__ import annotations

import csv
import io
import json

SCHEMA_VERSION = 1

CSV_COLUMNS = ("id", "type", "status", "summary", "error", "wall_time_s")


def report_json_bytes(config, rows) -> bytes:
    payload = {
        "schema_version": SCHEMA_VERSION,
        "config": config.echo(),
        "results": [row.to_json_obj() for row in rows],
    }
    text = json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False)
    return (text + "\n").encode("utf-8")


def _summarize(values) -> str:
    if not values:
        return ""
    parts = []
    for key in sorted(values):
        v = values[key]
        if isinstance(v, dict):
            parts.append(f"{key}={{{len(v)} entries}}")
        elif isinstance(v, list):
            parts.append(f"{key}=[{len(v)} rows]")
        else:
            parts.append(f"{key}={v}")
    return "; ".join(parts)


def report_csv_text(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([row.ident, row.kind, row.status,
                         _summarize(row.values), row.error or "",
                         f"{row.wall_time:.3f}"])
    return buf.getvalue()


def write_reports(config, rows, out_dir, fmt: str = "both") -> list:
    """Write report.json and/or report.csv into out_dir; returns the paths."""
    import os

    os.makedirs(out_dir, exist_ok=True)
    written = []
    if fmt in ("json", "both"):
        path = os.path.join(out_dir, "report.json")
        with open(path, "wb") as fh:
            fh.write(report_json_bytes(config, rows))
        written.append(path)
    if fmt in ("csv", "both"):
        path = os.path.join(out_dir, "report.csv")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(report_csv_text(rows))
        written.append(path)
    return written
