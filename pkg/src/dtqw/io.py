"""Deterministic file output helpers: atomic writes, CSV and JSON emitters.

All emitters produce byte-identical files for identical inputs (no
timestamps, stable key order), so runs can be diffed and cached.
"""

from __future__ import annotations

import csv
import io as _io
import json
import math
import os


def _fmt_cell(x) -> str:
    if isinstance(x, float):
        x = float(x)  # numpy scalars repr verbosely; plain float round-trips
        if math.isnan(x):
            return "nan"
        return repr(x)
    return str(x)


def atomic_write_text(path, text: str) -> None:
    """Write via a temporary file and rename, so failed runs leave no partial file."""
    path = os.fspath(path)
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def write_csv(path, header: list[str], rows) -> None:
    """RFC-4180-style CSV with a header row and '.' decimal separator."""
    buf = _io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt_cell(x) for x in row])
    atomic_write_text(path, buf.getvalue())


def write_json(path, obj) -> None:
    """UTF-8 JSON with sorted keys."""
    atomic_write_text(path, json_text(obj))


def json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def json_complex(z: complex) -> list[float]:
    """JSON encoding of a complex number as [re, im]."""
    z = complex(z)
    return [z.real, z.imag]


def sidecar_path(path) -> str:
    return os.fspath(path) + ".meta.json"


def write_sidecar(path, config: dict, version: str) -> None:
    """Reproducibility sidecar: tool version plus the full config echo."""
    write_json(sidecar_path(path), {"tool": "dtqw", "version": version, "config": config})
