"""Deterministic CSV / JSON / JSON-lines writers.

CSV files start with one ``# config: {...}`` comment line carrying the run
configuration, then a fixed header row.  Read them with
``pandas.read_csv(path, comment="#")`` or skip the first line.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, Mapping, Sequence

SCAN_COLUMNS = ("x", "phi_nb", "phi_fl", "gap")
ITERATE_COLUMNS = ("n", "fl_at_0", "nb_at_0", "limit")
SIMULATE_COLUMNS = ("generation", "alive_fraction", "cum_extinct_fraction")


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, default=str)


def write_csv(path: Path, columns: Sequence[str], rows: Iterable[Sequence], config: Mapping) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        fh.write(f"# config: {_dumps(config)}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return path


def write_json(path: Path, payload: Mapping, config: Mapping) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    body = {"config": dict(config), **payload}
    path.write_text(json.dumps(body, sort_keys=True, indent=2, default=str) + "\n")
    return path


def write_jsonl(path: Path, records: Iterable[Mapping], config: Mapping) -> Path:
    """One JSON object per line; the first line holds the run configuration."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w") as fh:
        fh.write(_dumps({"id": "run_config", "config": dict(config)}) + "\n")
        for rec in records:
            fh.write(_dumps(rec) + "\n")
    return path


def read_csv_rows(path: Path):
    """Rows of a CSV written by :func:`write_csv`, as ``(config, header, rows)``."""
    with Path(path).open() as fh:
        first = fh.readline()
        config = json.loads(first.split(":", 1)[1]) if first.startswith("# config:") else None
        reader = csv.reader(fh)
        header = next(reader)
        return config, header, list(reader)
