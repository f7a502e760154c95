"""CSV and manifest serialization for experiment outputs.

The CSV schema is fixed: ``axis,arch,mean_sum_rate,std_err,n_trials,eta_rf_mean``
with one row per architecture per axis point.  Floats are written with 17
significant digits so a rerun with the same seed is byte-identical and
downstream plotting is lossless.
"""

from __future__ import annotations

import json
import math
import os
from pathlib import Path
from typing import IO

from .harness import SweepTable

CSV_HEADER = "axis,arch,mean_sum_rate,std_err,n_trials,eta_rf_mean"


def format_value(value: float) -> str:
    return f"{value:.17g}"


def sweep_csv_lines(table: SweepTable) -> list[str]:
    lines = [CSV_HEADER]
    for row in table.rows:
        lines.append(
            ",".join(
                (
                    format_value(row.axis),
                    row.arch,
                    format_value(row.mean_sum_rate),
                    format_value(row.std_err),
                    str(row.n_trials),
                    format_value(row.eta_rf_mean),
                )
            )
        )
    return lines


def write_sweep_csv(destination: IO[str] | str | Path, table: SweepTable) -> None:
    text = "\n".join(sweep_csv_lines(table)) + "\n"
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        Path(destination).write_text(text)


def table_has_nonfinite(table: SweepTable) -> list[str]:
    """Offending rows (as CSV lines) containing NaN or infinities."""
    bad = []
    for row in table.rows:
        if not all(math.isfinite(v) for v in (row.axis, row.mean_sum_rate, row.std_err, row.eta_rf_mean)):
            bad.append(f"{format_value(row.axis)},{row.arch}")
    return bad


def write_manifest(path: Path, manifest: dict) -> None:
    """Write the run manifest atomically next to the results."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    os.replace(tmp, path)
