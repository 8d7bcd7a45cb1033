"""
JSON and CSV report emission

Payloads never contain timestamps, so identical inputs give byte-identical
files; --timestamp-names only changes the file names.
"""

import json
import math
from datetime import datetime
from pathlib import Path

import numpy as np
import pandas as pd

from shared.config.numerics_config import CSV_COLUMNS, REPORT_SCHEMA_VERSION
from shared.utils.logging import get_logger

logger = get_logger(__name__)


def sanitize(value):
    """
    Make a value JSON-safe

    numpy scalars and arrays become Python numbers and lists, non-finite
    floats become the strings "inf", "-inf" and "nan", mapping keys become
    strings.
    """
    if isinstance(value, dict):
        return {str(key): sanitize(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [sanitize(item) for item in value]
    if isinstance(value, np.ndarray):
        return [sanitize(item) for item in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(value, Path):
        return str(value)
    return value


def build_document(run_config, results, passed):
    """
    Report payload shared by every subcommand

    Args:
        run_config: RunConfig (echoed with provenance)
        results: Subcommand results (list or mapping)
        passed: Whether every asserted property held
    """
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "subcommand": run_config.subcommand,
        "seed": run_config.seed,
        "config": run_config.echo(),
        "passed": bool(passed),
        "results": results,
    }


def output_stem(run_config, timestamp=None):
    """<subcommand>_seed<seed>, with a timestamp suffix when requested"""
    stem = f"{run_config.subcommand}_seed{run_config.seed}"
    if run_config.timestamp_names:
        timestamp = timestamp or datetime.now().strftime("%Y%m%d_%H%M%S")
        stem += f"_{timestamp}"
    return stem


def table_frame(rows):
    """
    DataFrame of table rows

    Rows carrying the convergence columns are written in the frozen order
    n_or_level, y0, stderr, gap, verdict; other tables keep their own keys.
    """
    if rows and set(CSV_COLUMNS) <= set(rows[0]):
        return pd.DataFrame(rows, columns=CSV_COLUMNS)
    if not rows:
        return pd.DataFrame(columns=CSV_COLUMNS)
    return pd.DataFrame(rows)


def emit_report(document, tables, run_config):
    """
    Write the JSON document and one CSV per table

    Args:
        document: Output of build_document
        tables: Table name -> list of row dicts
        run_config: RunConfig (output directory, format, naming)

    Returns:
        List of written paths

    Raises:
        OSError: the output directory or a file is not writable
    """
    output_dir = Path(run_config.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    stem = output_stem(run_config)
    written = []

    if run_config.output_format in ("json", "both"):
        path = output_dir / f"{stem}.json"
        text = json.dumps(sanitize(document), indent=2, sort_keys=True, allow_nan=False)
        path.write_text(text + "\n", encoding="utf-8")
        written.append(path)

    if run_config.output_format in ("csv", "both"):
        for name, rows in sorted(tables.items()):
            path = output_dir / f"{stem}_{name}.csv"
            table_frame(rows).to_csv(path, index=False)
            written.append(path)

    for path in written:
        logger.info(f"Wrote {path}")
    return written
