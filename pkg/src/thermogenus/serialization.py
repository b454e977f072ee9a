"""
JSON and CSV emission.

Floats are written with their shortest round-trip representation and exact
rationals as "p/q" strings, so an artifact reproduces byte for byte for the
same inputs.
"""

from __future__ import annotations

import json
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd

lgr = logging.getLogger(__name__)

OUTPUT_DIR_ENV = "THERMOGENUS_OUTPUT_DIR"


def _default(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def to_json_text(payload) -> str:
    return json.dumps(payload, indent=2, default=_default) + "\n"


def _shortest(value) -> str:
    return repr(float(value))


def dataframe_to_csv(table: pd.DataFrame) -> str:
    """CSV text with every float column in shortest round-trip form."""
    out = table.copy()
    for column in out.columns:
        if pd.api.types.is_float_dtype(out[column]):
            out[column] = out[column].map(_shortest)
        elif out[column].dtype == object:
            out[column] = out[column].map(lambda v: str(v) if isinstance(v, Fraction) else v)
    return out.to_csv(index=False, lineterminator="\n")


def resolve_output_path(output: Optional[Union[str, Path]], output_dir: Optional[str] = None) -> Optional[Path]:
    """
    Where an artifact goes: None means standard output.

    A relative path is placed under output_dir, falling back to the
    THERMOGENUS_OUTPUT_DIR environment variable.
    """
    if output is None or str(output) == "-":
        return None
    path = Path(output).expanduser()
    base = output_dir or os.environ.get(OUTPUT_DIR_ENV)
    if not path.is_absolute() and base:
        path = Path(base).expanduser() / path
    return path


def write_artifact(text: str, path: Optional[Path], stream=None) -> None:
    if path is None:
        stream = stream or sys.stdout
        stream.write(text)
        stream.flush()
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as f:
        f.write(text)
    lgr.info(f"Wrote {len(text)} bytes to {path}")
