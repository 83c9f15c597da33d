"""
Run output persistence: CSV tables, JSON sidecars and state-vector dumps.
"""

import json
import struct
import uuid
from datetime import datetime
from pathlib import Path

import numpy as np
import pandas as pd

from wgslab.exact import StateVector
from wgslab.utils.parsers import ParseError

STATE_MAGIC = b"WGSV"
STATE_VERSION = 1
# magic, version u32, n_qubits u32, reserved u32
STATE_HEADER = struct.Struct("<4sIII")


def generate_output_stem(outdir: str | Path, subcommand: str) -> Path:
    """
    Build <outdir>/<subcommand>-<timestamp>, adding a short UUID if taken.

    Args:
        outdir: Output directory
        subcommand: CLI subcommand name

    Returns:
        Path without extension
    """
    timestamp = datetime.now().strftime("%Y%m%dT%H%M%S")
    stem = Path(outdir) / f"{subcommand}-{timestamp}"
    if stem.with_suffix(".csv").exists() or stem.with_suffix(".json").exists():
        short_uuid = str(uuid.uuid4())[:8]
        stem = Path(outdir) / f"{subcommand}-{timestamp}-{short_uuid}"
    return stem


def write_csv(frame: pd.DataFrame, path: str | Path) -> None:
    """UTF-8, comma-delimited, header row, "\\n" line endings, no index."""
    frame.to_csv(path, index=False, encoding="utf-8", lineterminator="\n")


def write_run_outputs(
    frame: pd.DataFrame,
    outdir: str | Path,
    subcommand: str,
    sidecar: dict,
) -> tuple[bool, str, str]:
    """
    Write a run's CSV table and its JSON sidecar.

    Args:
        frame: Result table
        outdir: Output directory (created if missing)
        subcommand: CLI subcommand name, used in the file name
        sidecar: Run metadata (config, version, wall time, summary)

    Returns:
        tuple: (success: bool, csv_path: str, error_message: str)
            - success: True if both files were written
            - csv_path: Path of the CSV (empty if failed)
            - error_message: Error description (empty if succeeded)
    """
    try:
        Path(outdir).mkdir(parents=True, exist_ok=True)
        stem = generate_output_stem(outdir, subcommand)
        csv_path = stem.with_suffix(".csv")
        write_csv(frame, csv_path)

        with open(stem.with_suffix(".json"), "w", encoding="utf-8") as f:
            json.dump(sidecar, f, indent=2, sort_keys=True, default=str)
            f.write("\n")

        return True, str(csv_path), ""

    except Exception as e:
        return False, "", f"Write error: {str(e)}"


def dump_state(state: StateVector, path: str | Path) -> tuple[bool, str]:
    """
    Dump amplitudes as a 16-byte header plus little-endian complex128 values.

    Returns:
        tuple: (success: bool, error_message: str)
    """
    try:
        header = STATE_HEADER.pack(STATE_MAGIC, STATE_VERSION, state.n_qubits, 0)
        with open(path, "wb") as f:
            f.write(header)
            f.write(state.amplitudes.astype("<c16").tobytes())
        return True, ""
    except Exception as e:
        return False, f"Dump error: {str(e)}"


def load_state(path: str | Path) -> StateVector:
    """
    Read a state written by dump_state.

    Raises:
        ParseError: On a bad magic, unknown version or truncated payload
    """
    data = Path(path).read_bytes()
    if len(data) < STATE_HEADER.size:
        raise ParseError(f"{path} is too short for a state header")

    magic, version, n_qubits, _ = STATE_HEADER.unpack_from(data)
    if magic != STATE_MAGIC:
        raise ParseError(f"{path} is not a state dump (magic {magic!r})")
    if version != STATE_VERSION:
        raise ParseError(f"Unsupported state dump version {version}")

    payload = data[STATE_HEADER.size:]
    expected = (2**n_qubits) * 16
    if len(payload) != expected:
        raise ParseError(f"Expected {expected} payload bytes for {n_qubits} qubits, got {len(payload)}")
    return StateVector(np.frombuffer(payload, dtype="<c16").astype(np.complex128))
