"""Run artifacts: diagnostics CSV, binary state snapshots, verdict text, JSON summary."""

from __future__ import annotations

import json
import logging
import struct
from dataclasses import asdict
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

import numpy as np
import pandas as pd

from src.diagnostics import CSV_COLUMNS, DiagnosticsRecord, records_to_frame
from src.health import RegularityReport, format_report
from src.model import MhdAlphaState
from src.spectral import ScalarField, SpectralGrid

logger = logging.getLogger(__name__)

CSV_FLOAT_FORMAT = "%.17g"

# magic, version, n, reserved, t, L
SNAPSHOT_HEADER = struct.Struct("<4sIIIdd")
SNAPSHOT_MAGIC = b"MHDA"
SNAPSHOT_VERSION = 1
_COEFF_DTYPE = np.dtype("<c16")


class SnapshotError(ValueError):
    """A snapshot file is malformed or from an unsupported format version."""


# ── Diagnostics CSV ───────────────────────────────────────────────────────────

def diagnostics_to_csv(history: Sequence[DiagnosticsRecord]) -> str:
    """History as CSV text in the fixed column order."""
    return records_to_frame(history).to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")


def write_diagnostics_csv(history: Sequence[DiagnosticsRecord], path: Path) -> Path:
    path = Path(path)
    path.write_text(diagnostics_to_csv(history), encoding="utf-8")
    logger.info("wrote %d diagnostics rows to %s", len(history), path)
    return path


def read_diagnostics_csv(path: Path) -> pd.DataFrame:
    frame = pd.read_csv(path, float_precision="round_trip")
    if list(frame.columns) != CSV_COLUMNS:
        raise ValueError(f"{path}: unexpected diagnostics columns {list(frame.columns)}")
    return frame


def frame_to_csv(frame: pd.DataFrame, path: Path) -> Path:
    """Write any result table with the round-trip float format."""
    path = Path(path)
    frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    logger.info("wrote %s", path)
    return path


# ── Snapshots ─────────────────────────────────────────────────────────────────

def snapshot_filename(t: float) -> str:
    return f"state_{t:.6f}.bin"


def snapshot_to_bytes(state: MhdAlphaState) -> bytes:
    """32-byte header then w and a coefficients as little-endian (re, im) float64 pairs."""
    grid = state.grid
    header = SNAPSHOT_HEADER.pack(SNAPSHOT_MAGIC, SNAPSHOT_VERSION, grid.n, 0, float(state.t), float(grid.length))
    body = b"".join(np.ascontiguousarray(c, dtype=_COEFF_DTYPE).tobytes() for c in (state.w.coeffs, state.a.coeffs))
    return header + body


def snapshot_from_bytes(data: bytes, source: str = "<bytes>") -> MhdAlphaState:
    if len(data) < SNAPSHOT_HEADER.size:
        raise SnapshotError(f"{source}: truncated header ({len(data)} bytes)")
    magic, version, n, _reserved, t, length = SNAPSHOT_HEADER.unpack_from(data)
    if magic != SNAPSHOT_MAGIC:
        raise SnapshotError(f"{source}: bad magic {magic!r}")
    if version != SNAPSHOT_VERSION:
        raise SnapshotError(f"{source}: unsupported snapshot version {version}")
    expected = SNAPSHOT_HEADER.size + 2 * n * n * _COEFF_DTYPE.itemsize
    if len(data) != expected:
        raise SnapshotError(f"{source}: expected {expected} bytes for n={n}, got {len(data)}")

    coeffs = np.frombuffer(data, dtype=_COEFF_DTYPE, offset=SNAPSHOT_HEADER.size).reshape(2, n, n)
    grid = SpectralGrid(n, length)
    w = ScalarField(grid, coeffs[0].astype(np.complex128))
    a = ScalarField(grid, coeffs[1].astype(np.complex128))
    return MhdAlphaState(t=t, w=w, a=a)


def write_snapshot(state: MhdAlphaState, directory: Path) -> Path:
    path = Path(directory) / snapshot_filename(state.t)
    path.write_bytes(snapshot_to_bytes(state))
    logger.info("wrote snapshot %s", path)
    return path


def read_snapshot(path: Path) -> MhdAlphaState:
    path = Path(path)
    return snapshot_from_bytes(path.read_bytes(), source=str(path))


# ── Verdict and summary ───────────────────────────────────────────────────────

def write_verdict(report: RegularityReport, path: Path) -> Path:
    path = Path(path)
    path.write_text(format_report(report), encoding="utf-8")
    logger.info("wrote verdict %s to %s", report.verdict, path)
    return path


def run_summary_to_json(
    config: Dict[str, Any],
    report: RegularityReport,
    wall_time: Optional[float] = None,
) -> str:
    """Config plus report as pretty JSON."""
    summary: Dict[str, Any] = {
        "config": config,
        "verdict": report.verdict,
        "exit_code": report.exit_code,
        "aborted": report.aborted,
        "abort_reason": report.abort_reason,
        "records": report.records,
        "t_final": report.t_final,
        "critical_line": report.critical_line,
        "norms": [asdict(s) for s in report.norms],
        "integrals": report.integrals,
        "flags": [asdict(f) for f in report.flags],
    }
    if wall_time is not None:
        summary["wall_time_s"] = round(wall_time, 3)
    return json.dumps(summary, indent=2)
