"""Critical-line sweeps: one run per r1 with r2 = 1 − r1 + offset."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import pandas as pd

from src.config import ConfigError, RunConfig, validate_config
from src.export import frame_to_csv
from src.runner import execute_run, resolve_output_root

logger = logging.getLogger(__name__)

FAILED = "FAILED"
FAILED_EXIT_CODE = 1

SWEEP_COLUMNS: List[str] = [
    "r1", "r2", "status", "verdict", "exit_code",
    "sup_Lam_3_v", "sup_Lam_3_b", "int_Lam3pr1_v_sq", "int_Lam3pr2_b_sq",
    "t_final", "wall_time_s", "out_dir", "error",
]


def unique_values(values: Sequence[float]) -> List[float]:
    """Drop repeated values, keeping first-seen order."""
    seen: List[float] = []
    for value in values:
        value = float(value)
        if value in seen:
            logger.warning("duplicate r1 value %g dropped from sweep", value)
            continue
        seen.append(value)
    return seen


def run_directory(out_root: Path, r1: float) -> Path:
    return Path(out_root) / f"r1_{r1:.6g}"


def sweep_config(base_config: RunConfig, r1: float, threshold_offset: float = 0.0) -> RunConfig:
    """``base_config`` moved to (r1, 1 − r1 + offset); raises ConfigError if invalid."""
    if not 0.0 < r1 < 1.0:
        raise ConfigError(f"sweep value r1 = {r1!r} must lie in (0, 1)")
    config = replace(
        base_config,
        r1=r1,
        r2=1.0 - r1 + threshold_offset,
        enforce_critical_line=threshold_offset == 0.0,
    )
    return validate_config(config)


def _failed_row(r1: float, r2: float, out_dir: Path, error: str) -> Dict[str, object]:
    return {
        "r1": r1, "r2": r2, "status": FAILED, "verdict": FAILED, "exit_code": FAILED_EXIT_CODE,
        "out_dir": str(out_dir), "error": error,
    }


def _run_one(config: RunConfig, out_dir: Path) -> Dict[str, object]:
    try:
        outcome = execute_run(config, out_dir)
    except (ValueError, OSError) as err:
        logger.error("run r1=%g failed: %s", config.r1, err)
        return _failed_row(config.r1, config.r2, out_dir, str(err))
    report = outcome.report
    return {
        "r1": config.r1,
        "r2": config.r2,
        "status": "OK",
        "verdict": report.verdict,
        "exit_code": report.exit_code,
        "sup_Lam_3_v": report.norm("Lam_3_v").sup,
        "sup_Lam_3_b": report.norm("Lam_3_b").sup,
        "int_Lam3pr1_v_sq": report.integrals["int_Lam3pr1_v_sq"],
        "int_Lam3pr2_b_sq": report.integrals["int_Lam3pr2_b_sq"],
        "t_final": report.t_final,
        "wall_time_s": outcome.wall_time,
        "out_dir": str(out_dir),
        "error": "",
    }


def sweep(
    base_config: RunConfig,
    r1_values: Sequence[float],
    threshold_offset: float = 0.0,
    workers: int = 1,
    out_root: Optional[Path] = None,
) -> pd.DataFrame:
    """Run every r1 value and write ``sweep_summary.csv`` under the output root.

    Invalid values become FAILED rows; the remaining runs still execute. Each
    run writes into its own ``r1_<value>`` directory.
    """
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    root = resolve_output_root(base_config, out_root)
    root.mkdir(parents=True, exist_ok=True)

    rows: Dict[float, Dict[str, object]] = {}
    jobs: Dict[float, RunConfig] = {}
    values = unique_values(r1_values)
    for r1 in values:
        try:
            jobs[r1] = sweep_config(base_config, r1, threshold_offset)
        except ConfigError as err:
            logger.error("sweep value r1=%g rejected: %s", r1, err)
            rows[r1] = _failed_row(r1, 1.0 - r1 + threshold_offset, run_directory(root, r1), str(err))

    logger.info("sweep of %d runs with %d worker(s) into %s", len(jobs), workers, root)
    if workers == 1 or len(jobs) <= 1:
        for r1, config in jobs.items():
            rows[r1] = _run_one(config, run_directory(root, r1))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {r1: pool.submit(_run_one, config, run_directory(root, r1)) for r1, config in jobs.items()}
            for r1, future in futures.items():
                rows[r1] = future.result()

    summary = pd.DataFrame([rows[r1] for r1 in values], columns=SWEEP_COLUMNS)
    frame_to_csv(summary, root / "sweep_summary.csv")
    return summary


def sweep_exit_code(summary: pd.DataFrame) -> int:
    """Worst exit code over the sweep (0 when every run is BOUNDED)."""
    if summary.empty:
        return 0
    return int(summary["exit_code"].max())
