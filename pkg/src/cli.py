"""Command-line entry point: ``python -m src.cli {run,sweep,check,plot}``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from src.config import ConfigError, load_config
from src.export import SnapshotError, read_diagnostics_csv, read_snapshot
from src.plots import write_figures, write_sweep_figure
from src.runner import invariant_check, resolve_output_root, run
from src.sweep import sweep, sweep_exit_code

EXIT_ERROR = 1


def _parse_r1_list(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="MHD-alpha pseudo-spectral solver and regularity monitor")
    parser.add_argument("--verbose", "-v", action="store_true", help="DEBUG logging")
    verbs = parser.add_subparsers(dest="verb", required=True)

    run_parser = verbs.add_parser("run", help="Run one simulation")
    run_parser.add_argument("config", help="Path to a key = value config file")
    run_parser.add_argument("--out", help="Output directory (overrides $MHDA_OUT_DIR and out_dir)")

    sweep_parser = verbs.add_parser("sweep", help="Critical-line sweep over r1")
    sweep_parser.add_argument("config", help="Base config file")
    sweep_parser.add_argument("--r1", required=True, type=_parse_r1_list, help="Comma-separated r1 values")
    sweep_parser.add_argument("--threshold-offset", type=float, default=0.0,
                              help="r2 = 1 - r1 + offset (negative values sweep below the critical line)")
    sweep_parser.add_argument("--workers", type=int, default=1, help="Concurrent runs")
    sweep_parser.add_argument("--out", help="Output root")

    check_parser = verbs.add_parser("check", help="Re-verify the invariants of a snapshot")
    check_parser.add_argument("snapshot", help="Path to a state_<t>.bin file")

    plot_parser = verbs.add_parser("plot", help="Write HTML figures for a diagnostics.csv")
    plot_parser.add_argument("diagnostics", help="Path to diagnostics.csv")
    plot_parser.add_argument("--out", help="HTML output path (default: next to the CSV)")
    return parser


# ── Verbs ─────────────────────────────────────────────────────────────────────

def _run(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    return run(config, Path(args.out) if args.out else None)


def _sweep(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    root = resolve_output_root(config, Path(args.out) if args.out else None)
    summary = sweep(config, args.r1, args.threshold_offset, workers=args.workers, out_root=root)
    write_sweep_figure(summary, root / "sweep_summary.html")

    print("=" * 60)
    print("  CRITICAL-LINE SWEEP")
    print("=" * 60)
    print(f"  {'r1':>8s}{'r2':>8s}  {'verdict':<16s}{'sup L3 v':>13s}{'sup L3 b':>13s}")
    for row in summary.itertuples():
        print(f"  {row.r1:>8.4g}{row.r2:>8.4g}  {row.verdict:<16s}{row.sup_Lam_3_v:>13.5e}{row.sup_Lam_3_b:>13.5e}")
    print("-" * 60)
    print(f"  summary: {root / 'sweep_summary.csv'}")
    print("=" * 60)
    return sweep_exit_code(summary)


def _check(args: argparse.Namespace) -> int:
    state = read_snapshot(Path(args.snapshot))
    ok, defects = invariant_check(state)
    print("=" * 50)
    print(f"  SNAPSHOT CHECK  n={state.grid.n}  t={state.t:.6g}")
    print("=" * 50)
    for name, value in defects.items():
        print(f"  {name:<16s}{value:>14.3e}")
    print("-" * 50)
    print(f"  {'OK' if ok else 'FAILED'}")
    print("=" * 50)
    return 0 if ok else EXIT_ERROR


def _plot(args: argparse.Namespace) -> int:
    csv_path = Path(args.diagnostics)
    frame = read_diagnostics_csv(csv_path)
    out_path = Path(args.out) if args.out else csv_path.with_suffix(".html")
    write_figures(frame, out_path)
    print(f"wrote {out_path}")
    return 0


VERBS = {"run": _run, "sweep": _sweep, "check": _check, "plot": _plot}


def cli_main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return VERBS[args.verb](args)
    except ConfigError as err:
        print(f"Error: {getattr(args, 'config', '')}: {err}", file=sys.stderr)
    except SnapshotError as err:
        print(f"Error: {err}", file=sys.stderr)
    except OSError as err:
        print(f"Error: {err.filename or ''}: {err.strerror or err}", file=sys.stderr)
    except ValueError as err:
        print(f"Error: {err}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(cli_main())
