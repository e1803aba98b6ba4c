"""
SKEWTHETA - Run Diagnostic Summary
==================================

Formatted ASCII banner describing the command about to run, the active
numerical configuration and a readiness checklist.  The CLI prints it to
stderr before every command, so stdout stays clean for reports and CSV.

Layout rules:
- Exactly 80 characters wide.
- ASCII-only box drawing.
- Programmatic layout.
"""

from __future__ import annotations

import os
import sys

WIDTH = 80


def _center(text: str) -> str:
    """Center text within WIDTH characters."""
    return f"| {text[:WIDTH - 4].center(WIDTH - 4)} |"


def _left(text: str) -> str:
    """Left-align text within WIDTH characters."""
    return f"| {text[:WIDTH - 4].ljust(WIDTH - 4)} |"


def _line(char: str = "-") -> str:
    """Return a horizontal separator line."""
    return f"+{char * (WIDTH - 2)}+"


def format_summary(config: dict, command: str = "", run_id: str = "") -> str:
    """Multi-line run banner.

    Args:
        config:  Dictionary of configuration fields (asdict(CONFIG)).
        command: Human-readable command line, e.g. "fig 1" or "check parseval".
        run_id:  Run UUID from src.logger.

    Returns:
        Formatted 80-character wide ASCII summary.
    """
    lines = []

    # --- SECTION 1: Command ---
    lines.append(_line("="))
    lines.append(_center("SECTION 1 - Command"))
    lines.append(_line("-"))
    lines.append(_left(f"Command : {command or 'N/A'}"))
    lines.append(_left(f"Run id  : {run_id or 'N/A'}"))

    # --- SECTION 2: Active Configuration ---
    lines.append(_line("="))
    lines.append(_center("SECTION 2 - Active Configuration"))
    lines.append(_line("-"))

    sampling = (
        f"Seed: {config.get('seed', 0)} | Samples: {config.get('sample_count', 0)} | "
        f"Block: {config.get('sample_block_size', 0)} | Workers: {config.get('workers', 1)}"
    )
    series = (
        f"n_max: {config.get('series_n_max', 0)} | GL order: {config.get('gauss_legendre_order', 0)} | "
        f"Panels x{config.get('quadrature_panels', 1)} | Bin width: {config.get('bin_width', 0.0)}"
    )
    lines.append(_center(sampling))
    lines.append(_center(series))

    # --- SECTION 3: Readiness Checklist ---
    lines.append(_line("="))
    lines.append(_center("SECTION 3 - Readiness Checklist"))
    lines.append(_line("-"))

    # reaching this point means validate_config passed
    lines.append(_left("[OK] Config validated"))

    out_dir = config.get("output_dir", "")
    if out_dir and os.path.isdir(out_dir):
        lines.append(_left(f"[OK] Output directory present ({out_dir})"))
    else:
        lines.append(_left(f"[WARN] Output directory missing, created on first write ({out_dir})"))

    n_max = config.get("series_n_max", 0)
    if n_max < 1000:
        lines.append(_left(f"[WARN] series_n_max={n_max} below the figure cutoff of 1000"))
    else:
        lines.append(_left(f"[OK] Series cutoff n = +/-{n_max}"))

    if config.get("workers", 1) > 1:
        lines.append(_left(f"[OK] Block-parallel sampling on {config['workers']} threads"))

    lines.append(_line("="))

    return "\n".join(lines)


def print_run_summary(config: dict, command: str = "", run_id: str = "") -> None:
    """Print the formatted summary to stderr."""
    print(format_summary(config, command, run_id), file=sys.stderr)
