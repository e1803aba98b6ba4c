"""
SKEWTHETA - Command-Line Entry Point
====================================

    python -m src.cli fig {1,2}                     reference histograms + JSON sidecar
    python -m src.cli renorm --u U --N N            renormalization report (JSON)
    python -m src.cli check SUITE                   invariant suite, one line per check
    python -m src.cli sample {x,xtilde,y,y00,alpha0} [params]
                                                    raw samples (CSV), summary (JSON)
                                                    or --histogram

Real-valued flags accept decimals, exact fractions "p/q" and the token
``pi-3``.  Common flags (--seed, --samples, --n-max, --bin-width, --out,
--format) go before the command.

Exit codes
----------
    0   success, every check passed
    1   a quantitative check failed
    2   usage error, domain error (ValueError) or I/O failure

Outputs are byte-identical for identical arguments: CSV uses '.' decimals,
',' separators and LF line endings; JSON objects are flat with snake-case
keys.  Logs and the run banner go to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path

import pandas as pd

from src.checks import SUITES, figure_report, run_suite
from src.config import CONFIG as _cfg
from src.config import validate_config
from src.dist_stats import EmpiricalDistribution, abs_square_mean, histogram
from src.limit_laws import LimitParams, alpha0_sample, xtilde_sample, y00_sample, y_sample
from src.logger import RUN_ID, configure_logging
from src.renormalization import cusp_height, renorm_data, renorm_frame
from src.run_summary import print_run_summary
from src.skew_dynamics import Harmonic, x_sample

log = logging.getLogger(__name__)

SAMPLE_KINDS: tuple[str, ...] = ("x", "xtilde", "y", "y00", "alpha0")


# ---------------------------------------------------------------------------
# Run configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RunConfig:
    """Parsed command line of one invocation."""

    command: str
    target: str = ""
    u: float | None = None
    alpha: float | None = None
    N: int | None = None
    k: int = 0
    l: int = 1  # noqa: E741
    omega: float | None = None
    varphi: float | None = None
    x_fixed: float | None = None
    samples: int | None = None
    n_max: int = 1000
    bin_width: float = 0.1
    seed: int = 0
    out_path: str | None = None
    format: str = "csv"
    histogram: bool = False

    @property
    def sample_count(self) -> int:
        return _cfg.sample_count if self.samples is None else self.samples


def parse_real(text: str) -> float:
    """Decimal, exact fraction "p/q", or the token "pi-3"."""
    token = text.strip().lower()
    if token == "pi-3":
        return math.pi - 3.0
    try:
        return float(Fraction(token)) if "/" in token else float(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a real number: {text!r}") from exc


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise ValueError(f"expected a positive integer (got {text!r})")
    return value


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise ValueError(f"expected a nonnegative integer (got {text!r})")
    return value


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------

def _open_target(path: str | None):
    if path is None or path == "-":
        return sys.stdout
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    return target.open("w", encoding="utf-8", newline="")


def _write_csv(frame: pd.DataFrame, path: str | None) -> None:
    handle = _open_target(path)
    try:
        frame.to_csv(handle, index=False, lineterminator="\n")
    finally:
        if handle is not sys.stdout:
            handle.close()


def _write_json(record: dict, path: str | None) -> None:
    handle = _open_target(path)
    try:
        handle.write(json.dumps(record, indent=2) + "\n")
    finally:
        if handle is not sys.stdout:
            handle.close()


def _snake(record: dict) -> dict:
    return {key.lower(): value for key, value in record.items()}


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_fig(n: int, cfg: RunConfig) -> int:
    """Histograms of |X~| and |Y| for figure n, plus the renormalization sidecar."""
    sidecar, xt, ys = figure_report(n, cfg.seed, cfg.sample_count, cfg.n_max)
    n_bins = int(max(xt.samples[-1], ys.samples[-1]) // cfg.bin_width) + 1
    hx = histogram(xt, cfg.bin_width, normalized=True, n_bins=n_bins)
    hy = histogram(ys, cfg.bin_width, normalized=True, n_bins=n_bins)
    table = pd.DataFrame({
        "bin_left": hx.bin_left,
        "xtilde_density": hx.values,
        "y_density": hy.values,
    })

    csv_path = cfg.out_path or str(Path(_cfg.output_dir) / f"fig{n}.csv")
    _write_csv(table, csv_path)
    if csv_path == "-":
        _write_json(sidecar, None)
    else:
        _write_json(sidecar, str(Path(csv_path).with_suffix(".json")))

    log.info(
        "figure written",
        extra={"figure": n, "csv": csv_path, "ks": sidecar["ks"], "passed": sidecar["passed"]},
    )
    return 0 if sidecar["passed"] else 1


def cmd_renorm(cfg: RunConfig) -> int:
    """JSON report of the renormalization data, frame point and residuals."""
    if cfg.u is None or cfg.N is None:
        raise ValueError("renorm needs --u and --N")
    data = renorm_data(cfg.u, cfg.N)
    frame, residuals = renorm_frame(cfg.u, cfg.N)
    report = _snake(data.as_record())
    report.update({
        "frame_u": frame.u,
        "frame_v": frame.v,
        "frame_phi": frame.phi,
        "cusp_height": cusp_height(cfg.u, cfg.N),
    })
    report.update(residuals.as_record())
    report["passed"] = residuals.ok()
    _write_json(report, cfg.out_path)
    return 0 if report["passed"] else 1


def cmd_check(suite: str, cfg: RunConfig) -> int:
    """Run a suite, print one "[PASS]/[FAIL] name measured threshold" line per check."""
    results = run_suite(suite, cfg.seed, cfg.samples)
    handle = _open_target(cfg.out_path)
    try:
        for r in results:
            handle.write(r.format_line() + "\n")
    finally:
        if handle is not sys.stdout:
            handle.close()
    return 0 if all(r.passed for r in results) else 1


def _draw(kind: str, cfg: RunConfig) -> EmpiricalDistribution:
    count, seed = cfg.sample_count, cfg.seed
    if kind in ("x", "xtilde"):
        if cfg.N is None or cfg.alpha is None:
            raise ValueError(f"sample {kind} needs --N and --alpha")
        h = Harmonic(cfg.k, cfg.l)
        sampler = x_sample if kind == "x" else xtilde_sample
        return sampler(cfg.N, cfg.alpha, h, count, seed)
    if kind == "y":
        if cfg.omega is None or cfg.varphi is None:
            raise ValueError("sample y needs --omega and --varphi")
        return y_sample(LimitParams(cfg.omega, cfg.varphi, cfg.n_max), count, seed)
    if kind == "y00":
        return y00_sample(count, seed, n_max=cfg.n_max, x_fixed=cfg.x_fixed)
    if kind == "alpha0":
        return alpha0_sample(count, seed)
    raise ValueError(f"unknown sample kind {kind!r}")


def cmd_sample(kind: str, cfg: RunConfig) -> int:
    """Raw samples (csv), a histogram (--histogram) or a summary record (json)."""
    dist = _draw(kind, cfg)
    if cfg.histogram:
        _write_csv(histogram(dist, cfg.bin_width, normalized=True).to_frame("density"), cfg.out_path)
    elif cfg.format == "json":
        _write_json({
            "kind": kind,
            "count": dist.count,
            "seed": dist.seed,
            "mean": dist.mean(),
            "median": dist.median(),
            "mean_abs_square": abs_square_mean(dist),
        }, cfg.out_path)
    else:
        _write_csv(dist.to_frame(), cfg.out_path)
    return 0


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def _add_common(parser: argparse.ArgumentParser, suppress: bool) -> None:
    """Flags accepted before and after the subcommand.

    The subcommand copies default to SUPPRESS so they only override the
    top-level value when given.
    """
    def _default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--seed", type=_nonnegative_int, default=_default(_cfg.seed))
    parser.add_argument("--samples", type=_positive_int, default=_default(None),
                        help=f"draws per sampler (default {_cfg.sample_count}; suites use their own)")
    parser.add_argument("--n-max", type=_positive_int, default=_default(_cfg.series_n_max))
    parser.add_argument("--bin-width", type=parse_real, default=_default(_cfg.bin_width))
    parser.add_argument("--out", default=_default(None), help="output path, '-' for stdout")
    parser.add_argument("--format", choices=("csv", "json"), default=_default("csv"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="python -m src.cli",
        description="SKEWTHETA - theta sums, renormalization and limit laws of skew translations",
    )
    _add_common(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _add_common(common, suppress=True)

    sub = parser.add_subparsers(dest="command", required=True)

    fig = sub.add_parser("fig", parents=[common],
                         help="reference histograms for u = pi - 3 (1: N = 2260, 2: N = 2300)")
    fig.add_argument("figure", type=int, choices=(1, 2))

    renorm = sub.add_parser("renorm", parents=[common], help="renormalization report for (u, N)")
    renorm.add_argument("--u", type=parse_real, required=True)
    renorm.add_argument("--N", dest="n", type=_positive_int, required=True)

    check = sub.add_parser("check", parents=[common], help="run an invariant suite")
    check.add_argument("suite", choices=sorted(SUITES))

    sample = sub.add_parser("sample", parents=[common], help="draw from a sampler")
    sample.add_argument("kind", choices=SAMPLE_KINDS)
    sample.add_argument("--N", dest="n", type=_positive_int, default=None)
    sample.add_argument("--alpha", type=parse_real, default=None)
    sample.add_argument("--k", type=int, default=0)
    sample.add_argument("--l", type=int, default=1)
    sample.add_argument("--omega", type=parse_real, default=None)
    sample.add_argument("--varphi", type=parse_real, default=None)
    sample.add_argument("--x-fixed", type=parse_real, default=None)
    sample.add_argument("--histogram", action="store_true")
    return parser


def _run_config(args: argparse.Namespace) -> RunConfig:
    target = {
        "fig": lambda: str(args.figure),
        "check": lambda: args.suite,
        "sample": lambda: args.kind,
    }.get(args.command, lambda: "")()
    return RunConfig(
        command=args.command,
        target=target,
        u=getattr(args, "u", None),
        alpha=getattr(args, "alpha", None),
        N=getattr(args, "n", None),
        k=getattr(args, "k", 0),
        l=getattr(args, "l", 1),
        omega=getattr(args, "omega", None),
        varphi=getattr(args, "varphi", None),
        x_fixed=getattr(args, "x_fixed", None),
        samples=args.samples,
        n_max=args.n_max,
        bin_width=args.bin_width,
        seed=args.seed,
        out_path=args.out,
        format=args.format,
        histogram=getattr(args, "histogram", False),
    )


def dispatch(cfg: RunConfig) -> int:
    if cfg.command == "fig":
        return cmd_fig(int(cfg.target), cfg)
    if cfg.command == "renorm":
        return cmd_renorm(cfg)
    if cfg.command == "check":
        return cmd_check(cfg.target, cfg)
    return cmd_sample(cfg.target, cfg)


def main(argv: list[str] | None = None) -> int:
    """Parse, run, and map the outcome to an exit code."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    configure_logging(level=_cfg.log_level)
    cfg = _run_config(args)
    try:
        validate_config(_cfg)
        if cfg.bin_width <= 0.0:
            raise ValueError(f"bin_width must be > 0 (got {cfg.bin_width}).")
        print_run_summary(asdict(_cfg), f"{cfg.command} {cfg.target}".strip(), RUN_ID)
        code = dispatch(cfg)
    except (ValueError, OSError) as exc:
        log.error("command failed", extra={"command": cfg.command, "error": str(exc)})
        print(f"error: {exc}", file=sys.stderr)
        return 2

    log.info("command finished", extra={"command": cfg.command, "target": cfg.target, "exit_code": code})
    return code


if __name__ == "__main__":
    sys.exit(main())
