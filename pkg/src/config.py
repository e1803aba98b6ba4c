"""
SKEWTHETA - Centralized Configuration
=====================================

Single source of truth for every tunable constant of the library and CLI.
All modules import exclusively from here; no magic numbers appear elsewhere.

Environment overrides
---------------------
Every field reads from an env variable of the same upper-case name.  A ``.env``
file in the working directory is loaded (python-dotenv) before the singleton
is built, so values can be pinned per checkout without exporting anything.

Inspecting the current config
------------------------------
    python -m src.config
"""

import json
import logging
import os
from dataclasses import asdict, dataclass, field

from dotenv import load_dotenv

load_dotenv()


# ---------------------------------------------------------------------------
# Config dataclass
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Config:
    """Immutable runtime configuration for skewtheta."""

    # ------------------------------------------------------------------
    # Logging
    # ------------------------------------------------------------------

    log_level: str = field(
        default_factory=lambda: os.getenv("LOG_LEVEL", "INFO").upper()
    )
    # Python logging level for the whole process.
    # Valid values: DEBUG, INFO, WARNING, ERROR, CRITICAL.

    # ------------------------------------------------------------------
    # Sampling (sampling.py, every sampler)
    # ------------------------------------------------------------------

    seed: int = field(
        default_factory=lambda: int(os.getenv("SEED", "0"))
    )
    # Default master seed when the CLI is not given --seed.
    # Valid range: >= 0.

    sample_count: int = field(
        default_factory=lambda: int(os.getenv("SAMPLE_COUNT", "10000"))
    )
    # Default number of draws per sampler ("sampled over 10,000 points").
    # Valid range: >= 1.

    sample_block_size: int = field(
        default_factory=lambda: int(os.getenv("SAMPLE_BLOCK_SIZE", "4096"))
    )
    # Draws per seeded block.  Block b of a stream depends only on
    # (seed, stream, b), so changing WORKERS never changes the output.
    # Changing this value DOES change the output for a given seed.
    # Valid range: >= 1.

    batch_elements: int = field(
        default_factory=lambda: int(os.getenv("BATCH_ELEMENTS", "2097152"))
    )
    # Upper bound on (draws x series terms) evaluated in one numpy batch.
    # Caps peak memory of the vectorised Birkhoff / theta / Y evaluations.
    # Valid range: >= 1024.

    workers: int = field(
        default_factory=lambda: int(os.getenv("WORKERS", "1"))
    )
    # Thread-pool size used to evaluate sample blocks.
    # Valid range: >= 1 (1 = sequential).

    # ------------------------------------------------------------------
    # Orbits (skew_dynamics.py, renormalization.py)
    # ------------------------------------------------------------------

    max_orbit_length: int = field(
        default_factory=lambda: int(os.getenv("MAX_ORBIT_LENGTH", "1000000"))
    )
    # Largest N accepted by Birkhoff sums and the c_N scan.
    # n(n-1)/2 must stay exactly representable in a double.
    # Valid range: 1 .. 1_000_000.

    # ------------------------------------------------------------------
    # Series and quadrature (theta_engine.py, limit_laws.py)
    # ------------------------------------------------------------------

    series_n_max: int = field(
        default_factory=lambda: int(os.getenv("SERIES_N_MAX", "1000"))
    )
    # Symmetric cutoff |n| <= n_max for chi^(0)- and Y-type series
    # ("truncated at n = +-1000").
    # Valid range: >= 1.

    gauss_legendre_order: int = field(
        default_factory=lambda: int(os.getenv("GAUSS_LEGENDRE_ORDER", "16"))
    )
    # Nodes per panel of the composite Gauss-Legendre rule.
    # Valid range: >= 2.

    quadrature_panels: int = field(
        default_factory=lambda: int(os.getenv("QUADRATURE_PANELS", "1"))
    )
    # Multiplier applied to the oscillation-scaled panel density.
    # Valid range: >= 1.

    gaussian_cutoff: float = field(
        default_factory=lambda: float(os.getenv("GAUSSIAN_CUTOFF", "9.0"))
    )
    # Gaussian theta series keeps n with |(n - y) v^(1/2)| <= cutoff.
    # 9.0 puts the neglected tail below 1e-12.
    # Valid range: > 0.0.

    gaussian_support: float = field(
        default_factory=lambda: float(os.getenv("GAUSSIAN_SUPPORT", "8.0"))
    )
    # Half-width of the w' interval used when the Gaussian transform is
    # computed by quadrature.
    # Valid range: > 0.0.

    pole_margin: float = field(
        default_factory=lambda: float(os.getenv("POLE_MARGIN", "1e-12"))
    )
    # Distance to an integer below which y (or x) is treated as a pole.
    # Valid range: (0.0, 1e-6).

    # ------------------------------------------------------------------
    # Modular geometry / renormalization
    # ------------------------------------------------------------------

    reduction_max_steps: int = field(
        default_factory=lambda: int(os.getenv("REDUCTION_MAX_STEPS", "1000000"))
    )
    # Iteration cap for fundamental-domain reduction.
    # Valid range: >= 1.

    residual_tolerance: float = field(
        default_factory=lambda: float(os.getenv("RESIDUAL_TOLERANCE", "1e-8"))
    )
    # Acceptance bound for the S1/S2 residuals and the sin(phi) closed form.
    # Valid range: > 0.0.

    # ------------------------------------------------------------------
    # Figures / CLI
    # ------------------------------------------------------------------

    bin_width: float = field(
        default_factory=lambda: float(os.getenv("BIN_WIDTH", "0.1"))
    )
    # Histogram bin width for figure and sample exports.
    # Valid range: > 0.0.

    figure_ks_threshold: float = field(
        default_factory=lambda: float(os.getenv("FIGURE_KS_THRESHOLD", "0.08"))
    )
    # Largest two-sample KS distance accepted between |X~| and |Y| draws.
    # |X~| at N = 2260 or 2300 sits about 0.06 from the limit law.
    # Valid range: (0.0, 1.0).

    output_dir: str = field(
        default_factory=lambda: os.getenv("OUTPUT_DIR", "data/output")
    )
    # Directory for CSV/JSON exports when no explicit --out is given.
    # Created on demand.


# ---------------------------------------------------------------------------
# Module-level singleton - the one true CONFIG object
# ---------------------------------------------------------------------------

CONFIG: _Config = _Config()


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

_VALID_LOG_LEVELS: frozenset[str] = frozenset(
    {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}
)


def validate_config(cfg: _Config = CONFIG) -> None:
    """Raise ValueError if any CONFIG field violates its documented constraint.

    Args:
        cfg: Config instance to validate (defaults to the module singleton CONFIG).

    Raises:
        ValueError: Describing the first constraint that is violated.
    """
    # --- logging ---
    if cfg.log_level not in _VALID_LOG_LEVELS:
        raise ValueError(
            f"log_level must be one of {sorted(_VALID_LOG_LEVELS)} "
            f"(got {cfg.log_level!r})."
        )

    # --- sampling ---
    if cfg.seed < 0:
        raise ValueError(f"seed must be >= 0 (got {cfg.seed}).")
    if cfg.sample_count < 1:
        raise ValueError(f"sample_count must be >= 1 (got {cfg.sample_count}).")
    if cfg.sample_block_size < 1:
        raise ValueError(
            f"sample_block_size must be >= 1 (got {cfg.sample_block_size})."
        )
    if cfg.batch_elements < 1024:
        raise ValueError(
            f"batch_elements must be >= 1024 (got {cfg.batch_elements})."
        )
    if cfg.workers < 1:
        raise ValueError(f"workers must be >= 1 (got {cfg.workers}).")

    # --- orbits ---
    if not (1 <= cfg.max_orbit_length <= 1_000_000):
        raise ValueError(
            f"max_orbit_length must be in [1, 1000000] (got {cfg.max_orbit_length}). "
            "Larger orbits lose the exactness of n(n-1)/2 in double precision."
        )

    # --- series / quadrature ---
    if cfg.series_n_max < 1:
        raise ValueError(f"series_n_max must be >= 1 (got {cfg.series_n_max}).")
    if cfg.gauss_legendre_order < 2:
        raise ValueError(
            f"gauss_legendre_order must be >= 2 (got {cfg.gauss_legendre_order})."
        )
    if cfg.quadrature_panels < 1:
        raise ValueError(
            f"quadrature_panels must be >= 1 (got {cfg.quadrature_panels})."
        )
    if cfg.gaussian_cutoff <= 0.0:
        raise ValueError(
            f"gaussian_cutoff must be > 0.0 (got {cfg.gaussian_cutoff})."
        )
    if cfg.gaussian_support <= 0.0:
        raise ValueError(
            f"gaussian_support must be > 0.0 (got {cfg.gaussian_support})."
        )
    if not (0.0 < cfg.pole_margin < 1e-6):
        raise ValueError(
            f"pole_margin must be in (0.0, 1e-6) (got {cfg.pole_margin}). "
            "It only guards measure-zero coincidences and must be negligibly small."
        )

    # --- geometry ---
    if cfg.reduction_max_steps < 1:
        raise ValueError(
            f"reduction_max_steps must be >= 1 (got {cfg.reduction_max_steps})."
        )
    if cfg.residual_tolerance <= 0.0:
        raise ValueError(
            f"residual_tolerance must be > 0.0 (got {cfg.residual_tolerance})."
        )

    # --- figures / CLI ---
    if cfg.bin_width <= 0.0:
        raise ValueError(f"bin_width must be > 0.0 (got {cfg.bin_width}).")
    if not (0.0 < cfg.figure_ks_threshold < 1.0):
        raise ValueError(
            f"figure_ks_threshold must be in (0.0, 1.0) (got {cfg.figure_ks_threshold})."
        )
    if not cfg.output_dir.strip():
        raise ValueError("output_dir must not be empty.")


# ---------------------------------------------------------------------------
# CLI inspection
# ---------------------------------------------------------------------------

if __name__ == "__main__":
    logging.basicConfig(level=logging.INFO)
    validate_config(CONFIG)
    print(json.dumps(asdict(CONFIG), indent=2))
