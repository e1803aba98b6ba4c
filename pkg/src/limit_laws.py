"""
SKEWTHETA - Limit Laws
======================

Samplers and closed forms for the limit random variables.

    Y_(omega,varphi) = e(t)/(2 pi) sum_n (1 + e(t' - n varphi)) / (n - y) e((n - y)^2 omega / 2 + n x)
    Y_(0,0)          = (1 + e(t'))/(2 pi) sum_n e(n x) / (n - y)
    alpha = 0 law    = e(t) (1 - e(y)) / (1 - e(x))

with (t, t', x, y) uniform on the torus and the n-sums truncated
symmetrically at |n| <= n_max (default SERIES_N_MAX = 1000).  The modulus of
the alpha = 0 variable has the radial density

    rho(r) = 2 / (pi^2 r) log |(1 + r) / (1 - r)|

with CDF F(r) = (2 / pi^2) (Li2(r) - Li2(-r)) for r <= 1 and
F(r) = 1 - F(1/r) for r > 1.

Also here: X~_(N,alpha) = S_N / sqrt(c_N(l alpha)) and the two intermediate
samplers that link it to Y (the exact theta modulus, and the chi^(0) series
on the renormalised frame).

Draws of (x, y) within POLE_MARGIN of a pole are shifted by 1/2; the event
has probability ~1e-12 and the shift keeps the draw count fixed.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.special import spence

from src.config import CONFIG as _cfg
from src.dist_stats import EmpiricalDistribution
from src.modular_geometry import FramePoint
from src.phases import e, frac, frac_product, near_integer
from src.renormalization import RenormData, c_of, renorm_frame
from src.sampling import map_batched, map_blocks
from src.skew_dynamics import Harmonic, birkhoff_moduli
from src.theta_engine import TruncationPolicy, WindowFunction, approx_theta_chi0_batch, theta_batch

log = logging.getLogger(__name__)

# ---------------------------------------------------------------------------
# Module CONFIG
# ---------------------------------------------------------------------------

CONFIG: dict = {
    "SERIES_N_MAX": _cfg.series_n_max,  # |n| <= n_max in Y-type series
    "POLE_MARGIN":  _cfg.pole_margin,   # distance to Z treated as a pole
    "QUAD_LIMIT":   200,                # scipy quad subinterval limit
}

RADIAL_DENSITY_AT_ZERO: float = 4.0 / math.pi ** 2


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LimitParams:
    """Parameters (omega, varphi) of Y and the series cutoff.

    omega and varphi are stored as given so that the law's periodicity in
    each can be exercised; reduced() returns the [0, 1) representatives.
    """

    omega: float
    varphi: float
    n_max: int = field(default_factory=lambda: CONFIG["SERIES_N_MAX"])

    def __post_init__(self) -> None:
        if not (math.isfinite(self.omega) and math.isfinite(self.varphi)):
            raise ValueError(f"LimitParams must be finite (got {self.omega}, {self.varphi}).")
        if self.n_max < 1:
            raise ValueError(f"n_max must be >= 1 (got {self.n_max}).")

    def reduced(self) -> LimitParams:
        return LimitParams(float(frac(self.omega)), float(frac(self.varphi)), self.n_max)

    @classmethod
    def from_renorm(cls, data: RenormData, n_max: int | None = None) -> LimitParams:
        """(omega, varphi) = ({a/c}, {N/c}) read off a single renormalization record."""
        return cls(data.omega, data.varphi, CONFIG["SERIES_N_MAX"] if n_max is None else n_max)


# ---------------------------------------------------------------------------
# Private helpers
# ---------------------------------------------------------------------------

def _away_from_poles(col: np.ndarray) -> np.ndarray:
    return np.where(near_integer(col, CONFIG["POLE_MARGIN"]), frac(col + 0.5), col)


def _y_series(params: LimitParams, rows: np.ndarray) -> np.ndarray:
    """Y for rows (t, t', x, y), including the e(t) phase."""
    n = np.arange(-params.n_max, params.n_max + 1, dtype=np.int64)
    t, tp, x, y = (rows[:, i:i + 1] for i in range(4))
    shift = n[None, :] - y
    weight = 1.0 + e(tp - np.asarray(frac_product(n[None, :], params.varphi)))
    phase = shift * shift * (0.5 * params.omega) + np.asarray(frac_product(n[None, :], x))
    total = np.sum(weight / shift * e(phase), axis=1)
    return e(t[:, 0]) * total / (2.0 * math.pi)


def _y00_series(n_max: int, rows: np.ndarray) -> np.ndarray:
    """(1 + e(t')) / (2 pi) sum_n e(n x) / (n - y) for rows (t', x, y)."""
    n = np.arange(-n_max, n_max + 1, dtype=np.int64)
    tp, x, y = rows[:, 0], rows[:, 1:2], rows[:, 2:3]
    total = np.sum(e(frac_product(n[None, :], x)) / (n[None, :] - y), axis=1)
    return (1.0 + e(tp)) * total / (2.0 * math.pi)


# ---------------------------------------------------------------------------
# Y_(omega, varphi)
# ---------------------------------------------------------------------------

def y_value(params: LimitParams, t: float, t_prime: float, x: float, y: float) -> float:
    """|Y_(omega,varphi)| at one point (t, t', x, y) of T^4.

    Raises:
        ValueError: "pole in series" when y is within POLE_MARGIN of an integer.
    """
    if near_integer(y, CONFIG["POLE_MARGIN"]):
        raise ValueError("pole in series")
    row = np.array([[t, t_prime, x, y]], dtype=np.float64)
    return float(abs(_y_series(params, row)[0]))


def y_draws(params: LimitParams, count: int, seed: int) -> np.ndarray:
    """Complex draws e(t) Y_(omega,varphi) (phase included)."""
    def _eval(u: np.ndarray) -> np.ndarray:
        u[:, 3] = _away_from_poles(u[:, 3])
        return map_batched(lambda rows: _y_series(params, rows), u, 2 * params.n_max + 1)

    return map_blocks(_eval, seed=seed, stream="y_sample", count=count, dims=4)


def y_sample(params: LimitParams, count: int, seed: int) -> EmpiricalDistribution:
    """Draws of |Y_(omega,varphi)| with (t, t', x, y) uniform in T^4."""
    moduli = np.abs(y_draws(params, count, seed))
    log.info(
        "y sample drawn",
        extra={"omega": params.omega, "varphi": params.varphi, "n_max": params.n_max,
               "count": count, "seed": seed},
    )
    return EmpiricalDistribution(
        moduli, seed=seed,
        meta=f"y omega={params.omega!r} varphi={params.varphi!r} n_max={params.n_max}",
    )


def y00_sample(count: int, seed: int, n_max: int | None = None,
               x_fixed: float | None = None) -> EmpiricalDistribution:
    """Draws of |Y_(0,0)|; ``x_fixed`` pins x (x = 1/2 leaves the law unchanged)."""
    cutoff = CONFIG["SERIES_N_MAX"] if n_max is None else n_max

    def _eval(u: np.ndarray) -> np.ndarray:
        u[:, 2] = _away_from_poles(u[:, 2])
        if x_fixed is not None:
            u[:, 1] = x_fixed
        return np.abs(map_batched(lambda rows: _y00_series(cutoff, rows), u, 2 * cutoff + 1))

    moduli = map_blocks(_eval, seed=seed, stream="y00_sample", count=count, dims=3)
    return EmpiricalDistribution(moduli, seed=seed, meta=f"y00 n_max={cutoff} x_fixed={x_fixed!r}")


# ---------------------------------------------------------------------------
# alpha = 0 law
# ---------------------------------------------------------------------------

def alpha0_value(x, y):
    """|(1 - e(y)) / (1 - e(x))| = |sin(pi y)| / |sin(pi x)|."""
    return np.abs(np.sin(np.pi * np.asarray(y))) / np.abs(np.sin(np.pi * np.asarray(x)))


def alpha0_sample(count: int, seed: int) -> EmpiricalDistribution:
    """Draws of |e(t)(1 - e(y)) / (1 - e(x))| with (t, x, y) uniform in T^3."""
    def _eval(u: np.ndarray) -> np.ndarray:
        return alpha0_value(_away_from_poles(u[:, 1]), u[:, 2])

    moduli = map_blocks(_eval, seed=seed, stream="alpha0_sample", count=count, dims=3)
    return EmpiricalDistribution(moduli, seed=seed, meta="alpha0")


def radial_density(r):
    """2 / (pi^2 r) log |(1 + r) / (1 - r)|, +inf at r = 1.

    Raises:
        ValueError: for r <= 0.
    """
    arr = np.asarray(r, dtype=np.float64)
    if np.any(arr <= 0.0):
        raise ValueError("radial density needs r > 0")
    with np.errstate(divide="ignore"):
        inner = np.minimum(arr, 1.0 / arr)
        out = np.where(arr == 1.0, np.inf, 4.0 * np.arctanh(np.where(arr == 1.0, 0.0, inner))
                       / (math.pi ** 2 * arr))
    return out[()]


def _radial_cdf_scalar(r: float) -> float:
    if r <= 0.0:
        return 0.0
    limit = CONFIG["QUAD_LIMIT"]
    if r <= 1.0:
        val, _ = quad(radial_density, 0.0, r, limit=limit)
    else:
        lower, _ = quad(radial_density, 0.0, 1.0, limit=limit)
        upper, _ = quad(radial_density, 1.0, r, limit=limit)
        val = lower + upper
    return min(1.0, max(0.0, val))


def radial_cdf(r):
    """CDF of the radial density by adaptive quadrature, split at r = 1."""
    arr = np.asarray(r, dtype=np.float64)
    return np.vectorize(_radial_cdf_scalar, otypes=[np.float64])(arr)[()]


def radial_cdf_closed(r):
    """Closed form (2/pi^2)(Li2(r) - Li2(-r)) for r <= 1, 1 - F(1/r) above."""
    arr = np.asarray(r, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(arr > 1.0, 1.0 / arr, np.clip(arr, 0.0, 1.0))
        low = 2.0 / math.pi ** 2 * (spence(1.0 - s) - spence(1.0 + s))
        out = np.where(arr > 1.0, 1.0 - low, low)
    out = np.where(arr <= 0.0, 0.0, out)
    return np.clip(out, 0.0, 1.0)[()]


# ---------------------------------------------------------------------------
# Rescaled Birkhoff variable and its chain to Y
# ---------------------------------------------------------------------------

def xtilde_sample(N: int, alpha: float, h: Harmonic, count: int,
                  seed: int) -> EmpiricalDistribution:
    """Draws of |X~_(N,alpha)| = |S_(N,alpha)[psi](p, q)| / sqrt(c_N(l alpha)).

    Uses the same stream as skew_dynamics.x_sample, so on a shared seed
    |X~| = |X| sqrt(N / c) draw by draw.

    Raises:
        ValueError: "geometric case: use closed form" when l = 0.
    """
    if h.is_geometric:
        raise ValueError("geometric case: use closed form")
    c = c_of(h.l * alpha, N)
    moduli = birkhoff_moduli(N, alpha, h, count, seed) / math.sqrt(c)
    log.info(
        "xtilde sample drawn",
        extra={"N": N, "alpha": alpha, "k": h.k, "l": h.l, "c": c, "count": count, "seed": seed},
    )
    return EmpiricalDistribution(moduli, seed=seed, meta=f"xtilde N={N} alpha={alpha!r} c={c}")


def theta_modulus_sample(u: float, N: int, count: int, seed: int) -> EmpiricalDistribution:
    """Draws of |Theta_chi(u + i N^-2, 0; (x, y))| with (x, y) uniform in T^2."""
    frame = FramePoint(u, 1.0 / (N * N), 0.0)

    def _eval(rows: np.ndarray) -> np.ndarray:
        return np.abs(theta_batch(WindowFunction.INDICATOR_01, frame, rows[:, 0], rows[:, 1]))

    moduli = map_blocks(_eval, seed=seed, stream="theta_modulus", count=count, dims=2)
    return EmpiricalDistribution(moduli, seed=seed, meta=f"theta_chi u={u!r} N={N}")


def chi0_chain_sample(u: float, N: int, count: int, seed: int,
                      n_max: int | None = None) -> EmpiricalDistribution:
    """Draws of v'^1/4 |sin phi'|^-1/2 |chi^(0) theta series| on the renormalised frame.

    (tau', phi') = gamma . (u + i N^-2, 0); the prefactor equals sqrt(N / c),
    so these draws approximate |X~_(N,alpha)| with u = l alpha.
    """
    frame, _ = renorm_frame(u, N)
    trunc = TruncationPolicy(n_max=CONFIG["SERIES_N_MAX"] if n_max is None else n_max)
    scale = frame.v ** 0.25 / math.sqrt(abs(math.sin(frame.phi)))

    def _eval(rows: np.ndarray) -> np.ndarray:
        z = approx_theta_chi0_batch(frame.u, frame.v, frame.phi, rows[:, 0], rows[:, 1], trunc)
        return scale * np.abs(z)

    moduli = map_blocks(_eval, seed=seed, stream="chi0_chain", count=count, dims=2)
    return EmpiricalDistribution(moduli, seed=seed, meta=f"chi0_chain u={u!r} N={N}")
