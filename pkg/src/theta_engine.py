"""
SKEWTHETA - Theta Engine
========================

Evaluates the rotated windows f_phi, the leading-order window chi_phi^(0), the
theta series

    Theta_f(tau, phi; (x, y)) = v^1/4 * sum_n f_phi((n - y) v^1/2) e((n - y)^2 u / 2 + n x)

its exact finite form for the indicator window at phi = 0, and Monte Carlo
estimates of nu_f[F](tau, phi) = E_(t, xi) F(e(t) |Theta_f(tau, phi; xi)|).

Windows
-------
    indicator_01   chi, the indicator of (0, 1]
    gaussian       w -> 2^1/4 exp(-pi w^2)

Both have unit L2 norm.  For phi not a multiple of pi,

    f_phi(w) = |sin phi|^-1/2 * integral e[((w^2 + w'^2)/2 cos phi - w w') / sin phi] f(w') dw'

For the Gaussian this has the closed form A^-1/2 |sin phi|^-1/2 f(w) with
A = 1 - i cot phi, so |f_phi| = f.  The composite Gauss-Legendre path is kept
selectable (method="quadrature") and is the only path for chi.

Truncation
----------
Gaussian series keep |(n - y) v^1/2| <= GAUSSIAN_CUTOFF (tail < 1e-12).
chi at phi = 0 or pi is a finite sum and is never truncated.
chi^(0) series run over |n| <= n_max.

Usage
-----
    from src.theta_engine import WindowFunction, theta, TruncationPolicy
    from src.modular_geometry import FramePoint, ThetaArg

    arg = ThetaArg(FramePoint(0.2, 1.3, 0.7), x=0.1, y=0.4)
    z = theta(WindowFunction.GAUSSIAN, arg, TruncationPolicy())
"""

from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss

from src.config import CONFIG as _cfg
from src.modular_geometry import TWO_PI, FramePoint, ThetaArg
from src.phases import e, frac, frac_product
from src.sampling import map_batched, map_blocks

log = logging.getLogger(__name__)

# ---------------------------------------------------------------------------
# Module CONFIG
# ---------------------------------------------------------------------------

CONFIG: dict = {
    "SERIES_N_MAX":         _cfg.series_n_max,          # |n| <= n_max for chi^(0) series
    "QUADRATURE_PANELS":    _cfg.quadrature_panels,     # panel-density multiplier
    "GAUSS_LEGENDRE_ORDER": _cfg.gauss_legendre_order,  # nodes per panel
    "GAUSSIAN_CUTOFF":      _cfg.gaussian_cutoff,       # |(n - y) v^1/2| bound
    "GAUSSIAN_SUPPORT":     _cfg.gaussian_support,      # quadrature half-width for the Gaussian
    "EXACT_ANGLE_TOL":      1e-12,                      # phi within this of 0 / pi is exact
    "AXIS_TOL":             1e-8,                       # |sin phi| floor for quadrature
    "VALIDITY_BAND":        0.05,                       # |sin phi| floor for chi^(0) series
    "INDEX_TOL":            1e-12,                      # skip |n - y| below this in chi^(0) series
}

_GAUSSIAN_NORM: float = 2.0 ** 0.25

# A complex number f_phi(w), chi_phi(w) or chi_phi^(0)(w).
TransformedWindowValue = complex


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

class WindowFunction(str, Enum):
    """Window f entering the theta series; both kinds have ||f||_2 = 1."""

    INDICATOR_01 = "indicator_01"
    GAUSSIAN = "gaussian"

    def __call__(self, w):
        w = np.asarray(w, dtype=np.float64)
        if self is WindowFunction.GAUSSIAN:
            return _GAUSSIAN_NORM * np.exp(-np.pi * w * w)
        return ((w > 0.0) & (w <= 1.0)).astype(np.float64)

    @property
    def support(self) -> tuple[float, float]:
        """Integration interval used by the quadrature path."""
        if self is WindowFunction.GAUSSIAN:
            half = CONFIG["GAUSSIAN_SUPPORT"]
            return -half, half
        return 0.0, 1.0

    @property
    def l2_norm(self) -> float:
        return 1.0


@dataclass(frozen=True)
class TruncationPolicy:
    """Symmetric index cutoff and quadrature panel multiplier."""

    n_max: int = field(default_factory=lambda: CONFIG["SERIES_N_MAX"])
    quadrature_panels: int = field(default_factory=lambda: CONFIG["QUADRATURE_PANELS"])

    def __post_init__(self) -> None:
        if self.n_max < 1:
            raise ValueError(f"n_max must be >= 1 (got {self.n_max}).")
        if self.quadrature_panels < 1:
            raise ValueError(
                f"quadrature_panels must be >= 1 (got {self.quadrature_panels})."
            )


@dataclass(frozen=True)
class Functional:
    """Bounded radial test functional F applied to e(t)|Theta|.

    kind is one of const_1, abs_square, tail_indicator (param R) or
    cdf_indicator (param r).
    """

    kind: str
    param: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in _FUNCTIONAL_KINDS:
            raise ValueError(
                f"unknown functional {self.kind!r}; expected one of {sorted(_FUNCTIONAL_KINDS)}"
            )
        needs_param = _FUNCTIONAL_KINDS[self.kind]
        if needs_param and (self.param is None or not math.isfinite(self.param) or self.param < 0):
            raise ValueError(f"functional {self.kind} needs a finite parameter >= 0.")
        if not needs_param and self.param is not None:
            raise ValueError(f"functional {self.kind} takes no parameter.")

    def __call__(self, modulus: np.ndarray) -> np.ndarray:
        r = np.asarray(modulus, dtype=np.float64)
        if self.kind == "const_1":
            return np.ones_like(r)
        if self.kind == "abs_square":
            return r * r
        if self.kind == "tail_indicator":
            return (r > self.param).astype(np.float64)
        return (r <= self.param).astype(np.float64)

    @property
    def sup(self) -> float:
        """sup |F|; infinite for abs_square."""
        return math.inf if self.kind == "abs_square" else 1.0

    def __str__(self) -> str:
        return self.kind if self.param is None else f"{self.kind}({self.param:g})"


_FUNCTIONAL_KINDS: dict[str, bool] = {
    "const_1": False,
    "abs_square": False,
    "tail_indicator": True,
    "cdf_indicator": True,
}

_FUNCTIONAL_RE = re.compile(r"^\s*([a-z_0-9]+)\s*(?:\(\s*([^)]*)\s*\))?\s*$")


def parse_functional(descriptor: str) -> Functional:
    """Parse "const_1", "abs_square", "tail_indicator(10)" or "cdf_indicator(0.5)"."""
    match = _FUNCTIONAL_RE.match(descriptor)
    if not match:
        raise ValueError(f"malformed functional descriptor {descriptor!r}")
    kind, arg = match.group(1), match.group(2)
    return Functional(kind, float(arg) if arg else None)


@dataclass(frozen=True)
class NuEstimate:
    """Monte Carlo estimate of nu_f[F] with its standard error."""

    value: float
    stderr: float
    samples: int
    seed: int


# ---------------------------------------------------------------------------
# Angles
# ---------------------------------------------------------------------------

def exact_angle(phi: float) -> float | None:
    """0.0 or pi when phi is within EXACT_ANGLE_TOL of that angle mod 2*pi, else None."""
    r = math.fmod(phi, TWO_PI)
    if r < 0.0:
        r += TWO_PI
    tol = CONFIG["EXACT_ANGLE_TOL"]
    if r < tol or TWO_PI - r < tol:
        return 0.0
    if abs(r - math.pi) < tol:
        return math.pi
    return None


def epsilon_sign(phi: float) -> float:
    """+1 on [0, pi) + 2*pi*Z, -1 on [pi, 2*pi) + 2*pi*Z."""
    r = math.fmod(phi, TWO_PI)
    if r < 0.0:
        r += TWO_PI
    return 1.0 if r < math.pi else -1.0


# ---------------------------------------------------------------------------
# Window transforms
# ---------------------------------------------------------------------------

@lru_cache(maxsize=8)
def _legendre_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    return leggauss(order)


def _panel_count(length: float, w: float, sin_phi: float, cot_phi: float, panels: int) -> int:
    per_unit = (math.ceil(abs(w) / abs(sin_phi)) + math.ceil(abs(cot_phi)) + 16) * panels
    return max(1, math.ceil(length * per_unit))


def _quadrature_transform(
    f: WindowFunction, phi: float, w: np.ndarray, panels: int
) -> np.ndarray:
    """Composite Gauss-Legendre evaluation of the oscillatory f_phi integral."""
    s, c = math.sin(phi), math.cos(phi)
    cot = c / s
    lo, hi = f.support
    nodes, weights = _legendre_rule(CONFIG["GAUSS_LEGENDRE_ORDER"])
    out = np.empty(w.shape, dtype=np.complex128)

    for idx, wi in np.ndenumerate(w):
        n_pan = _panel_count(hi - lo, wi, s, cot, panels)
        edges = np.linspace(lo, hi, n_pan + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[:-1] + edges[1:])
        xp = mid[:, None] + half[:, None] * nodes[None, :]
        wt = half[:, None] * weights[None, :]
        phase = ((wi * wi + xp * xp) * 0.5 * c - wi * xp) / s
        # chi is 1 on the whole (0, 1] panel range; endpoint 0 has measure zero
        vals = np.ones_like(xp) if f is WindowFunction.INDICATOR_01 else f(xp)
        out[idx] = np.sum(wt * vals * e(phase))

    return out / math.sqrt(abs(s))


def gaussian_window_transform(phi: float, w):
    """Closed form of f_phi for the Gaussian window: A^-1/2 |sin phi|^-1/2 f(w).

    A = 1 - i cot phi (principal square root).  At the exact angles this
    reduces to f(w) (phi = 0) and f(-w) = f(w) (phi = pi).
    """
    w = np.asarray(w, dtype=np.float64)
    if exact_angle(phi) is not None:
        return WindowFunction.GAUSSIAN(w).astype(np.complex128)[()]
    s = math.sin(phi)
    factor = 1.0 / (np.sqrt(complex(1.0, -math.cos(phi) / s)) * math.sqrt(abs(s)))
    return (factor * WindowFunction.GAUSSIAN(w))[()]


def window_transform(
    f: WindowFunction,
    phi: float,
    w,
    method: str = "auto",
    panels: int | None = None,
):
    """f_phi(w) for scalar or array w.

    Args:
        f:      Window kind.
        phi:    Rotation angle.
        w:      Evaluation point(s).
        method: "auto" uses the Gaussian closed form when available;
                "quadrature" forces composite Gauss-Legendre.
        panels: Panel-density multiplier (defaults to QUADRATURE_PANELS).

    Raises:
        ValueError: "phi too close to axis for quadrature" when 0 < |sin phi| < 1e-8
                    and phi is not an exact angle.
    """
    if method not in ("auto", "quadrature"):
        raise ValueError(f"unknown transform method {method!r}")
    w_arr = np.asarray(w, dtype=np.float64)

    exact = exact_angle(phi)
    if exact == 0.0:
        return f(w_arr).astype(np.complex128)[()]
    if exact == math.pi:
        return f(-w_arr).astype(np.complex128)[()]
    if abs(math.sin(phi)) < CONFIG["AXIS_TOL"]:
        raise ValueError("phi too close to axis for quadrature")

    if f is WindowFunction.GAUSSIAN and method == "auto":
        return gaussian_window_transform(phi, w_arr)
    mult = CONFIG["QUADRATURE_PANELS"] if panels is None else panels
    return _quadrature_transform(f, phi, w_arr, mult)[()]


def transform_norm_squared(f: WindowFunction, phi: float, method: str = "quadrature") -> float:
    """||f_phi||_2^2 by Gauss-Legendre over [-GAUSSIAN_SUPPORT, GAUSSIAN_SUPPORT].

    Only meaningful for the Gaussian, whose transform decays like f.
    """
    half = CONFIG["GAUSSIAN_SUPPORT"]
    nodes, weights = _legendre_rule(CONFIG["GAUSS_LEGENDRE_ORDER"])
    edges = np.linspace(-half, half, 65)
    h = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    wp = (mid[:, None] + h[:, None] * nodes[None, :]).ravel()
    wt = (h[:, None] * weights[None, :]).ravel()
    vals = np.asarray(window_transform(f, phi, wp, method=method))
    return float(np.sum(wt * np.abs(vals) ** 2))


def chi0_window(phi: float, w):
    """Leading-order large-|w| form of chi_phi:

        eps_phi |sin phi|^1/2 e(w^2 cot phi / 2) (1 - e(cot phi / 2 - w / sin phi)) / (2 pi i w)

    Raises:
        ValueError: "pole of leading-order window" for w = 0;
                    "phi outside validity band" when phi is within 1e-8 of the axis.
    """
    w_arr = np.asarray(w, dtype=np.float64)
    if np.any(w_arr == 0.0):
        raise ValueError("pole of leading-order window")
    s = math.sin(phi)
    if abs(s) < CONFIG["AXIS_TOL"]:
        raise ValueError("phi outside validity band")
    cot = math.cos(phi) / s
    amp = epsilon_sign(phi) * math.sqrt(abs(s))
    chirp = e(w_arr * w_arr * cot * 0.5)
    edge = 1.0 - e(cot * 0.5 - w_arr / s)
    return (amp * chirp * edge / (2j * np.pi * w_arr))[()]


# ---------------------------------------------------------------------------
# Theta series
# ---------------------------------------------------------------------------

def _index_range(f: WindowFunction, frame: FramePoint, y_lo: float, y_hi: float,
                 trunc: TruncationPolicy) -> np.ndarray:
    """Every n that can contribute for some y in [y_lo, y_hi]."""
    root_v = math.sqrt(frame.v)
    if f is WindowFunction.GAUSSIAN:
        reach = CONFIG["GAUSSIAN_CUTOFF"] / root_v
        lo = max(math.ceil(y_lo - reach), -trunc.n_max)
        hi = min(math.floor(y_hi + reach), trunc.n_max)
        return np.arange(lo, hi + 1, dtype=np.int64)

    exact = exact_angle(frame.phi)
    if exact is None:
        raise ValueError("transform not available")
    reach = 1.0 / root_v
    slack = 1e-9 * max(1.0, reach)
    if exact == 0.0:
        return np.arange(math.floor(y_lo) + 1, math.floor(y_hi + reach + slack) + 1, dtype=np.int64)
    return np.arange(math.ceil(y_lo - reach - slack), math.ceil(y_hi), dtype=np.int64)


def _window_values(f: WindowFunction, frame: FramePoint, w: np.ndarray) -> np.ndarray:
    """f_phi on the (y, n) grid w = (n - y) v^1/2, with the series cutoff applied."""
    if f is WindowFunction.GAUSSIAN:
        vals = np.asarray(gaussian_window_transform(frame.phi, w), dtype=np.complex128)
        return np.where(np.abs(w) <= CONFIG["GAUSSIAN_CUTOFF"], vals, 0.0)

    # exact angles only (checked in _index_range); tolerate 1 + roundoff at the top edge
    slack = 1e-9
    if exact_angle(frame.phi) == 0.0:
        mask = (w > 0.0) & (w <= 1.0 + slack)
    else:
        mask = (w < 0.0) & (w >= -1.0 - slack)
    return mask.astype(np.complex128)


def _theta_coefficients(f: WindowFunction, frame: FramePoint, y: np.ndarray,
                        n: np.ndarray) -> np.ndarray:
    """v^1/4 f_phi((n - y) v^1/2) e((n - y)^2 u / 2), shape (len(y), len(n))."""
    shift = n[None, :].astype(np.float64) - y[:, None]
    vals = _window_values(f, frame, shift * math.sqrt(frame.v))
    return frame.v ** 0.25 * vals * e(shift * shift * 0.5 * frame.u)


def theta_batch(f: WindowFunction, frame: FramePoint, x: np.ndarray, y: np.ndarray,
                trunc: TruncationPolicy | None = None) -> np.ndarray:
    """Theta_f(frame; (x_i, y_i)) for paired arrays x, y (vectorised theta)."""
    trunc = trunc or TruncationPolicy()
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if y.size == 0:
        return np.empty(0, dtype=np.complex128)
    n = _index_range(f, frame, float(y.min()), float(y.max()), trunc)

    def _rows(xy: np.ndarray) -> np.ndarray:
        coeff = _theta_coefficients(f, frame, xy[:, 1], n)
        return np.sum(coeff * e(frac_product(n[None, :], xy[:, 0:1])), axis=1)

    return map_batched(_rows, np.column_stack([x, y]), len(n))


def theta(f: WindowFunction, arg: ThetaArg, trunc: TruncationPolicy | None = None) -> complex:
    """Theta_f(tau, phi; (x, y)).

    For the indicator window only phi = 0 and phi = pi (mod 2*pi) are
    available; both are finite sums with no truncation error.

    Raises:
        ValueError: "transform not available" for chi at any other angle.
    """
    out = theta_batch(f, arg.frame, np.array([arg.x]), np.array([arg.y]), trunc)
    return complex(out[0])


def theta_chi_split(N: int, quad_mult: int, quad_base: float,
                    linear: list[tuple[int, float]], y_shift: int = 0) -> complex:
    """N^-1/2 sum_{m=1..N} e(frac(quad_mult m^2 * quad_base) + sum_j frac((mult_j m) * base_j)).

    Each product is reduced with frac_product, so large integer multipliers
    never get rounded into the real factor.  Index m runs over n - y_shift.
    """
    if N < 1:
        raise ValueError(f"N must be >= 1 (got {N}).")
    m = np.arange(1, N + 1, dtype=np.int64)
    phase = np.asarray(frac_product(quad_mult * m * m, quad_base))
    for mult, base in linear:
        phase = phase + np.asarray(frac_product(mult * (m + y_shift), base))
    return complex(np.sum(e(phase)) / math.sqrt(N))


def theta_chi_exact(u: float, N: int, x: float, y: float) -> complex:
    """Theta_chi(u + i N^-2, 0; (x, y)) = N^-1/2 sum_{y < n <= y + N} e((n - y)^2 u / 2 + n x).

    Exact for integer y.  For non-integer y the quadratic phase is split as
    (m - d)^2 with m integer and d = {y}.
    """
    base = math.floor(y)
    delta = y - base
    if delta == 0.0:
        return theta_chi_split(N, 1, u / 2.0, [(1, x)], y_shift=base)
    m = np.arange(1, N + 1, dtype=np.int64)
    phase = (
        np.asarray(frac_product(m * m, u / 2.0))
        - np.asarray(frac_product(m, delta * u))
        + delta * delta * u / 2.0
        + np.asarray(frac_product(m + base, x))
    )
    return complex(np.sum(e(phase)) / math.sqrt(N))


def _chi0_rows(u: float, v: float, phi: float, xy: np.ndarray, n: np.ndarray) -> np.ndarray:
    """Vectorised chi^(0) theta series for rows (x, y)."""
    shift = n[None, :].astype(np.float64) - xy[:, 1:2]
    keep = np.abs(shift) >= CONFIG["INDEX_TOL"]
    w = np.where(keep, shift, 1.0) * math.sqrt(v)
    vals = np.where(keep, chi0_window(phi, w), 0.0)
    phase = shift * shift * 0.5 * u
    terms = vals * e(phase) * e(frac_product(n[None, :], xy[:, 0:1]))
    return v ** 0.25 * np.sum(terms, axis=1)


def approx_theta_chi0_batch(u: float, v: float, phi: float, x: np.ndarray, y: np.ndarray,
                            trunc: TruncationPolicy | None = None) -> np.ndarray:
    """approx_theta_chi0 for paired arrays x, y."""
    trunc = trunc or TruncationPolicy()
    if v <= 0.0:
        raise ValueError(f"v must be > 0 (got {v}).")
    if abs(math.sin(phi)) < CONFIG["VALIDITY_BAND"]:
        raise ValueError("phi outside validity band")
    n = np.arange(-trunc.n_max, trunc.n_max + 1, dtype=np.int64)
    xy = np.column_stack([np.asarray(x, dtype=np.float64), np.asarray(y, dtype=np.float64)])
    return map_batched(lambda rows: _chi0_rows(u, v, phi, rows, n), xy, len(n))


def approx_theta_chi0(u: float, v: float, phi: float, x: float, y: float,
                      trunc: TruncationPolicy | None = None) -> complex:
    """v^1/4 sum_{|n| <= n_max} chi_phi^(0)((n - y) v^1/2) e((n - y)^2 u / 2 + n x).

    Indices with |n - y| < 1e-12 are skipped.

    Raises:
        ValueError: "phi outside validity band" when |sin phi| < 0.05.
    """
    out = approx_theta_chi0_batch(u, v, phi, np.array([x]), np.array([y]), trunc)
    return complex(out[0])


def chi0_parseval_error(v: float, phi: float, y: float, n_terms: int = 50,
                        panels: int | None = None) -> float:
    """Mean over x of |Theta_chi - chi^(0) series|^2, by Parseval in x:

        v^1/2 sum_{|n| <= n_terms} |chi_phi(w_n) - chi_phi^(0)(w_n)|^2,  w_n = (n - y) v^1/2
    """
    n = np.arange(-n_terms, n_terms + 1, dtype=np.float64)
    shift = n - y
    w = shift[np.abs(shift) >= CONFIG["INDEX_TOL"]] * math.sqrt(v)
    exact = np.asarray(window_transform(WindowFunction.INDICATOR_01, phi, w,
                                        method="quadrature", panels=panels))
    lead = np.asarray(chi0_window(phi, w))
    return float(math.sqrt(v) * np.sum(np.abs(exact - lead) ** 2))


def parseval_grid(f: WindowFunction, frame: FramePoint, grid: int = 256) -> tuple[float, float]:
    """Midpoint-grid averages over xi in T^2 of |Theta_f|^2 and |Theta_f|.

    Returns:
        (mean |Theta|^2, mean |Theta|).
    """
    mids = (np.arange(grid, dtype=np.float64) + 0.5) / grid
    trunc = TruncationPolicy(n_max=max(CONFIG["SERIES_N_MAX"], 10 * grid))
    n = _index_range(f, frame, float(mids[0]), float(mids[-1]), trunc)
    coeff = _theta_coefficients(f, frame, mids, n)          # (y, n)
    fourier = e(frac_product(n[:, None], mids[None, :]))    # (n, x)
    values = np.abs(coeff @ fourier)
    return float(np.mean(values ** 2)), float(np.mean(values))


# ---------------------------------------------------------------------------
# Monte Carlo estimate of nu_f[F]
# ---------------------------------------------------------------------------

def nu_estimate(f: WindowFunction, frame: FramePoint, functional: Functional | str,
                samples: int, seed: int) -> NuEstimate:
    """Monte Carlo average of F(e(t)|Theta_f(frame; xi)|) over (t, xi) uniform in T^3.

    All shipped functionals are radial, so e(t) is drawn but does not enter F.
    Deterministic per (seed, samples) for any worker count.
    """
    func = parse_functional(functional) if isinstance(functional, str) else functional
    if samples < 1:
        raise ValueError(f"samples must be >= 1 (got {samples}).")
    # fail fast on unsupported (window, angle) pairs before drawing
    _index_range(f, frame, 0.0, 1.0, TruncationPolicy())

    def _eval(u: np.ndarray) -> np.ndarray:
        z = e(u[:, 0]) * theta_batch(f, frame, u[:, 1], u[:, 2])
        return func(np.abs(z))

    vals = map_blocks(_eval, seed=seed, stream="nu_estimate", count=samples, dims=3)
    mean = float(np.mean(vals))
    stderr = float(np.std(vals, ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    log.info(
        "nu estimate",
        extra={"window": f.value, "functional": str(func), "samples": samples,
               "seed": seed, "value": mean, "stderr": stderr},
    )
    return NuEstimate(value=mean, stderr=stderr, samples=samples, seed=seed)
