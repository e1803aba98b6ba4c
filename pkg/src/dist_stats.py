"""
SKEWTHETA - Empirical Distributions and KS Statistics
=====================================================

Measurement layer for every distributional claim in the library.

  Containers   - EmpiricalDistribution (sorted, read-only sample of moduli
                 with seed provenance) and Histogram (fixed-width bins).

  Statistics   - ks_two_sample (scipy), ks_vs_cdf (exact sup against a
                 reference CDF), abs_square_mean, and the asymptotic 1%
                 two-sample critical value.

  Export       - to_frame() on both containers returns a pandas DataFrame
                 that the CLI writes to CSV.

Conventions
-----------
Empirical CDFs are right-continuous: F_n(t) = #{x_i <= t} / n, ties counted
with multiplicity.  Bin i of a histogram covers [origin + i w, origin + (i+1) w).
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from scipy.stats import ks_2samp

# ---------------------------------------------------------------------------
# Constants
# ---------------------------------------------------------------------------

KS_CRITICAL_COEFFICIENT_1PCT: float = 1.63  # c(alpha = 0.01) of the Kolmogorov law


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class EmpiricalDistribution:
    """Sorted multiset of nonnegative reals with the seed that produced it."""

    samples: np.ndarray
    seed: int = 0
    meta: str = ""

    def __post_init__(self) -> None:
        arr = np.asarray(self.samples, dtype=np.float64).ravel()
        if arr.size == 0:
            raise ValueError("EmpiricalDistribution needs at least one sample.")
        if not np.all(np.isfinite(arr)):
            raise ValueError("EmpiricalDistribution samples must be finite.")
        if np.any(arr < 0.0):
            raise ValueError("EmpiricalDistribution samples must be nonnegative.")
        arr = np.sort(arr, kind="stable")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    @classmethod
    def from_values(cls, values, seed: int = 0, meta: str = "") -> EmpiricalDistribution:
        """Build from raw values; complex values are replaced by their moduli."""
        arr = np.asarray(values)
        if np.iscomplexobj(arr):
            arr = np.abs(arr)
        return cls(arr, seed=seed, meta=meta)

    @property
    def count(self) -> int:
        return int(self.samples.size)

    def mean(self) -> float:
        return float(np.mean(self.samples))

    def median(self) -> float:
        return float(np.median(self.samples))

    def quantile(self, q: float) -> float:
        if not 0.0 <= q <= 1.0:
            raise ValueError(f"quantile level must be in [0, 1] (got {q}).")
        return float(np.quantile(self.samples, q))

    def cdf(self, t):
        """Right-continuous empirical CDF at t (scalar or array)."""
        return np.searchsorted(self.samples, t, side="right") / self.count

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"value": self.samples})


@dataclass(frozen=True, eq=False)
class Histogram:
    """Fixed-width histogram; counts are raw, density divides by n * bin_width."""

    bin_width: float
    origin: float
    counts: np.ndarray
    normalized: bool = False
    total: int = field(default=0)

    def __post_init__(self) -> None:
        if not self.bin_width > 0.0:
            raise ValueError(f"bin_width must be > 0 (got {self.bin_width}).")
        counts = np.asarray(self.counts, dtype=np.int64)
        if np.any(counts < 0):
            raise ValueError("histogram counts must be nonnegative.")
        object.__setattr__(self, "counts", counts)
        if self.total == 0:
            object.__setattr__(self, "total", int(counts.sum()))

    @property
    def bin_left(self) -> np.ndarray:
        return self.origin + self.bin_width * np.arange(self.counts.size)

    @property
    def density(self) -> np.ndarray:
        if self.total == 0:
            return np.zeros(self.counts.size)
        return self.counts / (self.total * self.bin_width)

    @property
    def values(self) -> np.ndarray:
        """density when the histogram is normalized, raw counts otherwise."""
        return self.density if self.normalized else self.counts.astype(np.float64)

    def to_frame(self, column: str = "value") -> pd.DataFrame:
        return pd.DataFrame({"bin_left": self.bin_left, column: self.values})


# ---------------------------------------------------------------------------
# Public API
# ---------------------------------------------------------------------------

def _as_samples(dist) -> np.ndarray:
    if isinstance(dist, EmpiricalDistribution):
        return dist.samples
    arr = np.sort(np.asarray(dist, dtype=np.float64).ravel())
    if arr.size == 0:
        raise ValueError("KS distance needs nonempty samples.")
    return arr


def ks_two_sample(a, b) -> float:
    """sup_t |F_A(t) - F_B(t)| for right-continuous empirical CDFs."""
    xa, xb = _as_samples(a), _as_samples(b)
    return float(ks_2samp(xa, xb, method="asymp").statistic)


def ks_vs_cdf(a, cdf: Callable[[np.ndarray], np.ndarray]) -> float:
    """Exact sup_t |F_n(t) - F(t)| for a monotone reference CDF.

    Evaluated at each distinct sample point x from both sides: F_n(x) against
    F(x), and F_n(x-) against F(x-), with F(x-) taken at the next double
    below x.  ``cdf`` must accept numpy arrays.
    """
    xs = _as_samples(a)
    n = xs.size
    points = np.unique(xs)
    right = np.searchsorted(xs, points, side="right") / n
    left = np.searchsorted(xs, points, side="left") / n
    f_at = np.asarray(cdf(points), dtype=np.float64)
    f_below = np.asarray(cdf(np.nextafter(points, -np.inf)), dtype=np.float64)
    return float(max(np.max(np.abs(right - f_at)), np.max(np.abs(left - f_below))))


def histogram(a, bin_width: float, origin: float = 0.0, normalized: bool = False,
              n_bins: int | None = None) -> Histogram:
    """Counts of samples in [origin + i w, origin + (i+1) w).

    Empty bins up to the largest sample are kept as zeros; ``n_bins`` pads
    (or must cover) the range so that several histograms share a grid.

    Raises:
        ValueError: bin_width <= 0, a sample below origin, or n_bins too small.
    """
    if not bin_width > 0.0:
        raise ValueError(f"bin_width must be > 0 (got {bin_width}).")
    xs = _as_samples(a)
    if xs[0] < origin:
        raise ValueError(f"sample {xs[0]} lies below histogram origin {origin}.")
    idx = np.floor((xs - origin) / bin_width).astype(np.int64)
    needed = int(idx[-1]) + 1
    if n_bins is not None and n_bins < needed:
        raise ValueError(f"n_bins={n_bins} does not cover the samples ({needed} bins needed).")
    counts = np.bincount(idx, minlength=n_bins or needed)
    return Histogram(bin_width=bin_width, origin=origin, counts=counts,
                     normalized=normalized, total=int(xs.size))


def abs_square_mean(a) -> float:
    """Mean of squared moduli."""
    xs = _as_samples(a)
    return float(np.mean(xs * xs))


def two_sample_critical_value(n: int, m: int,
                              coefficient: float = KS_CRITICAL_COEFFICIENT_1PCT) -> float:
    """Asymptotic two-sample KS critical value c * sqrt((n + m) / (n m))."""
    if n < 1 or m < 1:
        raise ValueError(f"sample sizes must be >= 1 (got {n}, {m}).")
    return coefficient * math.sqrt((n + m) / (n * m))
