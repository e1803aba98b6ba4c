"""
SKEWTHETA - Skew Translation Dynamics
=====================================

The skew translation Lambda_alpha(p, q) = (p + alpha, q + p) of the 2-torus,
its closed-form iterates, Birkhoff sums of simple harmonics
psi_(k,l)(p, q) = e(k p + l q), and the sampler of |X_(N,alpha)|.

Closed-form iterate
-------------------
    Lambda_alpha^n (p, q) = (p + n alpha,  q + n p + n(n-1)/2 alpha)   mod 1

n(n-1)/2 is formed in int64 and every product is reduced with
phases.frac_product, so phases stay accurate for N up to MAX_ORBIT_LENGTH.

Connection identity
-------------------
    S_N / sqrt(N) = Theta_chi(l alpha + i N^-2, 0; ((k - l/2) alpha + l p, 0)) e(k p + l q)

connection_rhs evaluates the right-hand side through the theta engine and is
the independent partner of birkhoff_sum in tests and in ``check connection``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from src.config import CONFIG as _cfg
from src.dist_stats import EmpiricalDistribution
from src.phases import e, frac, frac_product
from src.sampling import map_batched, map_blocks
from src.theta_engine import theta_chi_split

log = logging.getLogger(__name__)

# ---------------------------------------------------------------------------
# Module CONFIG
# ---------------------------------------------------------------------------

CONFIG: dict = {
    "MAX_ORBIT_LENGTH": _cfg.max_orbit_length,  # largest N accepted
}

BIRKHOFF_STREAM: str = "birkhoff_moduli"


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TorusPoint:
    """Point (p, q) of T^2; both coordinates reduced into [0, 1)."""

    p: float
    q: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.p) and math.isfinite(self.q)):
            raise ValueError(f"TorusPoint coordinates must be finite (got {self.p}, {self.q}).")
        object.__setattr__(self, "p", float(frac(self.p)))
        object.__setattr__(self, "q", float(frac(self.q)))


@dataclass(frozen=True)
class Harmonic:
    """Simple harmonic psi_(k,l)(p, q) = e(k p + l q)."""

    k: int
    l: int  # noqa: E741

    def __post_init__(self) -> None:
        if not (float(self.k).is_integer() and float(self.l).is_integer()):
            raise ValueError(f"Harmonic frequencies must be integers (got {self.k}, {self.l}).")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "l", int(self.l))

    @property
    def is_geometric(self) -> bool:
        """l = 0: the Birkhoff sum is a plain geometric series."""
        return self.l == 0

    def __call__(self, pt: TorusPoint) -> complex:
        return complex(e(frac_product(self.k, pt.p) + frac_product(self.l, pt.q)))


@dataclass(frozen=True)
class BirkhoffSample:
    """One realisation S of S_(N,alpha)[psi](p, q) with its normalisations."""

    value: complex
    N: int

    @property
    def x(self) -> complex:
        """X_(N,alpha) = S / sqrt(N)."""
        return self.value / math.sqrt(self.N)

    def xtilde(self, c: int) -> complex:
        """X~_(N,alpha) = S / sqrt(c_N)."""
        return self.value / math.sqrt(c)


def _check_length(N: int) -> None:
    if N < 1:
        raise ValueError(f"N must be >= 1 (got {N}).")
    if N > CONFIG["MAX_ORBIT_LENGTH"]:
        raise ValueError(f"N={N} exceeds MAX_ORBIT_LENGTH={CONFIG['MAX_ORBIT_LENGTH']}.")


def _require_twist(h: Harmonic) -> None:
    if h.is_geometric:
        raise ValueError("geometric case: use closed form")


# ---------------------------------------------------------------------------
# Orbits and sums
# ---------------------------------------------------------------------------

def skew_step(pt: TorusPoint, alpha: float) -> TorusPoint:
    """One application of Lambda_alpha."""
    return TorusPoint(pt.p + alpha, pt.q + pt.p)


def skew_iterate(pt: TorusPoint, alpha: float, n: int) -> TorusPoint:
    """Lambda_alpha^n (pt) from the closed form."""
    if n < 0:
        raise ValueError(f"n must be >= 0 (got {n}).")
    tri = n * (n - 1) // 2
    p_n = frac(pt.p + frac_product(n, alpha))
    q_n = frac(pt.q + frac_product(n, pt.p) + frac_product(tri, alpha))
    return TorusPoint(float(p_n), float(q_n))


def _orbit_phases(N: int, alpha: float, h: Harmonic, p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """k p_n + l q_n mod 1 for n = 1..N and rows (p, q); shape (rows, N)."""
    n = np.arange(1, N + 1, dtype=np.int64)
    tri = n * (n - 1) // 2
    shift = np.asarray(frac_product(n, alpha))[None, :]
    drift = np.asarray(frac_product(tri, alpha))[None, :]
    p_n = frac(p[:, None] + shift)
    q_n = frac(q[:, None] + np.asarray(frac_product(n[None, :], p[:, None])) + drift)
    return np.asarray(frac_product(h.k, p_n)) + np.asarray(frac_product(h.l, q_n))


def birkhoff_sum(N: int, alpha: float, h: Harmonic, pt: TorusPoint) -> complex:
    """S_(N,alpha)[psi_(k,l)](p, q) = sum_{n=1..N} e(k p_n + l q_n)."""
    _check_length(N)
    phases = _orbit_phases(N, alpha, h, np.array([pt.p]), np.array([pt.q]))
    return complex(np.sum(e(phases)))


def birkhoff_sample(N: int, alpha: float, h: Harmonic, pt: TorusPoint) -> BirkhoffSample:
    return BirkhoffSample(value=birkhoff_sum(N, alpha, h, pt), N=N)


def birkhoff_sum_closed_form(N: int, alpha: float, h: Harmonic, pt: TorusPoint) -> complex:
    """Geometric-series form of S_N, available for alpha = 0 or l = 0.

        alpha = 0:  e((k + l) p + l q) (1 - e(N l p)) / (1 - e(l p))
        l = 0:      e(k (p + alpha)) (1 - e(N k alpha)) / (1 - e(k alpha))

    A vanishing ratio denominator means every term equals the first one.
    """
    _check_length(N)
    if alpha == 0.0:
        head = e(frac_product(h.k + h.l, pt.p) + frac_product(h.l, pt.q))
        step = frac_product(h.l, pt.p)
    elif h.is_geometric:
        head = e(frac_product(h.k, pt.p) + frac_product(h.k, alpha))
        step = frac_product(h.k, alpha)
    else:
        raise ValueError("closed form needs alpha = 0 or l = 0")
    denom = 1.0 - e(step)
    if abs(denom) < 1e-15:
        return complex(N * head)
    return complex(head * (1.0 - e(frac_product(N, step))) / denom)


def connection_rhs(N: int, alpha: float, h: Harmonic, pt: TorusPoint) -> complex:
    """Theta_chi(l alpha + i N^-2, 0; ((k - l/2) alpha + l p, 0)) e(k p + l q).

    Equals birkhoff_sum / sqrt(N).  The theta side is assembled with the
    multipliers l, 2k - l and l kept as integers against alpha/2 and p.
    """
    _check_length(N)
    _require_twist(h)
    half_alpha = alpha / 2.0
    chi = theta_chi_split(N, h.l, half_alpha, [(2 * h.k - h.l, half_alpha), (h.l, pt.p)])
    return chi * complex(e(frac_product(h.k, pt.p) + frac_product(h.l, pt.q)))


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

def birkhoff_moduli(N: int, alpha: float, h: Harmonic, count: int, seed: int,
                    q_fixed: float | None = None) -> np.ndarray:
    """|S_(N,alpha)[psi](p, q)| for ``count`` uniform (p, q); raw, unnormalised.

    Shared by x_sample and limit_laws.xtilde_sample (same stream, same draws).
    ``q_fixed`` pins q to a constant while p stays uniform.
    """
    _check_length(N)

    def _rows(u: np.ndarray) -> np.ndarray:
        q = u[:, 1] if q_fixed is None else np.full(len(u), q_fixed)
        return np.abs(np.sum(e(_orbit_phases(N, alpha, h, u[:, 0], q)), axis=1))

    return map_blocks(
        lambda u: map_batched(_rows, u, N),
        seed=seed, stream=BIRKHOFF_STREAM, count=count, dims=2,
    )


def x_sample(N: int, alpha: float, h: Harmonic, count: int, seed: int,
             q_fixed: float | None = None) -> EmpiricalDistribution:
    """Draws of |X_(N,alpha)| = |S_(N,alpha)[psi](p, q)| / sqrt(N), (p, q) uniform.

    Raises:
        ValueError: "geometric case: use closed form" when l = 0.
    """
    _require_twist(h)
    moduli = birkhoff_moduli(N, alpha, h, count, seed, q_fixed=q_fixed) / math.sqrt(N)
    log.info(
        "x sample drawn",
        extra={"N": N, "alpha": alpha, "k": h.k, "l": h.l, "count": count, "seed": seed},
    )
    return EmpiricalDistribution(moduli, seed=seed, meta=f"x N={N} alpha={alpha!r} k={h.k} l={h.l}")


def unnormalized_sample(N: int, alpha: float, h: Harmonic, count: int,
                        seed: int) -> EmpiricalDistribution:
    """Draws of |S_(N,alpha)| with no normalisation (the alpha = 0 law is O(1))."""
    moduli = birkhoff_moduli(N, alpha, h, count, seed)
    return EmpiricalDistribution(moduli, seed=seed, meta=f"S N={N} alpha={alpha!r} k={h.k} l={h.l}")
