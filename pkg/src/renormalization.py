"""
SKEWTHETA - Diophantine Renormalization
=======================================

Renormalization data of a real u at scale N:

    c = c_N(u)   least c >= 1 with ||c u|| <= 1/N             (1 <= c <= N by Dirichlet)
    d = d_N(u)   unique integer with -1/2 <= c u + d < 1/2
    a = a_N      least nonnegative residue of d^-1 mod c       (0 when c = 1)
    b            (a d - 1) / c, so gamma = ((a, b), (c, d)) has det 1
    omega        {a / c}
    varphi       {N / c}
    excursion    N^2 ||c u|| / c
    shrink       c / N

gamma moves the geodesic point (u + i N^-2, 0) to a frame (tau', phi') with

    S1   v'^-1/2 cos phi' = N (c u + d),   v'^-1/2 sin phi' = c / N
    S2   u' + v' cot phi' = a / c

and sin phi' = (1 + (N^2 (c u + d) / c)^2)^-1/2, so bounded excursion keeps
phi' away from the axis.  renorm_frame returns the residuals of all three.

c is found by an exhaustive vectorised scan (chunked, resumable from a known
lower bound because c_N is nondecreasing in N).
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass

import numpy as np

from src.config import CONFIG as _cfg
from src.modular_geometry import FramePoint, Mat2, geodesic_horocycle_point, mobius_act, reduce_fundamental
from src.phases import frac_product, nearest_int_distance

log = logging.getLogger(__name__)

# ---------------------------------------------------------------------------
# Module CONFIG
# ---------------------------------------------------------------------------

CONFIG: dict = {
    "MAX_ORBIT_LENGTH":   _cfg.max_orbit_length,    # largest N accepted by the scan
    "RESIDUAL_TOLERANCE": _cfg.residual_tolerance,  # S1/S2/sin-phi acceptance bound
    "SCAN_CHUNK":         4096,                     # candidates per vectorised step
}


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RenormData:
    """Diophantine renormalization record of (u, N)."""

    N: int
    u: float
    c: int
    d: int
    a: int
    b: int
    omega: float
    varphi: float
    excursion: float
    shrink: float
    signed_offset: float

    def __post_init__(self) -> None:
        if not 1 <= self.c <= self.N:
            raise ValueError(f"c must lie in [1, N] (got c={self.c}, N={self.N}).")
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"det gamma != 1 for a={self.a}, b={self.b}, c={self.c}, d={self.d}.")

    @property
    def gamma(self) -> Mat2:
        return Mat2(float(self.a), float(self.b), float(self.c), float(self.d))

    @property
    def residual(self) -> float:
        """Signed c u + d in [-1/2, 1/2)."""
        return self.signed_offset * self.c / (self.N * self.N)

    def as_record(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class FrameResiduals:
    """Residuals of the S1/S2 relations and of the closed form of sin phi."""

    s1_cos: float
    s1_sin: float
    s2: float
    sin_phi: float
    sin_phi_closed: float

    @property
    def sin_residual(self) -> float:
        return abs(self.sin_phi - self.sin_phi_closed)

    @property
    def max_residual(self) -> float:
        return max(abs(self.s1_cos), abs(self.s1_sin), abs(self.s2), self.sin_residual)

    def ok(self, tol: float | None = None) -> bool:
        return self.max_residual <= (CONFIG["RESIDUAL_TOLERANCE"] if tol is None else tol)

    def as_record(self) -> dict:
        rec = asdict(self)
        rec["sin_residual"] = self.sin_residual
        rec["max_residual"] = self.max_residual
        return rec


# ---------------------------------------------------------------------------
# Private helpers
# ---------------------------------------------------------------------------

def _check_N(N: int) -> None:
    if N < 1:
        raise ValueError(f"N must be >= 1 (got {N}).")
    if N > CONFIG["MAX_ORBIT_LENGTH"]:
        raise ValueError(f"N={N} exceeds MAX_ORBIT_LENGTH={CONFIG['MAX_ORBIT_LENGTH']}.")


def _first_c(u: float, N: int, start: int = 1) -> int:
    """Least c in [start, N] with ||c u|| <= 1/N."""
    bound = 1.0 / N
    chunk = CONFIG["SCAN_CHUNK"]
    for lo in range(start, N + 1, chunk):
        cs = np.arange(lo, min(lo + chunk, N + 1), dtype=np.int64)
        hits = np.flatnonzero(np.asarray(nearest_int_distance(frac_product(cs, u))) <= bound)
        if hits.size:
            return int(cs[hits[0]])
    best = np.arange(1, N + 1, dtype=np.int64)
    dist = np.asarray(nearest_int_distance(frac_product(best, u)))
    raise RuntimeError(
        f"c scan exhausted for u={u!r}, N={N}: min ||c u|| = {dist.min():.3e} "
        f"at c={int(best[dist.argmin()])} > 1/N = {bound:.3e}"
    )


def _signed_residual(u: float, c: int) -> float:
    """c u + d in [-1/2, 1/2), from the accurate fractional part of c u."""
    r = float(frac_product(c, u))
    return r if r < 0.5 else r - 1.0


def _build(u: float, N: int, c: int) -> RenormData:
    s = _signed_residual(u, c)
    d = int(round(s - c * u))
    if math.gcd(c, d) != 1:
        raise RuntimeError(f"inconsistent convergent: gcd(c={c}, d={d}) != 1 for u={u!r}, N={N}")
    a = 0 if c == 1 else pow(d, -1, c)
    num = a * d - 1
    if num % c:
        raise RuntimeError(f"inconsistent convergent: c={c} does not divide a d - 1 = {num}")
    return RenormData(
        N=N, u=u, c=c, d=d, a=a, b=num // c,
        omega=a / c,
        varphi=(N % c) / c,
        excursion=N * N * abs(s) / c,
        shrink=c / N,
        signed_offset=N * N * s / c,
    )


# ---------------------------------------------------------------------------
# Public API
# ---------------------------------------------------------------------------

def c_of(u: float, N: int) -> int:
    """c_N(u) = min{c >= 1 : ||c u|| <= 1/N} by exhaustive scan.

    Raises:
        RuntimeError: if no c <= N qualifies (floating-point boundary case).
    """
    _check_N(N)
    return _first_c(u, N)


def renorm_data(u: float, N: int) -> RenormData:
    """Full renormalization record of (u, N).

    Raises:
        RuntimeError: "inconsistent convergent" if gcd(c, d) != 1.
    """
    _check_N(N)
    return _build(u, N, _first_c(u, N))


def renorm_frame(u: float, N: int) -> tuple[FramePoint, FrameResiduals]:
    """gamma . (u + i N^-2, 0) together with the S1/S2 and sin-phi residuals.

    The S2 residual is relative to max(1, |u'|); u' can reach N^2 / c^2.
    """
    data = renorm_data(u, N)
    frame = mobius_act(data.gamma, geodesic_horocycle_point(u, 2.0 * math.log(N)))
    root = 1.0 / math.sqrt(frame.v)
    sin_phi, cos_phi = math.sin(frame.phi), math.cos(frame.phi)
    s = data.residual
    s2_abs = frame.u + frame.v * cos_phi / sin_phi - data.a / data.c
    residuals = FrameResiduals(
        s1_cos=root * cos_phi - N * s,
        s1_sin=root * sin_phi - data.c / N,
        s2=s2_abs / max(1.0, abs(frame.u)),
        sin_phi=sin_phi,
        sin_phi_closed=1.0 / math.sqrt(1.0 + data.signed_offset ** 2),
    )
    return frame, residuals


def subsequence_scan(u: float, N_range, excursion_bound: float,
                     shrink_max: float) -> list[RenormData]:
    """Records with shrink <= shrink_max and excursion <= excursion_bound, sorted by N.

    excursion <= E is equivalent to sin phi' >= (1 + E^2)^-1/2.

    Args:
        u:               Real to renormalize.
        N_range:         A range or any iterable of N; every element is scanned.
        excursion_bound: Upper bound on N^2 ||c u|| / c.
        shrink_max:      Upper bound on c / N.
    """
    Ns = N_range if isinstance(N_range, range) and N_range.step > 0 else sorted(int(n) for n in N_range)
    if len(Ns) == 0:
        raise ValueError("N_range must be nonempty.")

    hits: list[RenormData] = []
    c_floor, prev_N = 1, 0
    for N in Ns:
        _check_N(N)
        # c_N is nondecreasing in N, so resume from the previous value
        c = _first_c(u, N, start=c_floor if N >= prev_N else 1)
        c_floor, prev_N = c, N
        data = _build(u, N, c)
        if data.shrink <= shrink_max and data.excursion <= excursion_bound:
            hits.append(data)

    log.info(
        "subsequence scan",
        extra={"u": u, "n_lo": Ns[0], "n_hi": Ns[-1], "hits": len(hits),
               "excursion_bound": excursion_bound, "shrink_max": shrink_max},
    )
    return hits


def cusp_height(u: float, N: int) -> float:
    """Im of the fundamental-domain representative of (u + i N^-2, 0).

    Dominates the height v' of renorm_frame and grows without bound along
    subsequences where the geodesic escapes into the cusp.
    """
    _check_N(N)
    _, reduced = reduce_fundamental(FramePoint(u, 1.0 / (N * N), 0.0))
    return reduced.v
