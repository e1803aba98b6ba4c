"""
SKEWTHETA - Modular Geometry
============================

Iwasawa coordinates on G = SL(2,R), the action of G on H x [0, 2*pi), the
Jacobi group G^ = SL(2,R) x| R^2 acting on theta arguments, and reduction of
tau into the standard fundamental domain of SL(2,Z).

Iwasawa decomposition
---------------------
Every g in SL(2,R) factors uniquely as

    g = n(u) a(v) k(phi),    n(u)   = ((1, u), (0, 1))
                             a(v)   = ((v^1/2, 0), (0, v^-1/2))
                             k(phi) = ((cos phi, -sin phi), (sin phi, cos phi))

with tau = u + iv in H and phi in [0, 2*pi).  In these coordinates left
multiplication by M = ((a, b), (c, d)) is

    M . (tau, phi) = ((a tau + b) / (c tau + d),  phi + arg(c tau + d) mod 2*pi)

and the geodesic flow Phi^t = diag(e^-t/2, e^t/2) gives
n(u) Phi^t = (u + i e^-t, 0).

Jacobi group
------------
Elements (M; zeta) multiply as (M; zeta)(M'; zeta') = (MM'; zeta + M zeta').
The theta lattice Gamma^ is generated by (T; (1/2, 0)), (S; (0, 0)) and the
integer shifts (I; m); theta moduli are invariant under its left action.

Usage
-----
    from src.modular_geometry import FramePoint, mobius_act, reduce_fundamental

    f = FramePoint(u=0.3, v=0.01, phi=0.0)
    gamma, f_red = reduce_fundamental(f)
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from src.config import CONFIG as _cfg

# ---------------------------------------------------------------------------
# Module CONFIG
# ---------------------------------------------------------------------------

CONFIG: dict = {
    "REDUCTION_MAX_STEPS": _cfg.reduction_max_steps,  # cap on T/S steps per reduction
    "DET_TOLERANCE":       1e-9,                      # |det - 1| accepted by matrix_to_frame
    "BOUNDARY_TOLERANCE":  1e-12,                     # fundamental-domain tie tolerance
    "DEGENERATE_MODULUS":  1e-300,                    # |c tau + d| floor
    "ZETA_TOLERANCE":      1e-9,                      # integrality slack for Jacobi shifts
}

TWO_PI: float = 2.0 * math.pi


def _reduce_angle(phi: float) -> float:
    """phi mod 2*pi in [0, 2*pi), with values rounding up to 2*pi folded to 0."""
    r = math.fmod(phi, TWO_PI)
    if r < 0.0:
        r += TWO_PI
    return 0.0 if r >= TWO_PI else r


def _reduce_unit(x: float) -> float:
    r = x - math.floor(x)
    return 0.0 if r >= 1.0 else r


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Mat2:
    """Real 2x2 matrix ((a, b), (c, d))."""

    a: float
    b: float
    c: float
    d: float

    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: Mat2) -> Mat2:
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def apply(self, x: float, y: float) -> tuple[float, float]:
        """Matrix-vector product M (x, y)^t."""
        return self.a * x + self.b * y, self.c * x + self.d * y

    def inverse(self) -> Mat2:
        """Inverse of a unimodular matrix (adjugate)."""
        return Mat2(self.d, -self.b, -self.c, self.a)

    def is_integral(self) -> bool:
        return all(float(v).is_integer() for v in (self.a, self.b, self.c, self.d))

    def as_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=np.float64)


@dataclass(frozen=True)
class FramePoint:
    """Iwasawa coordinates (tau = u + iv, phi) of an element of SL(2,R).

    phi is reduced into [0, 2*pi) on construction.
    """

    u: float
    v: float
    phi: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.u) and math.isfinite(self.v) and math.isfinite(self.phi)):
            raise ValueError(f"FramePoint coordinates must be finite (got {self}).")
        if self.v <= 0.0:
            raise ValueError(f"FramePoint requires v > 0 (got v={self.v}).")
        object.__setattr__(self, "phi", _reduce_angle(self.phi))

    @property
    def tau(self) -> complex:
        return complex(self.u, self.v)


@dataclass(frozen=True)
class ThetaArg:
    """Argument (tau, phi; xi) of a theta function; x and y are reduced mod 1."""

    frame: FramePoint
    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"ThetaArg shift must be finite (got x={self.x}, y={self.y}).")
        object.__setattr__(self, "x", _reduce_unit(self.x))
        object.__setattr__(self, "y", _reduce_unit(self.y))


@dataclass(frozen=True)
class JacobiElement:
    """Element (gamma; zeta) of the theta lattice Gamma^.

    gamma is an integer matrix of determinant 1 and zeta - (ab/2, cd/2) is an
    integer vector.
    """

    gamma: Mat2
    zeta: tuple[float, float]

    def __post_init__(self) -> None:
        g = self.gamma
        if not g.is_integral():
            raise ValueError(f"JacobiElement gamma must have integer entries (got {g}).")
        if g.det() != 1.0:
            raise ValueError(f"JacobiElement gamma must have det 1 (got {g.det()}).")
        tol = CONFIG["ZETA_TOLERANCE"]
        r1 = self.zeta[0] - g.a * g.b / 2.0
        r2 = self.zeta[1] - g.c * g.d / 2.0
        if abs(r1 - round(r1)) > tol or abs(r2 - round(r2)) > tol:
            raise ValueError(
                f"JacobiElement zeta {self.zeta} is not in (ab/2, cd/2) + Z^2 for gamma {g}."
            )


# ---------------------------------------------------------------------------
# Named matrices
# ---------------------------------------------------------------------------

IDENTITY: Mat2 = Mat2(1.0, 0.0, 0.0, 1.0)
T_MATRIX: Mat2 = Mat2(1.0, 1.0, 0.0, 1.0)
S_MATRIX: Mat2 = Mat2(0.0, -1.0, 1.0, 0.0)


def shear(u: float) -> Mat2:
    """Horocycle element n(u)."""
    return Mat2(1.0, u, 0.0, 1.0)


def dilation(v: float) -> Mat2:
    """Diagonal element a(v) = diag(v^1/2, v^-1/2)."""
    s = math.sqrt(v)
    return Mat2(s, 0.0, 0.0, 1.0 / s)


def rotation(phi: float) -> Mat2:
    """Rotation element k(phi)."""
    c, s = math.cos(phi), math.sin(phi)
    return Mat2(c, -s, s, c)


def geodesic_flow(t: float) -> Mat2:
    """Geodesic flow element Phi^t = diag(e^-t/2, e^t/2)."""
    return Mat2(math.exp(-t / 2.0), 0.0, 0.0, math.exp(t / 2.0))


def theta_group_generators() -> tuple[JacobiElement, ...]:
    """Generators (T; (1/2, 0)), (S; (0, 0)), (I; (1, 0)), (I; (0, 1)) of Gamma^."""
    return (
        JacobiElement(T_MATRIX, (0.5, 0.0)),
        JacobiElement(S_MATRIX, (0.0, 0.0)),
        JacobiElement(IDENTITY, (1.0, 0.0)),
        JacobiElement(IDENTITY, (0.0, 1.0)),
    )


# ---------------------------------------------------------------------------
# Public API
# ---------------------------------------------------------------------------

def frame_to_matrix(f: FramePoint) -> Mat2:
    """Recompose n(u) a(v) k(phi)."""
    return shear(f.u) @ dilation(f.v) @ rotation(f.phi)


def matrix_to_frame(m: Mat2) -> FramePoint:
    """Iwasawa coordinates of ``m``: tau = m . i and phi = arg(c i + d).

    Raises:
        ValueError: "not in SL(2,R)" when |det m - 1| > 1e-9.
    """
    if not abs(m.det() - 1.0) <= CONFIG["DET_TOLERANCE"]:
        raise ValueError(f"not in SL(2,R): det = {m.det()!r}")
    denom = complex(m.d, m.c)
    tau = complex(m.b, m.a) / denom
    return FramePoint(tau.real, tau.imag, cmath.phase(denom))


def mobius_act(g: Mat2, f: FramePoint) -> FramePoint:
    """Left action g . (tau, phi) = ((a tau + b)/(c tau + d), phi + arg(c tau + d)).

    Raises:
        ValueError: "degenerate Möbius denominator" when |c tau + d| < 1e-300.
    """
    tau = f.tau
    denom = g.c * tau + g.d
    if abs(denom) < CONFIG["DEGENERATE_MODULUS"]:
        raise ValueError("degenerate Möbius denominator")
    image = (g.a * tau + g.b) / denom
    return FramePoint(image.real, image.imag, f.phi + cmath.phase(denom))


def jacobi_act(h: JacobiElement, arg: ThetaArg) -> ThetaArg:
    """Left action (gamma; zeta) . (g; xi) = (gamma g; zeta + gamma xi), xi mod 1."""
    frame = mobius_act(h.gamma, arg.frame)
    gx, gy = h.gamma.apply(arg.x, arg.y)
    return ThetaArg(frame, h.zeta[0] + gx, h.zeta[1] + gy)


def reduce_fundamental(f: FramePoint) -> tuple[Mat2, FramePoint]:
    """Map tau into {|u| <= 1/2, |tau| >= 1} by T-shifts and inversions S.

    Ties on u = -1/2 and on |tau| = 1 with u < 0 are moved to the u >= 0 side.

    Returns:
        (gamma, gamma . f) with gamma in SL(2,Z); phi is carried by the action.

    Raises:
        RuntimeError: "reduction did not terminate" after REDUCTION_MAX_STEPS.
    """
    tol = CONFIG["BOUNDARY_TOLERANCE"]
    ga, gb, gc, gd = 1, 0, 0, 1
    tau = f.tau

    for _ in range(CONFIG["REDUCTION_MAX_STEPS"]):
        shift = math.floor(tau.real + 0.5)
        if tau.real - shift < -0.5 + tol:
            shift -= 1
        if shift:
            # T^-shift on the left
            tau -= shift
            ga, gb = ga - shift * gc, gb - shift * gd

        norm = abs(tau) ** 2
        if norm < 1.0 - tol or (norm <= 1.0 + tol and tau.real < -tol):
            # S on the left
            tau = -1.0 / tau
            ga, gb, gc, gd = -gc, -gd, ga, gb
            continue

        gamma = Mat2(float(ga), float(gb), float(gc), float(gd))
        return gamma, mobius_act(gamma, f)

    raise RuntimeError(f"reduction did not terminate for {f}")


def geodesic_horocycle_point(u: float, t: float) -> FramePoint:
    """n(u) Phi^t in Iwasawa coordinates: (u + i e^-t, 0)."""
    return FramePoint(u, math.exp(-t), 0.0)
