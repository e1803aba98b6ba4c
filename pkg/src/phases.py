"""
SKEWTHETA - Mod-1 Phase Arithmetic
==================================

Every exponential in the library has the form e(x) = exp(2*pi*i*x), and every
x that enters one is first reduced to its fractional part {x} in [0, 1).
Orbit phases such as n(n-1)/2 * alpha reach ~5e11 at N = 10^6, where a plain
product already loses ~1e-5 of absolute accuracy mod 1.  ``frac_product``
recovers the rounding error of m*a with an error-free two-product (Dekker
splitting), so {m*a} stays accurate to ~1e-16 * max(1, |m*a| * 2^-53) for
integer m up to 2^53.

All functions accept scalars or numpy arrays and broadcast.

Usage
-----
    from src.phases import e, frac, frac_product

    z = e(frac_product(n * (n - 1) // 2, alpha))
"""

from __future__ import annotations

import numpy as np
import numpy.typing as npt

ArrayLike = npt.ArrayLike

# Veltkamp splitter for IEEE double: 2**27 + 1.
_SPLITTER: float = 134217729.0


# ---------------------------------------------------------------------------
# Private helpers
# ---------------------------------------------------------------------------

def _split(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split x into hi + lo with hi holding the top 26 bits of the mantissa."""
    t = _SPLITTER * x
    hi = t - (t - x)
    return hi, x - hi


def _unwrap(out: np.ndarray):
    """Return a Python-friendly scalar for 0-d results, the array otherwise."""
    return out[()] if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Public API
# ---------------------------------------------------------------------------

def frac(x: ArrayLike):
    """Fractional part {x} = x - floor(x), mapped into [0, 1) for every real x.

    Tiny negative inputs (e.g. -1e-18) make x - floor(x) round to exactly 1.0;
    those are folded back to 0.0.
    """
    arr = np.asarray(x, dtype=np.float64)
    r = arr - np.floor(arr)
    return _unwrap(np.where(r >= 1.0, 0.0, r))


def e(x: ArrayLike):
    """exp(2*pi*i*x) evaluated from the reduced phase {x}."""
    return _unwrap(np.exp(2j * np.pi * np.asarray(frac(x), dtype=np.float64)))


def frac_product(m: ArrayLike, a: ArrayLike):
    """{m * a} for integer-valued m, accurate even when |m * a| is large.

    m must be exactly representable as a double (|m| < 2^53).  The rounded
    product p = fl(m*a) and its exact rounding error err satisfy
    m*a = p + err, so {m*a} = {{p} + err}.
    """
    mm = np.asarray(m, dtype=np.float64)
    aa = np.asarray(a, dtype=np.float64)
    p = mm * aa
    m_hi, m_lo = _split(mm)
    a_hi, a_lo = _split(aa)
    err = ((m_hi * a_hi - p) + m_hi * a_lo + m_lo * a_hi) + m_lo * a_lo
    return frac(np.asarray(frac(p)) + err)


def nearest_int_distance(x: ArrayLike):
    """||x||: distance from x to the nearest integer (half-to-even rounding)."""
    arr = np.asarray(x, dtype=np.float64)
    return _unwrap(np.abs(arr - np.rint(arr)))


def near_integer(x: ArrayLike, margin: float):
    """True where x lies within ``margin`` of an integer."""
    return _unwrap(np.asarray(nearest_int_distance(x)) < margin)
