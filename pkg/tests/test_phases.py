"""
Tests for src/phases - mod-1 arithmetic.

Run with:
    python3 -m pytest tests/test_phases.py -v
"""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.phases import e, frac, frac_product, near_integer, nearest_int_distance


class TestFrac:
    def test_negative(self):
        """{-0.25} = 0.75."""
        assert frac(-0.25) == pytest.approx(0.75)

    def test_tiny_negative_folds_to_zero(self):
        """-1e-18 - floor(-1e-18) rounds to 1.0 and is folded to 0."""
        assert frac(-1e-18) == 0.0

    def test_array(self):
        """Arrays broadcast elementwise."""
        out = frac(np.array([1.5, -2.25, 3.0]))
        assert np.allclose(out, [0.5, 0.75, 0.0])

    @given(st.floats(min_value=-1e9, max_value=1e9, allow_nan=False))
    def test_range(self, x):
        """{x} always lies in [0, 1)."""
        r = frac(x)
        assert 0.0 <= r < 1.0


class TestE:
    def test_quarter_turn(self):
        """e(1/4) = i."""
        assert abs(e(0.25) - 1j) < 1e-15

    def test_integer_shift(self):
        """e(x + 10^9) = e(x) because the phase is reduced first."""
        assert abs(e(0.3 + 1e9) - e(0.3)) < 1e-6

    @given(st.floats(min_value=-1e6, max_value=1e6, allow_nan=False))
    def test_unimodular(self, x):
        """|e(x)| = 1."""
        assert abs(abs(e(x)) - 1.0) < 1e-12


class TestFracProduct:
    def test_recovers_rounding_error(self):
        """{10^12 * fl(0.1)} keeps the 5.55e-6 hidden in the rounding of 0.1."""
        assert frac_product(10**12, 0.1) == pytest.approx(5.551115123125783e-06, abs=1e-15)

    def test_small_values_match_plain_product(self):
        """For small m the result is the ordinary fractional part."""
        assert frac_product(7, 0.3) == pytest.approx(0.1, abs=1e-15)

    def test_triangular_orbit_phase(self):
        """n(n-1)/2 alpha at n = 10^6 agrees with exact rational arithmetic."""
        from fractions import Fraction

        n = 10**6
        tri = n * (n - 1) // 2
        alpha = math.sqrt(2.0) - 1.0
        exact = Fraction(tri) * Fraction(alpha)
        expected = float(exact - math.floor(exact))
        assert frac_product(tri, alpha) == pytest.approx(expected, abs=1e-12)

    @given(st.integers(min_value=-10**6, max_value=10**6),
           st.floats(min_value=-10.0, max_value=10.0, allow_nan=False))
    def test_range(self, m, a):
        """Always in [0, 1)."""
        r = frac_product(m, a)
        assert 0.0 <= r < 1.0


class TestNearestInt:
    def test_distance(self):
        """||2.7|| = 0.3."""
        assert nearest_int_distance(2.7) == pytest.approx(0.3)

    def test_symmetric(self):
        """||x|| = ||-x||."""
        assert nearest_int_distance(-0.2) == pytest.approx(nearest_int_distance(0.2))

    def test_near_integer(self):
        """Points inside the margin are flagged, others are not."""
        assert bool(near_integer(3.0 + 1e-13, 1e-12))
        assert not bool(near_integer(3.0 + 1e-9, 1e-12))
