"""
Tests for src/dist_stats - empirical distributions, histograms, KS statistics.

Run with:
    python3 -m pytest tests/test_dist_stats.py -v
"""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.dist_stats import (
    EmpiricalDistribution,
    Histogram,
    abs_square_mean,
    histogram,
    ks_two_sample,
    ks_vs_cdf,
    two_sample_critical_value,
)

_samples = st.lists(st.floats(min_value=0.0, max_value=50.0), min_size=1, max_size=60)


# ---------------------------------------------------------------------------
# EmpiricalDistribution
# ---------------------------------------------------------------------------

class TestEmpiricalDistribution:
    @pytest.mark.parametrize("bad", [[], [1.0, float("nan")], [0.5, -0.1], [float("inf")]])
    def test_rejects_bad_samples(self, bad):
        """Empty, non-finite or negative samples raise."""
        with pytest.raises(ValueError):
            EmpiricalDistribution(np.array(bad))

    def test_sorted_and_read_only(self):
        """Samples are stored sorted and frozen."""
        d = EmpiricalDistribution(np.array([3.0, 1.0, 2.0]), seed=4, meta="m")
        assert d.samples.tolist() == [1.0, 2.0, 3.0]
        with pytest.raises(ValueError):
            d.samples[0] = 9.0
        assert (d.seed, d.meta, d.count) == (4, "m", 3)

    def test_from_complex_values(self):
        """Complex values become their moduli."""
        d = EmpiricalDistribution.from_values([3 + 4j, -1j])
        assert d.samples.tolist() == [1.0, 5.0]

    def test_right_continuous_cdf(self):
        """F_n(t) counts samples <= t with multiplicity."""
        d = EmpiricalDistribution(np.array([1.0, 2.0, 2.0, 3.0]))
        assert d.cdf(2.0) == pytest.approx(0.75)
        assert d.cdf(0.5) == 0.0
        assert d.cdf(3.0) == 1.0

    def test_summaries(self):
        """mean, median and quantile bounds."""
        d = EmpiricalDistribution(np.array([0.0, 1.0, 2.0, 5.0]))
        assert d.mean() == pytest.approx(2.0)
        assert d.median() == pytest.approx(1.5)
        assert d.quantile(1.0) == 5.0
        with pytest.raises(ValueError):
            d.quantile(1.5)

    def test_to_frame(self):
        """One 'value' column in sorted order."""
        frame = EmpiricalDistribution(np.array([2.0, 1.0])).to_frame()
        assert list(frame.columns) == ["value"]
        assert frame["value"].tolist() == [1.0, 2.0]


# ---------------------------------------------------------------------------
# KS statistics
# ---------------------------------------------------------------------------

class TestKS:
    def test_identical(self):
        """Same samples give distance 0."""
        a = np.array([0.1, 0.5, 0.9])
        assert ks_two_sample(a, a) == 0.0

    def test_disjoint(self):
        """Separated supports give distance 1."""
        assert ks_two_sample([0.0, 0.1], [1.0, 2.0, 3.0]) == pytest.approx(1.0)

    @settings(max_examples=50)
    @given(_samples, _samples)
    def test_symmetric_and_bounded(self, a, b):
        """D(A, B) = D(B, A) and lies in [0, 1]."""
        d = ks_two_sample(a, b)
        assert d == pytest.approx(ks_two_sample(b, a))
        assert 0.0 <= d <= 1.0

    def test_point_mass(self):
        """{0} against the CDF of the point mass at 0 is exact."""
        assert ks_vs_cdf([0.0], lambda t: (np.asarray(t) >= 0.0).astype(float)) == 0.0

    def test_uniform_reference(self):
        """{1/4, 3/4} against U[0, 1] has distance 1/4."""
        assert ks_vs_cdf([0.25, 0.75], lambda t: np.clip(t, 0.0, 1.0)) == pytest.approx(0.25)

    def test_critical_value(self):
        """1.63 sqrt(2 / 10^4) at n = m = 10^4."""
        assert two_sample_critical_value(10_000, 10_000) == pytest.approx(0.02305, abs=1e-5)
        with pytest.raises(ValueError):
            two_sample_critical_value(0, 10)


# ---------------------------------------------------------------------------
# Histograms
# ---------------------------------------------------------------------------

class TestHistogram:
    def test_fixed_bins(self):
        """[0.05, 0.15, 0.15, 0.31] at w = 0.1 keeps the empty third bin."""
        h = histogram([0.05, 0.15, 0.15, 0.31], 0.1)
        assert h.counts.tolist() == [1, 2, 0, 1]
        assert h.bin_left == pytest.approx([0.0, 0.1, 0.2, 0.3])

    def test_density_integrates_to_one(self):
        """Normalized values sum to 1 / w."""
        h = histogram([0.05, 0.15, 0.15, 0.31], 0.1, normalized=True)
        assert float(np.sum(h.values) * h.bin_width) == pytest.approx(1.0)

    @settings(max_examples=50)
    @given(_samples)
    def test_counts_conserved(self, xs):
        """Every sample lands in exactly one bin."""
        assert int(histogram(xs, 0.7).counts.sum()) == len(xs)

    def test_shared_grid(self):
        """n_bins pads with zeros and must cover the samples."""
        assert histogram([0.05], 0.1, n_bins=5).counts.tolist() == [1, 0, 0, 0, 0]
        with pytest.raises(ValueError, match="does not cover"):
            histogram([0.55], 0.1, n_bins=3)

    def test_rejects_bad_input(self):
        """Non-positive width or samples below origin raise."""
        with pytest.raises(ValueError):
            histogram([0.5], 0.0)
        with pytest.raises(ValueError, match="below histogram origin"):
            histogram([0.5], 0.1, origin=1.0)
        with pytest.raises(ValueError):
            Histogram(bin_width=0.1, origin=0.0, counts=np.array([-1]))

    def test_to_frame_column(self):
        """bin_left plus the requested column."""
        frame = histogram([0.05, 0.15], 0.1, normalized=True).to_frame("density")
        assert list(frame.columns) == ["bin_left", "density"]


def test_abs_square_mean():
    """{1, i, -1} has mean squared modulus 1."""
    assert abs_square_mean(EmpiricalDistribution.from_values([1, 1j, -1])) == pytest.approx(1.0)
