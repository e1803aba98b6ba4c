"""
Tests for src/theta_engine - windows, transforms, theta series, nu estimates.

Covers:
  - WindowFunction values and Functional parsing
  - window_transform: exact angles, Gaussian closed form vs quadrature, errors
  - chi0_window: agreement with chi at phi = pi/2, poles, validity band
  - theta / theta_batch: indicator at phi = 0 against the exact finite sum,
    Gamma^ invariance of the Gaussian theta modulus
  - parseval_grid, transform_norm_squared, chi0_parseval_error
  - nu_estimate: const_1, sup bound, large-v degeneration

Run with:
    python3 -m pytest tests/test_theta_engine.py -v
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from src.modular_geometry import FramePoint, ThetaArg, jacobi_act, theta_group_generators
from src.theta_engine import (
    Functional,
    TruncationPolicy,
    WindowFunction,
    approx_theta_chi0,
    approx_theta_chi0_batch,
    chi0_parseval_error,
    chi0_window,
    epsilon_sign,
    exact_angle,
    gaussian_window_transform,
    nu_estimate,
    parse_functional,
    parseval_grid,
    theta,
    theta_batch,
    theta_chi_exact,
    theta_chi_split,
    transform_norm_squared,
    window_transform,
)

G = WindowFunction.GAUSSIAN
CHI = WindowFunction.INDICATOR_01


# ---------------------------------------------------------------------------
# Windows and functionals
# ---------------------------------------------------------------------------

class TestWindows:
    def test_gaussian_peak(self):
        """f(0) = 2^1/4."""
        assert G(0.0) == pytest.approx(2.0 ** 0.25)

    def test_indicator_half_open(self):
        """chi is the indicator of (0, 1]."""
        assert list(CHI(np.array([0.0, 0.5, 1.0, 1.5]))) == [0.0, 1.0, 1.0, 0.0]

    def test_unit_norm(self):
        """Both windows have unit L2 norm."""
        assert G.l2_norm == 1.0 and CHI.l2_norm == 1.0


class TestFunctional:
    def test_parse_with_parameter(self):
        """tail_indicator(2) parses to kind and parameter."""
        f = parse_functional("tail_indicator(2)")
        assert (f.kind, f.param) == ("tail_indicator", 2.0)
        assert str(f) == "tail_indicator(2)"

    def test_values(self):
        """Each kind evaluates on moduli as documented."""
        r = np.array([0.5, 1.0, 3.0])
        assert list(parse_functional("const_1")(r)) == [1.0, 1.0, 1.0]
        assert list(parse_functional("abs_square")(r)) == [0.25, 1.0, 9.0]
        assert list(parse_functional("tail_indicator(1)")(r)) == [0.0, 0.0, 1.0]
        assert list(parse_functional("cdf_indicator(1)")(r)) == [1.0, 1.0, 0.0]

    @pytest.mark.parametrize("bad", ["magic", "abs_square(1)", "cdf_indicator", "tail_indicator(-1)", "1+"])
    def test_rejects(self, bad):
        """Unknown kinds and wrong parameters raise."""
        with pytest.raises(ValueError):
            parse_functional(bad)

    def test_sup(self):
        """Indicators are bounded by 1, abs_square is unbounded."""
        assert Functional("cdf_indicator", 0.5).sup == 1.0
        assert math.isinf(Functional("abs_square").sup)


# ---------------------------------------------------------------------------
# Angles and transforms
# ---------------------------------------------------------------------------

class TestAngles:
    def test_exact_angle(self):
        """Angles within 1e-12 of 0 or pi are exact."""
        assert exact_angle(2.0 * math.pi - 1e-13) == 0.0
        assert exact_angle(math.pi) == math.pi
        assert exact_angle(1.0) is None

    def test_epsilon_sign(self):
        """+1 on [0, pi), -1 on [pi, 2 pi)."""
        assert epsilon_sign(1.0) == 1.0
        assert epsilon_sign(4.0) == -1.0
        assert epsilon_sign(-1.0) == -1.0


class TestWindowTransform:
    def test_phi_zero_is_identity(self):
        """f_0 = f."""
        w = np.array([-0.5, 0.5, 2.0])
        assert np.allclose(window_transform(CHI, 0.0, w), CHI(w))

    def test_phi_pi_reflects(self):
        """f_pi(w) = f(-w)."""
        assert window_transform(CHI, math.pi, -0.5) == pytest.approx(1.0)
        assert window_transform(CHI, math.pi, 0.5) == pytest.approx(0.0)

    @pytest.mark.parametrize("phi", [0.4, 1.0, 2.5, 4.0])
    def test_gaussian_closed_form_matches_quadrature(self, phi):
        """Closed form and composite Gauss-Legendre agree."""
        w = np.array([-1.0, 0.0, 0.5, 2.0])
        closed = window_transform(G, phi, w)
        quad = window_transform(G, phi, w, method="quadrature")
        assert np.max(np.abs(closed - quad)) < 1e-10

    def test_gaussian_modulus(self):
        """|f_phi| = f for the Gaussian."""
        w = np.linspace(-2.0, 2.0, 9)
        assert np.allclose(np.abs(gaussian_window_transform(1.3, w)), G(w))

    @pytest.mark.parametrize("phi", [math.pi / 6, 2.0, 5.0])
    def test_unitarity(self, phi):
        """||f_phi||_2 = ||f||_2."""
        assert transform_norm_squared(G, phi) == pytest.approx(1.0, abs=1e-6)

    def test_axis_guard(self):
        """Near-axis angles that are not exact raise."""
        with pytest.raises(ValueError, match="too close to axis"):
            window_transform(CHI, 1e-9, 1.0)

    def test_unknown_method(self):
        """Only auto and quadrature are accepted."""
        with pytest.raises(ValueError, match="method"):
            window_transform(G, 1.0, 0.0, method="fft")


class TestChi0Window:
    def test_matches_chi_at_quarter_turn(self):
        """At phi = pi/2 the leading-order form is exact."""
        w = np.array([-7.5, -1.0, 0.3, 4.0, 25.0])
        exact = window_transform(CHI, math.pi / 2, w, method="quadrature")
        assert np.max(np.abs(exact - chi0_window(math.pi / 2, w))) < 1e-12

    def test_decay(self):
        """w^2 |chi_phi - chi_phi^(0)| stays bounded at phi = pi/3."""
        w = np.array([10.0, 20.0, 40.0])
        diff = np.abs(window_transform(CHI, math.pi / 3, w) - chi0_window(math.pi / 3, w))
        assert np.all(w * w * diff < 10.0)

    def test_pole(self):
        """w = 0 raises."""
        with pytest.raises(ValueError, match="pole"):
            chi0_window(1.0, np.array([1.0, 0.0]))

    def test_axis(self):
        """phi within 1e-8 of the axis raises."""
        with pytest.raises(ValueError, match="validity band"):
            chi0_window(1e-9, 1.0)


# ---------------------------------------------------------------------------
# Theta series
# ---------------------------------------------------------------------------

class TestTheta:
    @pytest.mark.parametrize("y", [0.0, 0.4, 2.75])
    def test_indicator_matches_exact_sum(self, y):
        """Theta_chi at phi = 0 is the finite sum over y < n <= y + N."""
        N, u, x = 17, 0.3, 0.2
        arg = ThetaArg(FramePoint(u, 1.0 / N ** 2, 0.0), x, y)
        expected = theta_chi_exact(u, N, x, arg.y)
        assert abs(theta(CHI, arg) - expected) < 1e-12

    def test_exact_sum_small_case(self):
        """N = 2, u = 0, x = 1/2, y = 0: (e(1/2) + e(1)) / sqrt(2) = 0."""
        assert abs(theta_chi_exact(0.0, 2, 0.5, 0.0)) < 1e-15

    def test_split_trivial(self):
        """A single term with zero phase is 1."""
        assert theta_chi_split(1, 0, 0.3, []) == pytest.approx(1.0)

    def test_indicator_other_angle_unavailable(self):
        """chi at a generic angle has no transform."""
        with pytest.raises(ValueError, match="transform not available"):
            theta(CHI, ThetaArg(FramePoint(0.0, 1.0, 1.0), 0.0, 0.0))

    def test_batch_matches_scalar(self):
        """theta_batch agrees with repeated theta."""
        frame = FramePoint(0.2, 1.3, 0.7)
        xs, ys = np.array([0.1, 0.6]), np.array([0.4, 0.9])
        batch = theta_batch(G, frame, xs, ys)
        single = [theta(G, ThetaArg(frame, x, y)) for x, y in zip(xs, ys)]
        assert np.allclose(batch, single, atol=1e-14)

    def test_gamma_hat_invariance(self):
        """|Theta_f| is unchanged by each lattice generator."""
        arg = ThetaArg(FramePoint(0.31, 0.83, 2.2), 0.17, 0.62)
        ref = abs(theta(G, arg))
        for h in theta_group_generators():
            assert abs(abs(theta(G, jacobi_act(h, arg))) - ref) <= 1e-9 * max(1.0, ref)

    def test_truncation_policy_validates(self):
        """n_max < 1 is rejected."""
        with pytest.raises(ValueError):
            TruncationPolicy(n_max=0)


class TestChi0Series:
    def test_scalar_matches_batch(self):
        """approx_theta_chi0 is the one-row batch."""
        trunc = TruncationPolicy(n_max=50)
        one = approx_theta_chi0(0.1, 4.0, 1.0, 0.2, 0.3, trunc)
        batch = approx_theta_chi0_batch(0.1, 4.0, 1.0, np.array([0.2]), np.array([0.3]), trunc)
        assert one == pytest.approx(complex(batch[0]))

    def test_validity_band(self):
        """|sin phi| < 0.05 raises."""
        with pytest.raises(ValueError, match="validity band"):
            approx_theta_chi0(0.0, 1.0, 0.01, 0.0, 0.5)

    def test_parseval_error_vanishes_at_quarter_turn(self):
        """chi and chi^(0) coincide at phi = pi/2."""
        assert chi0_parseval_error(100.0, math.pi / 2, 0.5) <= 1e-20

    def test_parseval_error_decreases(self):
        """The chi^(0) approximation improves as v grows at phi = pi/3."""
        assert chi0_parseval_error(1000.0, math.pi / 3, 0.5) < chi0_parseval_error(10.0, math.pi / 3, 0.5)


# ---------------------------------------------------------------------------
# Averages over xi
# ---------------------------------------------------------------------------

class TestAverages:
    @pytest.mark.parametrize("frame", [FramePoint(0.3, 1.2, 0.8), FramePoint(-0.7, 0.6, 4.0)])
    def test_parseval(self, frame):
        """Grid mean of |Theta_f|^2 is ||f||^2 = 1; mean |Theta_f| <= 1."""
        mean_sq, mean_abs = parseval_grid(G, frame, grid=256)
        assert mean_sq == pytest.approx(1.0, abs=1e-3)
        assert mean_abs <= 1.0 + 1e-3

    def test_nu_constant(self):
        """nu[const_1] = 1 with zero spread."""
        est = nu_estimate(G, FramePoint(0.0, 1.0, 0.5), "const_1", 200, seed=1)
        assert est.value == 1.0 and est.stderr == 0.0

    def test_nu_sup_bound(self):
        """|nu[F]| <= sup |F| for an indicator functional."""
        est = nu_estimate(G, FramePoint(0.1, 0.9, 1.0), "cdf_indicator(0.8)", 500, seed=2)
        assert 0.0 <= est.value <= 1.0

    def test_nu_deterministic(self):
        """Same seed, same estimate."""
        frame = FramePoint(0.1, 0.9, 1.0)
        a = nu_estimate(G, frame, "abs_square", 300, seed=5)
        b = nu_estimate(G, frame, "abs_square", 300, seed=5)
        assert a == b

    def test_nu_indicator_exact_angle(self):
        """The indicator window is accepted at phi = 0 and E|Theta|^2 is near 1."""
        est = nu_estimate(CHI, FramePoint(0.37, 1.0 / 400.0, 0.0), "abs_square", 4000, seed=3)
        assert abs(est.value - 1.0) < 5.0 * est.stderr + 0.05

    def test_nu_degenerates_at_large_v(self):
        """Schwartz windows: nu[F] -> F(0) as v grows."""
        est = nu_estimate(G, FramePoint(0.0, 1e6, 0.0), "cdf_indicator(0.1)", 2000, seed=4)
        assert est.value >= 0.95

    def test_nu_indicator_generic_angle_fails_fast(self):
        """chi at a generic angle raises before drawing."""
        with pytest.raises(ValueError, match="transform not available"):
            nu_estimate(CHI, FramePoint(0.0, 1.0, 1.0), "const_1", 10, seed=0)
