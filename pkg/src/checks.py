"""
SKEWTHETA - Invariant Suites
============================

Seeded, self-contained verification suites behind ``python -m src.cli check``.
Each suite returns a list of CheckResult records (measured value, threshold,
verdict); the CLI prints one "[PASS]/[FAIL] name measured threshold" line per
record and exits 0 only when every record passes.

Suites
------
    parseval      |Theta_f|^2 averages to ||f||^2 over the xi-torus; Hoelder bound;
                  ||f_phi||_2 = ||f||_2 for the Gaussian
    invariance    |Theta_f| invariant under the four Gamma^ generators
    connection    S_N / sqrt(N) equals the theta-side value (relative 1e-12)
    alpha0        alpha = 0 Birkhoff law and first-choice draws vs the radial CDF
    y00           Y_(0,0) and the first-choice variable share a law; x = 1/2 pinning
    variance      E |X_(N,alpha)|^2 = 1
    chi0          w^2 |chi_phi - chi_phi^(0)| bounded and stable under panel doubling
    diophantine   c_N minimality, gcd, inverse and determinant relations
    frame         S1 / S2 residuals and the closed form of sin phi on the renormalised frame
    scaling       chi^(0) theta-series L2 error decays like v^-3/2
    degeneration  delta_0 limits: alpha = 0 medians, large-v Gaussian, cusp excursions
    theta_modulus |X_(N,alpha)| and the theta modulus share a law
    figures       fig 1 / fig 2 renormalization data and KS agreement of |X~| with |Y|

Default sample counts follow the acceptance sizes; ``samples`` overrides every
Monte Carlo count of a suite.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from src.config import CONFIG as _cfg
from src.dist_stats import (
    EmpiricalDistribution,
    abs_square_mean,
    ks_two_sample,
    ks_vs_cdf,
    two_sample_critical_value,
)
from src.limit_laws import (
    RADIAL_DENSITY_AT_ZERO,
    LimitParams,
    alpha0_sample,
    radial_cdf,
    radial_cdf_closed,
    radial_density,
    theta_modulus_sample,
    xtilde_sample,
    y00_sample,
    y_sample,
)
from src.modular_geometry import FramePoint, ThetaArg, jacobi_act, theta_group_generators
from src.phases import frac_product, nearest_int_distance
from src.renormalization import cusp_height, renorm_data, renorm_frame, subsequence_scan
from src.sampling import block_generator
from src.skew_dynamics import Harmonic, TorusPoint, birkhoff_sum, connection_rhs, unnormalized_sample, x_sample
from src.theta_engine import (
    WindowFunction,
    chi0_parseval_error,
    chi0_window,
    nu_estimate,
    parseval_grid,
    theta,
    transform_norm_squared,
    window_transform,
)

log = logging.getLogger(__name__)

# ---------------------------------------------------------------------------
# Module CONFIG
# ---------------------------------------------------------------------------

CONFIG: dict = {
    "FIGURE_KS_THRESHOLD": _cfg.figure_ks_threshold,  # |X~| vs |Y| two-sample KS
    "RESIDUAL_TOLERANCE":  _cfg.residual_tolerance,   # frame residual bound
    "SERIES_N_MAX":        _cfg.series_n_max,         # Y series cutoff for figures
}

PI_MINUS_3: float = math.pi - 3.0

# (N, expected c, d, a, varphi, excursion and shrink intervals) per figure
FIGURE_PARAMS: dict[int, dict] = {
    1: {"N": 2260, "c": 113, "d": -16, "a": 7, "varphi": (0.0, 0.0), "excursion": (1.362, 1.364), "shrink": (0.05, 0.05)},
    2: {"N": 2300, "c": 113, "d": -16, "a": 7, "varphi": (0.3535, 0.3545), "excursion": (1.410, 1.412), "shrink": (0.0490, 0.0492)},
}


# ---------------------------------------------------------------------------
# Result record
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    """One quantitative check: measured value against a threshold."""

    name: str
    measured: float
    threshold: float
    passed: bool

    def format_line(self) -> str:
        verdict = "[PASS]" if self.passed else "[FAIL]"
        return f"{verdict} {self.name} {self.measured:.6g} {self.threshold:.6g}"


def _at_most(name: str, measured: float, threshold: float) -> CheckResult:
    ok = bool(np.isfinite(measured)) and measured <= threshold
    return CheckResult(name, float(measured), float(threshold), ok)


def _at_least(name: str, measured: float, threshold: float) -> CheckResult:
    ok = bool(np.isfinite(measured)) and measured >= threshold
    return CheckResult(name, float(measured), float(threshold), ok)


def _within(name: str, measured: float, lo: float, hi: float) -> CheckResult:
    """Pass when lo <= measured <= hi; the reported threshold is the nearer bound."""
    ok = bool(np.isfinite(measured)) and lo <= measured <= hi
    bound = lo if abs(measured - lo) <= abs(measured - hi) else hi
    return CheckResult(name, float(measured), float(bound), ok)


def _rng(seed: int, suite: str) -> np.random.Generator:
    return block_generator(seed, f"check_{suite}", 0)


def _random_frames(rng: np.random.Generator, count: int) -> list[FramePoint]:
    u = rng.uniform(-1.0, 1.0, count)
    v = rng.uniform(0.5, 2.0, count)
    phi = rng.uniform(0.0, 2.0 * math.pi, count)
    return [FramePoint(float(a), float(b), float(c)) for a, b, c in zip(u, v, phi)]


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------

def suite_parseval(seed: int, samples: int | None = None) -> list[CheckResult]:
    g = WindowFunction.GAUSSIAN
    frames = _random_frames(_rng(seed, "parseval"), 5)
    sq_err, l1_max = 0.0, 0.0
    for frame in frames:
        mean_sq, mean_abs = parseval_grid(g, frame, grid=256)
        sq_err = max(sq_err, abs(mean_sq - 1.0))
        l1_max = max(l1_max, mean_abs)
    unitarity = max(abs(transform_norm_squared(g, phi) - 1.0)
                    for phi in (math.pi / 6, math.pi / 3, math.pi / 2, 2.0))
    nu = nu_estimate(g, frames[0], "abs_square", samples or 20_000, seed)
    return [
        _at_most("parseval_abs_square_error", sq_err, 1e-3),
        _at_most("holder_abs_mean", l1_max, 1.0 + 1e-3),
        _at_most("transform_unitarity_error", unitarity, 1e-6),
        _at_most("nu_abs_square_stderrs", abs(nu.value - 1.0) / max(nu.stderr, 1e-300), 3.0),
    ]


def suite_invariance(seed: int, samples: int | None = None) -> list[CheckResult]:
    rng = _rng(seed, "invariance")
    count = samples or 100
    frames = _random_frames(rng, count)
    xs, ys = rng.random(count), rng.random(count)
    g = WindowFunction.GAUSSIAN
    worst = 0.0
    for frame, x, y in zip(frames, xs, ys):
        arg = ThetaArg(frame, float(x), float(y))
        ref = abs(theta(g, arg))
        for h in theta_group_generators():
            moved = abs(theta(g, jacobi_act(h, arg)))
            worst = max(worst, abs(moved - ref) / max(1.0, ref))
    return [_at_most("gamma_hat_invariance_rel_dev", worst, 1e-8)]


def suite_connection(seed: int, samples: int | None = None) -> list[CheckResult]:
    rng = _rng(seed, "connection")
    count = samples or 100
    worst = 0.0
    for _ in range(count):
        alpha = float(rng.random())
        k = int(rng.integers(-5, 6))
        l = int(rng.choice([-5, -4, -3, -2, -1, 1, 2, 3, 4, 5]))  # noqa: E741
        pt = TorusPoint(float(rng.random()), float(rng.random()))
        h = Harmonic(k, l)
        for N in (1, 7, 100, 1000):
            lhs = birkhoff_sum(N, alpha, h, pt) / math.sqrt(N)
            rhs = connection_rhs(N, alpha, h, pt)
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs)))
    return [_at_most("connection_identity_rel_error", worst, 1e-12)]


def suite_alpha0(seed: int, samples: int | None = None) -> list[CheckResult]:
    s_count = samples or 10_000
    a_count = samples or 100_000
    s_abs = unnormalized_sample(1000, 0.0, Harmonic(0, 1), s_count, seed)
    draws = alpha0_sample(a_count, seed)
    grid = np.array([0.1, 0.5, 0.9, 1.5, 4.0])
    closed_vs_quad = float(np.max(np.abs(radial_cdf_closed(grid) - radial_cdf(grid))))
    return [
        _at_most("ks_birkhoff_alpha0_vs_radial_cdf", ks_vs_cdf(s_abs, radial_cdf_closed), 0.03),
        _at_most("ks_alpha0_sample_vs_radial_cdf", ks_vs_cdf(draws, radial_cdf_closed), 0.02),
        _at_most("radial_density_at_zero_error",
                 abs(float(radial_density(1e-9)) - RADIAL_DENSITY_AT_ZERO), 1e-6),
        _at_most("radial_cdf_at_infinity_error", abs(float(radial_cdf(math.inf)) - 1.0), 1e-6),
        _at_most("radial_cdf_closed_vs_quadrature", closed_vs_quad, 1e-8),
    ]


def suite_y00(seed: int, samples: int | None = None) -> list[CheckResult]:
    count = samples or 100_000
    y00 = y00_sample(count, seed)
    pinned = y00_sample(count, seed + 1, x_fixed=0.5)
    a0 = alpha0_sample(count, seed + 2)
    ks_free = ks_two_sample(y00, a0)
    ks_pinned = ks_two_sample(pinned, a0)
    crit = two_sample_critical_value(count, count)
    y_00 = y_sample(LimitParams(0.0, 0.0), min(count, 10_000), seed + 3)
    return [
        _at_most("ks_y00_vs_alpha0", ks_free, 0.02),
        _at_most("ks_change_x_pinned", abs(ks_pinned - ks_free), crit),
        _at_most("ks_y_omega0_varphi0_vs_y00", ks_two_sample(y_00, y00),
                 two_sample_critical_value(y_00.count, y00.count)),
    ]


def suite_variance(seed: int, samples: int | None = None) -> list[CheckResult]:
    count = samples or 100_000
    xs = x_sample(500, math.sqrt(2.0), Harmonic(1, 1), count, seed)
    return [_within("mean_abs_x_squared", abs_square_mean(xs), 0.95, 1.05)]


def chi0_bound_constant(phi: float, panels: int) -> float:
    """max over w in {2, 4, ..., 50} of w^2 |chi_phi(w) - chi_phi^(0)(w)|."""
    w = np.arange(2.0, 51.0, 2.0)
    exact = np.asarray(window_transform(WindowFunction.INDICATOR_01, phi, w,
                                        method="quadrature", panels=panels))
    return float(np.max(w * w * np.abs(exact - np.asarray(chi0_window(phi, w)))))


def suite_chi0(seed: int, samples: int | None = None) -> list[CheckResult]:
    results = []
    panels = _cfg.quadrature_panels
    for label, phi in (("pi/3", math.pi / 3), ("pi/2", math.pi / 2), ("2pi/3", 2 * math.pi / 3)):
        base = chi0_bound_constant(phi, panels)
        refined = chi0_bound_constant(phi, 2 * panels)
        results.append(_at_most(f"chi0_bound_constant[{label}]", base, 10.0))
        results.append(_at_most(f"chi0_bound_refinement_change[{label}]", abs(base - refined), 1e-3))
    return results


def scaling_slope(phi: float, y: float = 0.5, n_terms: int = 50) -> float:
    """Fitted log-log slope of the chi^(0) Parseval error over v in {10, 100, 1000}."""
    vs = np.array([10.0, 100.0, 1000.0])
    errs = np.array([chi0_parseval_error(v, phi, y, n_terms) for v in vs])
    return float(np.polyfit(np.log(vs), np.log(errs), 1)[0])


def suite_scaling(seed: int, samples: int | None = None) -> list[CheckResult]:
    vanishing = max(chi0_parseval_error(v, math.pi / 2, 0.5) for v in (10.0, 100.0, 1000.0))
    return [
        _at_most("chi0_parseval_slope[pi/3]", scaling_slope(math.pi / 3), -1.3),
        _at_most("chi0_parseval_error[pi/2]", vanishing, 1e-20),
    ]


def suite_diophantine(seed: int, samples: int | None = None) -> list[CheckResult]:
    rng = _rng(seed, "diophantine")
    count = samples or 1000
    n_hi = 1000
    failures = 0
    cs = np.arange(1, n_hi + 1)
    for u in rng.random(count):
        u = float(u)
        # brute-force oracle: first qualifying c per N over the full (N, c) grid
        dist = np.asarray(nearest_int_distance(frac_product(cs, u)))
        oracle = cs[np.argmax(dist[None, :] <= (1.0 / cs)[:, None], axis=1)]
        for data in subsequence_scan(u, range(1, n_hi + 1), math.inf, math.inf):
            s = data.residual
            bad = (
                data.c > data.N
                or data.c != int(oracle[data.N - 1])
                or math.gcd(data.c, data.d) != 1
                or (data.a * data.d - 1) % data.c != 0
                or data.a * data.d - data.b * data.c != 1
                or not -0.5 <= s < 0.5
                or not (0.0 <= data.omega < 1.0 and 0.0 <= data.varphi < 1.0)
            )
            failures += int(bad)
    return [_at_most("diophantine_failures", failures, 0)]


def suite_frame(seed: int, samples: int | None = None) -> list[CheckResult]:
    rng = _rng(seed, "frame")
    count = samples or 100
    worst = 0.0
    for u, N in zip(rng.random(count), rng.integers(1, 10_001, count)):
        _, res = renorm_frame(float(u), int(N))
        worst = max(worst, res.max_residual)
    return [_at_most("frame_max_residual", worst, CONFIG["RESIDUAL_TOLERANCE"])]


def suite_degeneration(seed: int, samples: int | None = None) -> list[CheckResult]:
    count = samples or 10_000
    med = x_sample(10_000, 0.0, Harmonic(0, 1), count, seed).median()
    far = nu_estimate(WindowFunction.GAUSSIAN, FramePoint(0.0, 1e6, 0.0),
                      "cdf_indicator(0.1)", min(count, 5000), seed)
    golden = (math.sqrt(5.0) - 1.0) / 2.0
    golden_max = max(cusp_height(golden, N) for N in range(10, 1001, 10))
    return [
        _at_most("median_abs_x_alpha0", med, 0.1),
        _at_least("nu_cdf_indicator_large_v", far.value, 0.95),
        _at_least("cusp_height_rational", cusp_height(0.5, 100), 100.0),
        _at_most("cusp_height_golden_max", golden_max, 3.0),
    ]


def suite_theta_modulus(seed: int, samples: int | None = None) -> list[CheckResult]:
    count = samples or 10_000
    N, alpha = 500, math.sqrt(2.0)
    xs = x_sample(N, alpha, Harmonic(1, 1), count, seed)
    th = theta_modulus_sample(alpha, N, count, seed + 1)
    # 0.1% level: 1.95 sqrt((n + m) / (n m))
    crit = two_sample_critical_value(count, count, coefficient=1.95)
    return [_at_most("ks_x_vs_theta_modulus", ks_two_sample(xs, th), crit)]


def figure_report(fig: int, seed: int, samples: int,
                  n_max: int | None = None) -> tuple[dict, EmpiricalDistribution, EmpiricalDistribution]:
    """Renormalization record plus the |X~| and |Y| draws of figure ``fig``.

    Returns:
        (sidecar dict, xtilde EmpiricalDistribution, y EmpiricalDistribution)
    """
    ref = FIGURE_PARAMS[fig]
    data = renorm_data(PI_MINUS_3, ref["N"])
    xt = xtilde_sample(ref["N"], PI_MINUS_3, Harmonic(0, 1), samples, seed)
    cutoff = CONFIG["SERIES_N_MAX"] if n_max is None else n_max
    ys = y_sample(LimitParams(data.omega, data.varphi, cutoff), samples, seed + 1)
    ks = ks_two_sample(xt, ys)
    lo_phi, hi_phi = ref["varphi"]
    lo_ex, hi_ex = ref["excursion"]
    lo_sh, hi_sh = ref["shrink"]
    integers_ok = (data.c, data.d, data.a) == (ref["c"], ref["d"], ref["a"])
    ranges_ok = (
        lo_phi - 1e-12 <= data.varphi <= hi_phi + 1e-12
        and lo_ex <= data.excursion <= hi_ex
        and lo_sh - 1e-12 <= data.shrink <= hi_sh + 1e-12
    )
    threshold = CONFIG["FIGURE_KS_THRESHOLD"]
    sidecar = {
        "figure": fig,
        "n": data.N,
        "u": data.u,
        "c": data.c,
        "d": data.d,
        "a": data.a,
        "b": data.b,
        "omega": data.omega,
        "varphi": data.varphi,
        "excursion": data.excursion,
        "shrink": data.shrink,
        "samples": samples,
        "seed": seed,
        "n_max": cutoff,
        "ks": ks,
        "threshold": threshold,
        "renorm_matches": bool(integers_ok and ranges_ok),
        "passed": bool(integers_ok and ranges_ok and ks <= threshold),
    }
    return sidecar, xt, ys


def suite_figures(seed: int, samples: int | None = None) -> list[CheckResult]:
    count = samples or _cfg.sample_count
    results = []
    for fig in (1, 2):
        side, _, _ = figure_report(fig, seed, count)
        results.append(_at_most(f"figure{fig}_renorm_mismatch", 0 if side["renorm_matches"] else 1, 0))
        results.append(_at_most(f"figure{fig}_ks", side["ks"], side["threshold"]))
    return results


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

SUITES: dict[str, Callable[[int, int | None], list[CheckResult]]] = {
    "parseval":      suite_parseval,
    "invariance":    suite_invariance,
    "connection":    suite_connection,
    "alpha0":        suite_alpha0,
    "y00":           suite_y00,
    "variance":      suite_variance,
    "chi0":          suite_chi0,
    "diophantine":   suite_diophantine,
    "frame":         suite_frame,
    "scaling":       suite_scaling,
    "degeneration":  suite_degeneration,
    "theta_modulus": suite_theta_modulus,
    "figures":       suite_figures,
}


def run_suite(name: str, seed: int, samples: int | None = None) -> list[CheckResult]:
    """Run one named suite and log each verdict.

    Raises:
        ValueError: for an unknown suite name.
    """
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; expected one of {sorted(SUITES)}")
    results = SUITES[name](seed, samples)
    for r in results:
        log.info(
            "check verdict",
            extra={"suite": name, "check": r.name, "measured": r.measured,
                   "threshold": r.threshold, "passed": r.passed},
        )
    return results
