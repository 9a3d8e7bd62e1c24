"""Improper-integral and series classifier battery.

Every finite truth below was frozen from an independent high-precision
evaluation (mpmath at 30 significant digits) or is a textbook closed form;
none was produced by the code under test.
"""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nmlregret.errors import BadBracket, BadParameter, TooFewSamples
from nmlregret.quadrature import (
    DEFAULT_CONFIG,
    QuadConfig,
    integrate,
    limit_extrapolate,
    root_find_monotone,
    sum_series,
)

INV_LOG2 = 1.4426950408889634074
SQRT_2PI = 2.5066282746310005024
SQRT_PI = 1.7724538509055160273
ZETA_3_2 = 2.6123753486854883433
PI2_OVER_6 = 1.6449340668482264365
# sum over m >= 2 of 1/(m log^2 m): direct partial sum to 2e7 plus the
# integral-test tail 1/log(N + 1/2); mpmath.nsum misconverges on this series
SLOW_SERIES = 2.109742801236896

INF = math.inf

# (label, integrand, interval, truth or None-for-divergent)
INTEGRAL_CASES = [
    ("inv_sqrt_left_singularity", lambda x: x ** -0.5, (0.0, 1.0), 2.0),
    ("one_over_x_at_zero", lambda x: 1.0 / x, (0.0, 1.0), None),
    ("x_log_squared_at_zero",
     lambda x: 1.0 / (x * math.log(x) ** 2), (0.0, 0.5), INV_LOG2),
    ("x_log_at_zero_diverges",
     lambda x: 1.0 / (x * math.log(1.0 / x)), (0.0, 0.5), None),
    ("exponential_tail", lambda x: math.exp(-x), (0.0, INF), 1.0),
    ("cauchy_density", lambda x: 1.0 / (1.0 + x * x), (-INF, INF), math.pi),
    ("x_log_squared_tail",
     lambda x: 1.0 / (x * math.log(x) ** 2), (2.0, INF), INV_LOG2),
    ("x_log_tail_diverges", lambda x: 1.0 / (x * math.log(x)), (2.0, INF), None),
    ("gaussian_full_line", lambda x: math.exp(-x * x / 2.0), (-INF, INF), SQRT_2PI),
    ("gamma_second_moment", lambda x: x * x * math.exp(-x), (0.0, INF), 2.0),
    ("power_three_halves_tail", lambda x: x ** -1.5, (1.0, INF), 2.0),
    ("harmonic_tail_diverges", lambda x: 1.0 / x, (1.0, INF), None),
    ("log_singularity_signed", lambda x: math.log(x), (0.0, 1.0), -1.0),
    ("inv_sqrt_right_singularity",
     lambda x: (1.0 - x) ** -0.5, (0.0, 1.0), 2.0),
    ("singular_times_tail",
     lambda x: math.exp(-x) / math.sqrt(x), (0.0, INF), SQRT_PI),
]

# (label, term as a function of k >= 0, truth or None-for-divergent)
SERIES_CASES = [
    ("zeta_three_halves", lambda k: (k + 1.0) ** -1.5, ZETA_3_2),
    ("harmonic_diverges", lambda k: 1.0 / (k + 1.0), None),
    ("basel", lambda k: (k + 1.0) ** -2.0, PI2_OVER_6),
    ("geometric_halving", lambda k: 2.0 ** -k, 2.0),
    ("log_squared_slow",
     lambda k: 1.0 / ((k + 2.0) * math.log(k + 2.0) ** 2), SLOW_SERIES),
]


def test_battery_has_twenty_cases():
    assert len(INTEGRAL_CASES) + len(SERIES_CASES) == 20


@pytest.mark.parametrize("label,f,interval,truth",
                         INTEGRAL_CASES, ids=[c[0] for c in INTEGRAL_CASES])
def test_integral_battery(label, f, interval, truth):
    v = integrate(f, interval, DEFAULT_CONFIG)
    if truth is None:
        assert v.is_divergent, f"{label}: expected divergent, got {v}"
    else:
        assert v.is_finite, f"{label}: expected finite, got {v}"
        assert abs(v.value - truth) <= max(3.0 * v.abs_error, 1e-13), \
            f"{label}: |{v.value} - {truth}| exceeds 3*{v.abs_error}"


@pytest.mark.parametrize("label,f,truth",
                         SERIES_CASES, ids=[c[0] for c in SERIES_CASES])
def test_series_battery(label, f, truth):
    v = sum_series(f, 0, DEFAULT_CONFIG)
    if truth is None:
        assert v.is_divergent, f"{label}: expected divergent, got {v}"
    else:
        assert v.is_finite, f"{label}: expected finite, got {v}"
        assert abs(v.value - truth) <= max(3.0 * v.abs_error, 1e-13), \
            f"{label}: |{v.value} - {truth}| exceeds 3*{v.abs_error}"


def test_empty_interval_rejected():
    with pytest.raises(BadParameter):
        integrate(lambda x: 1.0, (1.0, 1.0))


def test_verdict_shape():
    v = integrate(lambda x: math.exp(-x), (0.0, INF))
    assert v.status == "finite" and v.abs_error >= 0.0
    d = v.to_dict()
    assert d["status"] == "finite" and isinstance(d["value"], float)


# ---------------------------------------------------------------------------
# limit extrapolation


def test_limit_extrapolate_geometric():
    seq = [(2.0 ** -k, 1.0 - 2.0 ** -k) for k in range(12)]
    lv = limit_extrapolate(seq)
    assert lv.is_limit and abs(lv.value - 1.0) < 1e-3


def test_limit_extrapolate_divergent_drift():
    seq = [(2.0 ** k, math.log(k + 1.0)) for k in range(1, 14)]
    lv = limit_extrapolate(seq)
    assert lv.diverges or not lv.is_limit


def test_limit_extrapolate_requires_enough_samples():
    with pytest.raises(TooFewSamples):
        limit_extrapolate([(1.0, 1.0)] * 4)


# ---------------------------------------------------------------------------
# root finding


def test_root_find_monotone_cubic():
    r = root_find_monotone(lambda x: x ** 3 - 2.0, (0.0, 2.0))
    assert abs(r - 2.0 ** (1.0 / 3.0)) < 1e-12


def test_root_find_rejects_unbracketed():
    with pytest.raises(BadBracket):
        root_find_monotone(lambda x: x + 10.0, (0.0, 1.0))


# ---------------------------------------------------------------------------
# properties


@given(scale=st.floats(0.05, 20.0), shift=st.floats(-5.0, 5.0))
@settings(max_examples=25, deadline=None)
def test_exponential_family_of_integrals(scale, shift):
    """integral of scale * e^{-(x-shift)} over (shift, inf) is exactly scale."""
    v = integrate(lambda x: scale * math.exp(-(x - shift)), (shift, INF))
    assert v.is_finite
    assert abs(v.value - scale) <= max(3.0 * v.abs_error, 1e-10 * scale)


@given(p=st.floats(1.2, 4.0))
@settings(max_examples=20, deadline=None)
def test_power_tail_converges_iff_p_gt_one(p):
    v = integrate(lambda x: x ** -p, (1.0, INF))
    assert v.is_finite
    assert abs(v.value - 1.0 / (p - 1.0)) <= max(3.0 * v.abs_error, 1e-9)


@given(p=st.floats(0.1, 0.95))
@settings(max_examples=15, deadline=None)
def test_power_tail_diverges_for_p_below_one(p):
    v = integrate(lambda x: x ** -p, (1.0, INF))
    assert v.is_divergent
