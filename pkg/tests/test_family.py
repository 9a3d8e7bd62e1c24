"""Differential structure of the tilted families.

The numeric paths are checked against finite differences, against the
closed forms carried by the catalog entries, and against frozen values
from independent high-precision evaluations (mpmath / scipy quadrature at
higher precision than the code under test uses).
"""

from __future__ import annotations

import math
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nmlregret.catalog import bernoulli, exp_cauchy_mixture, gamma_base, get
from nmlregret.errors import BadParameter, MeanDiverges
from nmlregret.family import ExpFamily
from nmlregret.measure import Atom, BaseMeasure

# closed-form families with a representative interior parameter window
CLOSED_FORM_CASES = [
    ("bernoulli", (-3.0, 3.0)),
    ("gaussian", (-3.0, 3.0)),
    ("gaussian_restricted", (-3.0, 3.0)),
    ("poisson", (-3.0, 2.0)),
    ("geometric", (-3.0, -0.1)),
    ("gamma2", (-3.0, 0.5)),
]


def _numeric_twin(fam: ExpFamily) -> ExpFamily:
    """The same base measure with every closed form stripped."""
    return replace(fam, logz_fn=None, mean_fn=None, var_fn=None,
                   nfold_fn=None, _cache={})


def _betas(lo, hi, k=5):
    step = (hi - lo) / (k - 1)
    return [lo + step * i for i in range(k)]


# ---------------------------------------------------------------------------
# finite differences: mean and variance are the first two log-partition
# derivatives


@pytest.mark.parametrize("name,window", CLOSED_FORM_CASES,
                         ids=[c[0] for c in CLOSED_FORM_CASES])
def test_mean_is_logz_derivative(name, window):
    fam = get(name).family
    h = 1e-5
    for b in _betas(*window):
        fd = (fam.log_partition(b + h) - fam.log_partition(b - h)) / (2 * h)
        mu = fam.mean_value(b)
        assert abs(fd - mu) <= 1e-5 * max(abs(mu), 1.0), (name, b)


@pytest.mark.parametrize("name,window", CLOSED_FORM_CASES,
                         ids=[c[0] for c in CLOSED_FORM_CASES])
def test_variance_is_second_logz_derivative(name, window):
    fam = get(name).family
    h = 1e-4
    for b in _betas(*window):
        fd = (fam.log_partition(b + h) - 2 * fam.log_partition(b)
              + fam.log_partition(b - h)) / h ** 2
        v = fam.variance(b)
        assert abs(fd - v) <= 1e-5 * max(abs(v), 1.0), (name, b)
        assert v > 0


# ---------------------------------------------------------------------------
# numeric paths agree with the closed forms


@pytest.mark.parametrize("name,window", CLOSED_FORM_CASES,
                         ids=[c[0] for c in CLOSED_FORM_CASES])
def test_numeric_matches_closed_forms(name, window):
    fam = get(name).family
    num = _numeric_twin(fam)
    for b in _betas(*window, k=3):
        assert fam.log_partition(b) == pytest.approx(
            num.log_partition(b), rel=1e-6, abs=1e-9), (name, b)
        assert fam.mean_value(b) == pytest.approx(
            num.mean_value(b), rel=1e-6, abs=1e-9), (name, b)
        assert fam.variance(b) == pytest.approx(
            num.variance(b), rel=1e-5, abs=1e-9), (name, b)


# ---------------------------------------------------------------------------
# maximum-likelihood inversion


@pytest.mark.parametrize("name,window", CLOSED_FORM_CASES,
                         ids=[c[0] for c in CLOSED_FORM_CASES])
def test_ml_round_trip(name, window):
    fam = get(name).family
    for b in _betas(*window):
        mu = fam.mean_value(b)
        pt = fam.ml_beta(mu)
        assert not pt.clamped
        assert abs(pt.beta - b) <= 1e-8 * max(abs(b), 1.0), (name, b, pt)


def test_ml_beta_monotone_in_observation():
    fam = get("gamma2").family
    xs = [0.5, 1.0, 2.0, 4.0, 8.0]
    betas = [fam.ml_beta(x).beta for x in xs]
    assert all(b1 < b2 for b1, b2 in zip(betas, betas[1:]))


# ---------------------------------------------------------------------------
# KL divergence: closed form vs quadrature


@pytest.mark.parametrize("name,window", CLOSED_FORM_CASES,
                         ids=[c[0] for c in CLOSED_FORM_CASES])
def test_kl_closed_vs_quadrature(name, window):
    fam = get(name).family
    num = _numeric_twin(fam)
    lo, hi = window
    pairs = [(lo, hi), (hi, lo), (lo / 2, hi / 2), (0.9 * lo + 0.1 * hi, hi)]
    for b0, b1 in pairs:
        assert fam.kl_divergence(b0, b1) == pytest.approx(
            num.kl_divergence(b0, b1), rel=1e-6, abs=1e-8), (name, b0, b1)


def test_kl_nonnegative_zero_iff_equal():
    fam = get("bernoulli").family
    assert fam.kl_divergence(0.3, 0.3) == pytest.approx(0.0, abs=1e-12)
    assert fam.kl_divergence(0.3, -1.0) > 0


# ---------------------------------------------------------------------------
# mean range and domain handling


def test_mean_range_matches_support_for_bernoulli():
    mr = get("bernoulli").family.mean_range()
    assert (mr.mu_inf, mr.mu_sup) == (0.0, 1.0)
    assert not mr.inf_attained and not mr.sup_attained


def test_out_of_domain_rejected():
    fam = get("geometric").family  # partition diverges for beta >= 0
    with pytest.raises(BadParameter):
        fam.mean_value(1.0)


def test_empty_domain_rejected():
    base = BaseMeasure(atoms=(Atom(0.0, 1.0),))
    with pytest.raises(BadParameter):
        ExpFamily(base=base, beta_inf=1.0, beta_sup=1.0)


# ---------------------------------------------------------------------------
# the heavy-tailed mixture: frozen independent oracles
#
# With q(x) = 1/(2 pi x (1 + log^2 x)) on (0, inf) and an atom of mass 1/2
# at 0, the tilted quantities at beta = -1 were evaluated with
# scipy.integrate.quad on the log-substituted integrand at tolerance 1e-12:
#     Z_c(-1)   = integral of q e^{-x}        = 0.204779367035386
#     E_c(-1)   = integral of x q e^{-x}      = 0.096939040178527
# giving log Z(-1) = log(0.5 + Z_c) and mean = E_c / (0.5 + Z_c).


EXP_CAUCHY_LOGZ_M1 = math.log(0.5 + 0.204779367035386)
EXP_CAUCHY_MEAN_M1 = 0.096939040178527 / (0.5 + 0.204779367035386)


def test_exp_cauchy_log_partition_oracle():
    fam = exp_cauchy_mixture().family
    assert fam.log_partition(-1.0) == pytest.approx(EXP_CAUCHY_LOGZ_M1, rel=1e-3)


def test_exp_cauchy_mean_oracle():
    fam = exp_cauchy_mixture().family
    assert fam.mean_value(-1.0) == pytest.approx(EXP_CAUCHY_MEAN_M1, rel=1e-3)


def test_exp_cauchy_partition_diverges_above_zero():
    fam = exp_cauchy_mixture().family
    assert not fam.contains(0.5)


def test_exp_cauchy_no_mean_at_zero():
    fam = exp_cauchy_mixture().family
    assert math.isfinite(fam.log_partition(0.0))
    with pytest.raises(MeanDiverges):
        fam.mean_value(0.0)


def test_exp_cauchy_mean_range_open_above():
    mr = exp_cauchy_mixture().family.mean_range()
    assert mr.mu_inf == 0.0
    assert math.isinf(mr.mu_sup) and not mr.sup_attained


def test_exp_cauchy_extreme_tilts_stay_computable():
    fam = exp_cauchy_mixture().family
    for b in (-1e6, -1e12):
        lz = fam.log_partition(b)
        assert math.isfinite(lz)
        mu = fam.mean_value(b)
        assert 0.0 < mu < 1e-4


# ---------------------------------------------------------------------------
# properties


@given(b=st.floats(-5.0, 5.0))
@settings(max_examples=30, deadline=None)
def test_bernoulli_mean_variance_identity(b):
    fam = bernoulli().family
    mu = fam.mean_value(b)
    assert 0.0 < mu < 1.0
    assert fam.variance(b) == pytest.approx(mu * (1.0 - mu), rel=1e-12)


@given(b0=st.floats(-2.0, 0.4), b1=st.floats(-2.0, 0.4))
@settings(max_examples=30, deadline=None)
def test_gamma_kl_nonnegative(b0, b1):
    fam = gamma_base(2.0).family
    assert fam.kl_divergence(b0, b1) >= -1e-12
