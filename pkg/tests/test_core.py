"""Distribution functions of the beta Weibull family."""

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy import integrate, special, stats

import oracles
from betaweibull import core
from betaweibull.core import BwParams, SpecialCase
from betaweibull.errors import DomainError

MLE = BwParams(0.0785, 0.0659, 7.9355, 0.004987)


def _quad_cdf(p, x):
    return oracles.cdf(p, x)


def _random_params(rng, n):
    out = []
    for _ in range(n):
        a, b, c = np.exp(rng.uniform(np.log(0.05), np.log(10), 3))
        lam = math.exp(rng.uniform(np.log(0.001), np.log(10)))
        out.append(BwParams(a, b, c, lam))
    return out


def test_params_validation():
    with pytest.raises(DomainError, match="a must be positive"):
        BwParams(0, 1, 1, 1)
    with pytest.raises(DomainError, match="lam"):
        BwParams(1, 1, 1, math.inf)
    p = BwParams(1, 2, 3, 4)
    assert p.as_tuple() == (1.0, 2.0, 3.0, 4.0)
    assert BwParams.from_sequence(p.as_array()) == p
    assert p.replace(b=5).b == 5.0


@pytest.mark.parametrize(
    ("p", "case"),
    [
        (BwParams(1, 1, 2, 1), SpecialCase.STANDARD_WEIBULL),
        (BwParams(2, 1, 2, 1), SpecialCase.EXPONENTIATED_WEIBULL),
        (BwParams(2, 3, 1, 1), SpecialCase.BETA_EXPONENTIAL),
        (BwParams(1, 3, 2, 1), SpecialCase.WEIBULL),
        (BwParams(1, 1, 1, 5), SpecialCase.EXPONENTIAL),
        (BwParams(2, 3, 2, 1), SpecialCase.BETA_WEIBULL),
        # exact matching, no tolerance
        (BwParams(1 + 1e-15, 1, 2, 1), SpecialCase.EXPONENTIATED_WEIBULL),
    ],
)
def test_classify(p, case):
    assert core.classify(p) is case


@pytest.mark.parametrize(
    ("p", "x", "expected"),
    [
        (BwParams(1, 1, 1, 1), 1.0, math.exp(-1)),
        (BwParams(0.5, 0.5, 1, 1), math.log(2), 1 / math.pi),
    ],
)
def test_pdf_examples(p, x, expected):
    assert core.pdf(p, x) == pytest.approx(expected, rel=1e-14)


def test_pdf_normalized_at_mle():
    f = lambda t: math.exp(float(core.logpdf(MLE, math.exp(t))) + t)
    v, _ = integrate.quad(f, -30, math.log(1e4), points=[math.log(1 / MLE.lam)], epsabs=0, epsrel=1e-12, limit=500)
    assert v == pytest.approx(1.0, abs=1e-8)


def test_normalization_random():
    rng = np.random.default_rng(11)
    for p in _random_params(rng, 50):
        # bulk of log X spans u = c (t + log lam) in [-60/a, log(750/b)]
        t_lo = -60.0 / p.a / p.c - math.log(p.lam)
        t_hi = math.log(750.0 / p.b) / p.c - math.log(p.lam)
        pts = np.linspace(t_lo, t_hi, 60)
        v = sum(integrate.quad(lambda t: math.exp(float(core.logpdf_logx(p, t))), lo, hi,
                               epsabs=1e-15, epsrel=1e-12, limit=200)[0]
                for lo, hi in zip(pts, pts[1:]))
        assert v == pytest.approx(1.0, abs=1e-8), p


def test_logpdf_logx_matches_pdf():
    p = BwParams(2.5, 1.7, 1.3, 0.8)
    for t in np.linspace(-3, 2, 11):
        assert core.logpdf_logx(p, t) == pytest.approx(float(core.logpdf(p, math.exp(t))) + t, rel=1e-13)


def test_cdf_examples():
    assert core.cdf(BwParams(2, 3, 1.5, 1), 0.0) == 0.0
    assert core.cdf(BwParams(0.5, 0.5, 2, 1), math.sqrt(math.log(2))) == pytest.approx(0.5, abs=1e-15)
    p = BwParams(2.5, 1.7, 1.3, 0.8)
    assert core.cdf(p, 1.1) == pytest.approx(_quad_cdf(p, 1.1), abs=1e-9)


def test_cdf_matches_quadrature_at_quantiles():
    rng = np.random.default_rng(5)
    for p in _random_params(rng, 8) + [MLE]:
        for q in np.linspace(0.05, 0.95, 10):
            x = core.quantile(p, q)
            assert core.cdf(p, x) == pytest.approx(_quad_cdf(p, x), abs=1e-8)


def test_vectorized_shapes():
    p = BwParams(2, 3, 1.5, 1)
    xs = np.linspace(0.1, 3, 7)
    assert core.pdf(p, xs).shape == (7,)
    assert np.allclose(core.cdf(p, xs), [core.cdf(p, float(x)) for x in xs], rtol=0, atol=0)
    assert isinstance(core.cdf(p, 1.0), float)


def test_cdf_survival_complement():
    rng = np.random.default_rng(3)
    for p in _random_params(rng, 20):
        xs = core.quantile(p, np.array([0.01, 0.3, 0.7, 0.99]))
        assert np.allclose(core.cdf(p, xs) + core.survival(p, xs), 1.0, atol=1e-14)


def test_survival_far_tail():
    # 1 - cdf would be 0 here
    p = BwParams(2, 3, 1, 1)
    x = 40.0
    exact = special.betainc(3, 2, math.exp(-x))
    assert core.survival(p, x) == pytest.approx(exact, rel=1e-12)
    assert core.cdf(p, x) == 1.0


def test_scale_equivariance():
    rng = np.random.default_rng(8)
    for p in _random_params(rng, 20):
        x = float(core.quantile(p, 0.4))
        q = core.cdf(p.replace(lam=1.0), p.lam * x)
        assert core.cdf(p, x) == pytest.approx(q, rel=1e-13, abs=1e-300)


@pytest.mark.parametrize(
    "form",
    ["binomial_int_a", "complement_int_a"],
)
@pytest.mark.parametrize("a", [1, 2, 3, 5])
def test_integer_a_forms(form, a):
    f = getattr(core, "cdf_" + form)
    for b, c, lam in [(0.5, 1.3, 0.7), (2.0, 2.0, 1.0), (3.7, 0.6, 2.0)]:
        p = BwParams(a, b, c, lam)
        for q in (0.05, 0.5, 0.95):
            x = float(core.quantile(p, q))
            assert f(p, x) == pytest.approx(core.cdf(p, x), abs=1e-9)
        assert f(p, 0.0) == 0.0


def test_eq_examples_integer_a():
    p = BwParams(3, 2, 1, 1)
    assert core.cdf_binomial_int_a(p, 1.0) == pytest.approx(special.betainc(3, 2, 1 - math.exp(-1)), abs=1e-12)
    p = BwParams(1, 2.5, 1.5, 0.5)
    x = 1.7
    assert core.cdf_binomial_int_a(p, x) == pytest.approx(-math.expm1(-2.5 * (0.5 * x) ** 1.5), abs=1e-15)


@pytest.mark.parametrize(("a", "b"), [(1, 1), (2, 3), (4, 1), (3, 6), (7, 2)])
def test_integer_ab_form(a, b):
    p = BwParams(a, b, 1.4, 0.9)
    for q in (0.01, 0.3, 0.8, 0.99):
        x = float(core.quantile(p, q))
        assert core.cdf_binomial_sum(p, x) == pytest.approx(core.cdf(p, x), abs=1e-9)


@pytest.mark.parametrize("b", [1, 2, 4, 9])
@pytest.mark.parametrize("a", [0.3, 1.5, 2.0, 6.4])
def test_integer_b_form(a, b):
    p = BwParams(a, b, 2.2, 1.3)
    for q in (0.01, 0.5, 0.99):
        x = float(core.quantile(p, q))
        assert core.cdf_int_b(p, x) == pytest.approx(core.cdf(p, x), abs=1e-9)


def test_half_half_form():
    for c, lam in [(2, 1), (0.7, 3), (5, 0.01)]:
        p = BwParams(0.5, 0.5, c, lam)
        for q in np.linspace(0.001, 0.999, 21):
            x = float(core.quantile(p, q))
            assert core.cdf_half_half(p, x) == pytest.approx(q, abs=1e-9)
    assert core.cdf_half_half(BwParams(0.5, 0.5, 2, 1), math.sqrt(math.log(2))) == pytest.approx(0.5, abs=1e-15)


@pytest.mark.parametrize(("a", "b", "c"), [(1.5, 2, 3), (0.5, 0.5, 2), (0.0785, 0.0659, 7.9355), (4.3, 0.2, 1)])
def test_series_form(a, b, c):
    p = BwParams(a, b, c, 1.0)
    assert core.cdf_series_real_a(p, 0.0).value == 0.0
    for q in (0.001, 0.2, 0.5, 0.9, 0.999):
        x = float(core.quantile(p, q))
        r = core.cdf_series_real_a(p, x)
        assert r.converged
        assert r.value == pytest.approx(core.cdf(p, x), abs=1e-9)


def test_series_form_example():
    r = core.cdf_series_real_a(BwParams(0.5, 0.5, 2, 1), math.sqrt(math.log(2)))
    assert r.value == pytest.approx(0.5, abs=1e-12)
    p = BwParams(1.5, 2, 3, 1)
    assert core.cdf_series_real_a(p, 0.9).value == pytest.approx(special.betainc(1.5, 2, 1 - math.exp(-0.729)), abs=1e-9)


def test_form_preconditions():
    with pytest.raises(DomainError, match="non-integer a"):
        core.cdf_series_real_a(BwParams(2, 1, 1, 1), 1.0)
    with pytest.raises(DomainError, match="integer"):
        core.cdf_binomial_int_a(BwParams(2.5, 1, 1, 1), 1.0)
    with pytest.raises(DomainError, match="integer"):
        core.cdf_int_b(BwParams(2, 1.5, 1, 1), 1.0)
    with pytest.raises(DomainError, match="a = b = 1/2"):
        core.cdf_half_half(BwParams(0.5, 1, 1, 1), 1.0)
    with pytest.raises(DomainError):
        core.cdf_binomial_int_a(BwParams(2, 1, 1, 1), -1.0)


def _ew_pdf(a, c, lam, x):
    z = (lam * x) ** c
    return a * c * lam ** c * x ** (c - 1) * math.exp(-z) * (-math.expm1(-z)) ** (a - 1)


def _weibull_pdf(c, lam, x):
    z = (lam * x) ** c
    return c * lam ** c * x ** (c - 1) * math.exp(-z)


def _be_pdf(a, b, lam, x):
    return lam * math.exp(-b * lam * x) * (-math.expm1(-lam * x)) ** (a - 1) / special.beta(a, b)


def test_special_case_reductions():
    rng = np.random.default_rng(2024)
    for _ in range(100):
        a, b, c = np.exp(rng.uniform(np.log(0.2), np.log(5), 3))
        lam = math.exp(rng.uniform(-2, 2))
        x = math.exp(rng.uniform(-1.5, 1.5)) / lam
        z = (lam * x) ** c
        # b = 1
        p = BwParams(a, 1, c, lam)
        assert core.pdf(p, x) == pytest.approx(_ew_pdf(a, c, lam, x), rel=1e-12)
        assert core.cdf(p, x) == pytest.approx((-math.expm1(-z)) ** a, rel=1e-12)
        # a = 1 with rescaled rate
        p = BwParams(1, b, c, lam)
        lr = lam * b ** (1 / c)
        assert core.pdf(p, x) == pytest.approx(_weibull_pdf(c, lr, x), rel=1e-12)
        assert core.cdf(p, x) == pytest.approx(-math.expm1(-((lr * x) ** c)), rel=1e-12)
        assert core.pdf(p, x) == pytest.approx(core.pdf(BwParams(1, 1, c, lr), x), rel=1e-12)
        # c = 1
        p = BwParams(a, b, 1, lam)
        assert core.pdf(p, x) == pytest.approx(_be_pdf(a, b, lam, x), rel=1e-12)
        assert core.cdf(p, x) == pytest.approx(special.betainc(a, b, -math.expm1(-lam * x)), rel=1e-12)
        # a = b = 1
        p = BwParams(1, 1, c, lam)
        assert core.pdf(p, x) == pytest.approx(_weibull_pdf(c, lam, x), rel=1e-12)


@pytest.mark.parametrize("x", [0.1, 1.0, 7.5])
def test_hazard_examples(x):
    assert core.hazard(BwParams(1, 1, 1, 2), x) == pytest.approx(2.0, rel=1e-13)
    assert core.hazard(BwParams(1, 1, 3, 1), x) == pytest.approx(3 * x * x, rel=1e-12)


def test_hazard_derived():
    p = BwParams(2, 3, 3, 1)
    x = 0.8
    survival, _ = integrate.quad(lambda t: float(core.pdf(p, t)), x, np.inf, epsabs=0, epsrel=1e-12)
    assert core.hazard(p, x) == pytest.approx(float(core.pdf(p, x)) / survival, rel=1e-9)


def test_hazard_times_survival():
    rng = np.random.default_rng(9)
    for p in _random_params(rng, 20):
        xs = core.quantile(p, np.linspace(0.01, 0.99, 9))
        s = core.survival(p, xs)
        keep = s > 1e-10
        assert np.allclose(core.hazard(p, xs)[keep] * s[keep], core.pdf(p, xs)[keep], rtol=1e-10, atol=0)


def test_hazard_overflow():
    with pytest.raises(OverflowError, match="1e-300"):
        core.hazard(BwParams(1, 1, 1, 1), 800.0)


@pytest.mark.parametrize(
    "call",
    [
        lambda: core.pdf(MLE, 0.0),
        lambda: core.pdf(MLE, -1.0),
        lambda: core.cdf(MLE, -0.5),
        lambda: core.cdf(MLE, float("nan")),
        lambda: core.hazard(MLE, 0.0),
        lambda: core.quantile(MLE, 0.0),
        lambda: core.quantile(MLE, 1.0),
        lambda: core.sample(MLE, 1, -1),
        lambda: core.beta_to_bw(MLE, [1.0]),
    ],
)
def test_domain_errors(call):
    with pytest.raises(DomainError):
        call()


def test_quantile_examples():
    assert core.quantile(BwParams(0.5, 0.5, 1, 1), 0.5) == pytest.approx(math.log(2), rel=1e-14)
    assert core.quantile(BwParams(1, 1, 1, 1), -math.expm1(-1)) == pytest.approx(1.0, rel=1e-14)


@pytest.mark.parametrize("p", [BwParams(2, 3, 1.5, 1), MLE, BwParams(0.3, 7, 0.5, 20)])
def test_quantile_round_trip(p):
    qs = np.linspace(0.01, 0.99, 99)
    xs = core.quantile(p, qs)
    assert np.all(np.diff(xs) > 0)
    assert np.allclose(core.cdf(p, xs), qs, rtol=0, atol=1e-9)


@settings(max_examples=60, deadline=None)
@given(
    st.floats(0.05, 10), st.floats(0.05, 10), st.floats(0.1, 10), st.floats(0.01, 10), st.floats(1e-6, 1 - 1e-6)
)
def test_quantile_round_trip_property(a, b, c, lam, q):
    p = BwParams(a, b, c, lam)
    x = core.quantile(p, q)
    assume(x > 1e-300)
    # near q = 1 compare the survival side
    if q < 0.5:
        assert core.cdf(p, x) == pytest.approx(q, rel=1e-9)
    else:
        assert core.survival(p, x) == pytest.approx(1 - q, rel=1e-8)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 10), st.floats(0.05, 10), st.floats(0.1, 10), st.floats(0.01, 10))
def test_cdf_monotone_property(a, b, c, lam):
    p = BwParams(a, b, c, lam)
    xs = core.quantile(p, np.linspace(0.001, 0.999, 50))
    xs = np.concatenate([[0], xs, 10 * xs[-1:]])
    assert np.all(np.diff(core.cdf(p, xs)) >= 0)


def test_beta_transform_examples():
    assert core.beta_to_bw(BwParams(2, 2, 1, 2), -math.expm1(-1)) == pytest.approx(0.5, rel=1e-15)
    assert core.beta_to_bw(BwParams(2, 2, 3, 1), -math.expm1(-8)) == pytest.approx(2.0, rel=1e-14)


def test_sample_deterministic():
    p = BwParams(2, 3, 1.5, 1)
    assert np.array_equal(core.sample(p, 42, 100), core.sample(p, 42, 100))
    assert core.sample(p, 1, 0).shape == (0,)
    assert np.all(core.sample(MLE, np.random.default_rng(0), 1000) > 0)


@pytest.mark.parametrize("p", [BwParams(2, 3, 1.5, 1), MLE, BwParams(0.5, 4, 0.8, 3)])
def test_sample_ks(p):
    n = 20000
    x = core.sample(p, 123, n)
    d = stats.kstest(x, lambda t: core.cdf(p, t)).statistic
    assert d * math.sqrt(n) < 1.63


def test_sample_matches_beta_transform_in_distribution():
    # same law through scipy beta draws and the explicit transform
    p = BwParams(1.7, 0.6, 2.0, 0.5)
    rng = np.random.default_rng(4)
    ours = core.sample(p, rng, 20000)
    theirs = core.beta_to_bw(p, np.clip(rng.beta(p.a, p.b, 20000), 1e-300, 1 - 1e-16))
    assert stats.ks_2samp(ours, theirs).pvalue > 0.001
