import math
import os
import subprocess
import sys

import numpy as np
import pytest
from scipy import special

from betaweibull import _backend


def _both():
    py = _backend.get_kernels("python")
    try:
        cc = _backend.get_kernels("compiled")
    except ImportError:
        pytest.skip("compiled kernels not built")
    return py, cc


rng = np.random.default_rng(2024)
XS = list(rng.uniform(0.01, 60, 25)) + [0.5, 1.0, 1e-8, 170.5]
AB = [tuple(v) for v in rng.uniform(0.05, 20, (25, 2))]


def test_flags():
    py, cc = _both()
    assert py.IS_COMPILED is False and cc.IS_COMPILED is True
    assert _backend.BACKEND in ("compiled", "python")


@pytest.mark.parametrize("x", XS)
def test_gamma_family(kernels, x):
    assert kernels.ln_gamma(x) == pytest.approx(special.gammaln(x), rel=1e-13, abs=1e-14)
    assert kernels.digamma(x) == pytest.approx(special.digamma(x), rel=1e-12, abs=1e-13)
    assert kernels.trigamma(x) == pytest.approx(special.polygamma(1, x), rel=1e-12)


@pytest.mark.parametrize("x", XS)
def test_gamma_agree(x):
    py, cc = _both()
    for name in ("ln_gamma", "digamma", "trigamma"):
        u, v = getattr(py, name)(x), getattr(cc, name)(x)
        assert u == pytest.approx(v, rel=1e-14, abs=1e-15)


@pytest.mark.parametrize(("a", "b"), AB)
def test_inc_beta_agree(a, b):
    py, cc = _both()
    for y in (1e-6, 0.1, 0.37, 0.5, 0.9, 1 - 1e-6):
        u, v = py.inc_beta(y, 1 - y, a, b), cc.inc_beta(y, 1 - y, a, b)
        assert u == pytest.approx(v, rel=1e-12, abs=1e-300)
        assert u == pytest.approx(special.betainc(a, b, y), rel=1e-9, abs=1e-300)


@pytest.mark.parametrize(
    ("kind", "d", "b", "a", "e"),
    [(0, 2.0, 1.0, 1.0, 0), (0, 1.3, 0.4, 0.2, 1), (0, 3.0, 2.5, 4.5, 2),
     (0, 0.7, 0.07, 0.6, 3), (0, 2.0, 5.0, -0.5, 2), (1, 1.0, 1.0, 0.5, 0),
     (1, 2.0, 3.0, 1.5, 1)],
)
def test_st_integral_agree(kind, d, b, a, e):
    py, cc = _both()
    u = py.st_integral(kind, d, b, a, e, 1e-12, 10**6)[0]
    v = cc.st_integral(kind, d, b, a, e, 1e-12, 10**6)[0]
    assert u == pytest.approx(v, rel=1e-11)


@pytest.mark.parametrize(("d", "b", "a", "n"), [(2.0, 1.0, 0.5, 300), (1.2, 0.1, 3.3, 1000), (4.0, 7.0, 2.0, 5)])
def test_s_partial_agree(d, b, a, n):
    py, cc = _both()
    u, cu = py.s_partial(d, b, a, n)
    v, cv = cc.s_partial(d, b, a, n)
    assert u == pytest.approx(v, rel=1e-14)
    assert cu == pytest.approx(cv, rel=1e-14)


def test_origin_exponent_agree():
    py, cc = _both()
    for args in [(0, 2.0, 0.5), (1, 1.0, 3.0)]:
        assert py.origin_exponent(*args) == cc.origin_exponent(*args)


def test_pure_env_selects_fallback():
    code = "from betaweibull._backend import BACKEND; print(BACKEND)"
    env = dict(os.environ, BETAWEIBULL_PURE="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "python"


def test_public_results_match_across_backends():
    code = ("from betaweibull.core import BwParams, cdf; from betaweibull.moments import moment;"
            "p = BwParams(0.0785, 0.0659, 7.9355, 0.004987);"
            "print(repr(cdf(p, 100.0)), repr(moment(p, 1.0)))")
    vals = []
    for flag in ("1", "0"):
        env = dict(os.environ, BETAWEIBULL_PURE=flag)
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
        vals.append([float(t) for t in out.stdout.split()])
    assert vals[0] == pytest.approx(vals[1], rel=1e-11)
    assert all(math.isfinite(v) for v in vals[0])
