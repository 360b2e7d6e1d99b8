"""The beta Weibull distribution.

With ``z = (lam*x)**c`` the distribution function is the regularized
incomplete beta ratio ``I_{1-exp(-z)}(a, b)`` and the density is

    c lam^c x^(c-1) exp(-b z) (1 - exp(-z))^(a-1) / B(a, b).

Every density evaluation goes through the log density. The survival
function uses the complement ``I_{exp(-z)}(b, a)`` directly, so the far
right tail keeps its relative accuracy.
"""

import enum
import math
import numbers
from dataclasses import dataclass

import numpy as np

from ._backend import kernels as _k
from ._emtail import em_tail
from .errors import DomainError
from .quad import SeriesResult, sum_alternating_series
from .specfun import _inc_beta_inv_log

__all__ = [
    "BwParams",
    "SpecialCase",
    "classify",
    "logpdf",
    "logpdf_logx",
    "pdf",
    "cdf",
    "survival",
    "hazard",
    "quantile",
    "sample",
    "beta_to_bw",
    "cdf_series_real_a",
    "cdf_binomial_int_a",
    "cdf_binomial_sum",
    "cdf_complement_int_a",
    "cdf_int_b",
    "cdf_half_half",
]

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class BwParams:
    """Parameters of the beta Weibull distribution.

    Parameters
    ----------
    a, b : float
        Shapes of the generating beta distribution.
    c : float
        Weibull shape.
    lam : float
        Weibull rate (inverse time units).
    """

    a: float
    b: float
    c: float
    lam: float

    def __post_init__(self):
        for name in ("a", "b", "c", "lam"):
            v = getattr(self, name)
            if not (isinstance(v, numbers.Real) and math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be positive and finite, got {v!r}")
            object.__setattr__(self, name, float(v))

    def as_tuple(self):
        return (self.a, self.b, self.c, self.lam)

    def as_array(self):
        return np.array(self.as_tuple())

    @classmethod
    def from_sequence(cls, values):
        a, b, c, lam = (float(v) for v in values)
        return cls(a, b, c, lam)

    def replace(self, **kw):
        d = dict(a=self.a, b=self.b, c=self.c, lam=self.lam)
        d.update(kw)
        return BwParams(**d)


class SpecialCase(enum.Enum):
    """Named members of the beta Weibull family."""

    BETA_WEIBULL = "bw"
    EXPONENTIATED_WEIBULL = "exp-weibull"  # b = 1
    WEIBULL = "weibull-rescaled"  # a = 1, rate lam * b**(1/c)
    BETA_EXPONENTIAL = "beta-exp"  # c = 1
    STANDARD_WEIBULL = "weibull"  # a = b = 1
    EXPONENTIAL = "exp"  # a = b = c = 1


def classify(p):
    """Return the most specific :class:`SpecialCase` containing ``p``.

    Matching is exact. When two one-parameter restrictions hold at once,
    ``a = 1`` wins over ``b = 1`` and ``b = 1`` wins over ``c = 1``.

    Examples
    --------
    >>> classify(BwParams(2, 1, 2, 1))
    <SpecialCase.EXPONENTIATED_WEIBULL: 'exp-weibull'>
    """
    a1, b1, c1 = p.a == 1.0, p.b == 1.0, p.c == 1.0
    if a1 and b1:
        return SpecialCase.EXPONENTIAL if c1 else SpecialCase.STANDARD_WEIBULL
    if a1:
        return SpecialCase.WEIBULL
    if b1:
        return SpecialCase.EXPONENTIATED_WEIBULL
    if c1:
        return SpecialCase.BETA_EXPONENTIAL
    return SpecialCase.BETA_WEIBULL


def _is_int(v):
    return v == round(v)


def _as_x(x, allow_zero):
    arr = np.asarray(x, dtype=float)
    bad = ~np.isfinite(arr) | ((arr < 0) if allow_zero else (arr <= 0))
    if np.any(bad):
        what = "non-negative" if allow_zero else "positive"
        raise DomainError(f"x must be {what} and finite")
    return arr


def _out(arr, like):
    return float(arr) if np.ndim(like) == 0 else arr


def _log1mexp(z, lz):
    """log(1 - exp(-z)) for z > 0, given also lz = log z."""
    z = np.asarray(z, dtype=float)
    lz = np.asarray(lz, dtype=float)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        small = z < 1e-8
        mid = z < _LN2
        r = np.where(mid, np.log(-np.expm1(-np.where(mid, z, 1.0))),
                     np.log1p(-np.exp(-z)))
        r = np.where(small, lz - 0.5 * z, r)
    return r


def _logpdf_lz(p, lz):
    # log density of log(X) written through lz = c*log(lam*x)
    with np.errstate(over="ignore"):
        z = np.exp(lz)
    lnb = _k.ln_beta(p.a, p.b)
    with np.errstate(invalid="ignore"):
        v = math.log(p.c) + lz - p.b * z - lnb
        if p.a != 1.0:
            v = v + (p.a - 1.0) * _log1mexp(z, lz)
    return np.where(np.isinf(z), -np.inf, v)


def logpdf_logx(p, t):
    """Log density of ``log X`` at ``t``.

    The density of ``log X`` is bounded even where the density of ``X``
    is not, and it stays representable when most of the mass sits below
    the smallest positive double, as happens for very small ``a*c``.
    """
    t = np.asarray(t, dtype=float)
    if np.any(np.isnan(t)):
        raise DomainError("t must not be NaN")
    lz = p.c * (math.log(p.lam) + t)
    return _out(_logpdf_lz(p, lz), t)


def logpdf(p, x):
    """Log density at ``x > 0``."""
    xa = _as_x(x, allow_zero=False)
    lx = np.log(xa)
    lz = p.c * (math.log(p.lam) + lx)
    return _out(_logpdf_lz(p, lz) - lx, x)


def pdf(p, x):
    """Density at ``x > 0``.

    Examples
    --------
    >>> round(pdf(BwParams(1, 1, 1, 1), 1.0), 7)
    0.3678794
    """
    return _out(np.exp(logpdf(p, x)), x)


def _z_parts(p, x):
    # y = 1 - exp(-z) and 1 - y, each to full relative precision
    z = (p.lam * x) ** p.c
    return -math.expm1(-z), math.exp(-z), z


def _tiny_z_cdf(p, v):
    # z = (lam v)^c below 1e-304: I_y(a, b) = y^a/(a B) (1 + O(y)), y ~ z
    lz = p.c * (math.log(p.lam) + math.log(v))
    if lz >= -700.0:
        return None
    return math.exp(p.a * lz - math.log(p.a) - _k.ln_beta(p.a, p.b))


def cdf(p, x):
    """Distribution function ``I_{1-exp(-(lam x)^c)}(a, b)`` for ``x >= 0``.

    Where ``(lam x)^c`` underflows the leading term of the small-``y``
    expansion is used, evaluated from ``log z``.
    """
    xa = _as_x(x, allow_zero=True)
    flat = []
    for v in xa.ravel():
        if v == 0:
            flat.append(0.0)
            continue
        tiny = _tiny_z_cdf(p, v)
        flat.append(tiny if tiny is not None
                    else _k.inc_beta(*_z_parts(p, v)[:2], p.a, p.b))
    return _out(np.array(flat).reshape(xa.shape), x)


def survival(p, x):
    """Survival function, evaluated as ``I_{exp(-(lam x)^c)}(b, a)``."""
    xa = _as_x(x, allow_zero=True)
    out = []
    for v in xa.ravel():
        if v == 0:
            out.append(1.0)
            continue
        tiny = _tiny_z_cdf(p, v)
        if tiny is not None:
            out.append(1.0 - tiny)
            continue
        y, ym, _ = _z_parts(p, v)
        out.append(_k.inc_beta(ym, y, p.b, p.a))
    return _out(np.array(out).reshape(xa.shape), x)


def hazard(p, x):
    """Hazard rate ``pdf / survival``.

    Raises
    ------
    OverflowError
        Where the survival function drops below 1e-300.
    """
    xa = _as_x(x, allow_zero=False)
    s = np.atleast_1d(survival(p, xa))
    if np.any(s < 1e-300):
        raise OverflowError("survival below 1e-300; hazard not representable")
    h = np.exp(np.atleast_1d(logpdf(p, xa)) - np.log(s))
    return _out(h.reshape(xa.shape), x)


def _z_to_x(p, z, lz=None):
    if lz is None:
        lz = np.log(z)
    return np.exp(lz / p.c) / p.lam


def quantile(p, q):
    """Inverse of :func:`cdf` for ``0 < q < 1``.

    The inversion runs in ``log y``, so lower quantiles stay accurate
    while ``(lam x)^c`` underflows; a quantile below the smallest
    positive double is returned as 0.

    Examples
    --------
    >>> round(quantile(BwParams(0.5, 0.5, 1, 1), 0.5), 12) == round(math.log(2), 12)
    True
    """
    qa = np.asarray(q, dtype=float)
    if np.any(~((qa > 0) & (qa < 1))):
        raise DomainError("q must lie strictly inside (0, 1)")
    out = []
    for v in qa.ravel():
        t, lower = _inc_beta_inv_log(float(v), p.a, p.b)
        if not lower:
            z = -t
            lz = math.log(z)
        elif t < -36.0:
            # z = -log(1 - y) = y + y^2/2 + ...
            z = math.exp(t)
            lz = t + 0.5 * z
        else:
            z = -math.log1p(-math.exp(t))
            lz = math.log(z)
        out.append(float(_z_to_x(p, z, lz)))
    return _out(np.array(out).reshape(qa.shape), q)


def beta_to_bw(p, bvals):
    """Map Beta(a, b) variates ``B`` to ``(-log(1-B))**(1/c) / lam``."""
    bv = np.asarray(bvals, dtype=float)
    if np.any(~((bv > 0) & (bv < 1))):
        raise DomainError("beta variates must lie in (0, 1)")
    return _out(_z_to_x(p, -np.log1p(-bv)), bvals)


def sample(p, rng, n):
    """Draw ``n`` variates by transforming beta variates.

    Parameters
    ----------
    p : BwParams
    rng : numpy.random.Generator or int
        Random source, or a seed for ``numpy.random.default_rng``.
    n : int

    Notes
    -----
    The beta variate is formed from two gamma variates. Each gamma draw
    uses ``G(s) = G(s+1) U^(1/s)`` in logs, so shapes far below one do
    not underflow. ``-log(1-B)`` is then ``log1p(G_a/G_b)``, accurate even
    where ``B`` itself would round to 0 or 1.
    """
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    n = int(n)
    if n < 0:
        raise DomainError("n must be non-negative")
    if n == 0:
        return np.empty(0)

    def log_gamma_variate(s):
        g = rng.standard_gamma(s + 1.0, size=n)
        u = rng.random(size=n)
        return np.log(g) + np.log1p(-u) / s

    d = log_gamma_variate(p.a) - log_gamma_variate(p.b)
    # z = log1p(exp(d)); log z ~ d once exp(d) is negligible
    z = np.logaddexp(0.0, d)
    with np.errstate(divide="ignore"):
        lz = np.where(d < -30.0, d - 0.5 * np.exp(d), np.log(z))
    return _z_to_x(p, z, lz)


# alternative cdf representations


def _zs(p, x):
    if not (isinstance(x, numbers.Real) and math.isfinite(x) and x >= 0):
        raise DomainError(f"x must be non-negative and finite, got {x!r}")
    return (p.lam * x) ** p.c


_SERIES_EM_Z = 0.5


def cdf_series_real_a(p, x, tol=1e-12):
    """Series for the cdf at non-integer ``a``.

    The expansion of ``(1-w)^(a-1)`` integrated termwise gives a sum with
    coefficients ``c_j = prod_{k<=j} (k-a)/k``. Since ``sum_j c_j/(b+j)``
    equals ``B(a, b)`` the cdf may be written

        F = 1 - sum_j c_j exp(-(b+j) z) / ((b+j) B(a, b)),

    whose terms decay geometrically for ``z > 0``; the termwise form
    decays only like ``j^-(a+1)``. The ratio ``exp(-z)`` is close to one
    for small ``z``, so below ``z = 0.5`` a fixed block of terms is summed
    and the remainder is estimated by Euler-Maclaurin.
    """
    if _is_int(p.a):
        raise DomainError("series form needs non-integer a; use the binomial forms")
    z = _zs(p, x)
    if x == 0:
        return SeriesResult(0.0, 0, 0.0, True)
    lnb = _k.ln_beta(p.a, p.b)
    a, b = p.a, p.b

    if z < _SERIES_EM_Z:
        # log z keeps the cutoff where z itself underflows
        lz = p.c * (math.log(p.lam) + math.log(x))
        return _cdf_series_em(a, b, lz, lnb, tol)

    # c_j by recurrence, generated alongside the terms
    state = {"j": -1, "c": 1.0}

    def term(j):
        if j != state["j"] + 1:
            raise RuntimeError("terms must be requested in order")
        if j:
            state["c"] *= (j - a) / j
        state["j"] = j
        return state["c"] * math.exp(-(b + j) * z - lnb) / (b + j)

    # geometric tail: remainder ~ last term / (1 - exp(-z))
    res = sum_alternating_series(term, tol=tol * -math.expm1(-z),
                                 min_terms=math.ceil(a) + 2)
    return SeriesResult(1.0 - res.value, res.terms_used,
                        res.last_term_magnitude, res.converged)


def _cdf_series_em(a, b, lz, lnb, tol):
    # small z: the ratio exp(-z) is near one, so sum a fixed block and
    # add the one-signed remainder by Euler-Maclaurin. The remainder
    # decays only like j^-(a+1); 256 terms put the last correction
    # below 1e-12 for every a.
    z = math.exp(lz)
    n = max(math.ceil(a) + 2, 256) + math.ceil(2.0 * b)
    acc = 0.0
    c = 1.0
    for j in range(n):
        if j:
            c *= (j - a) / j
        acc += c * math.exp(-(b + j) * z) / (b + j)

    def log_phi_xs(lx):
        # x exp(-(b+x) z) / (b+x), with (b+x) z formed in logs
        bxz = math.exp(min(lx + math.log1p(b * math.exp(-lx)) + lz, 709.0))
        return -bxz - math.log1p(b * math.exp(-lx))

    def dlog_phi(x):
        return -z - 1.0 / (b + x), 1.0 / (b + x) ** 2, -2.0 / (b + x) ** 3

    tail, corr = em_tail(a, n, c, a + 1.0, log_phi_xs, dlog_phi, log_x_break=-lz)
    total = acc + tail
    rel = corr / abs(total)
    return SeriesResult(1.0 - total * math.exp(-lnb), n, rel, rel <= tol)


def _need_int(name, v):
    if not _is_int(v):
        raise DomainError(f"{name} must be an integer for this form, got {v!r}")
    return int(round(v))


def cdf_binomial_int_a(p, x):
    """Finite binomial form for integer ``a``."""
    ia = _need_int("a", p.a)
    z = _zs(p, x)
    b = p.b
    acc = math.fsum(math.comb(ia - 1, j) * (-1) ** j * -math.expm1(-(b + j) * z) / (b + j)
                    for j in range(ia))
    return acc / math.exp(_k.ln_beta(p.a, b))


def cdf_binomial_sum(p, x):
    """Binomial-sum form for integer ``a`` and ``b``, with ``n = a + b - 1``."""
    ia = _need_int("a", p.a)
    ib = _need_int("b", p.b)
    n = ia + ib - 1
    z = _zs(p, x)
    y = -math.expm1(-z)
    return math.fsum(math.comb(n, j) * y ** j * math.exp(-(n - j) * z)
                     for j in range(ia, n + 1))


def cdf_complement_int_a(p, x):
    """Complement form ``1 - exp(-bz)/G(b) sum_{j<a} G(b+j) y^j / j!``."""
    ia = _need_int("a", p.a)
    z = _zs(p, x)
    y = -math.expm1(-z)
    b = p.b
    lgb = math.lgamma(b)
    s = math.fsum(math.exp(math.lgamma(b + j) - lgb - math.lgamma(j + 1.0)) * y ** j
                  for j in range(ia))
    return 1.0 - math.exp(-b * z) * s


def cdf_int_b(p, x):
    """Form for integer ``b``: ``y^a/G(a) sum_{j<b} G(a+j) exp(-jz) / j!``."""
    ib = _need_int("b", p.b)
    z = _zs(p, x)
    if z == 0:
        return 0.0
    a = p.a
    ly = math.log(-math.expm1(-z))
    lga = math.lgamma(a)
    return math.fsum(math.exp(a * ly + math.lgamma(a + j) - lga - math.lgamma(j + 1.0) - j * z)
                     for j in range(ib))


def cdf_half_half(p, x):
    """Arctangent form for ``a = b = 1/2``."""
    if not (p.a == 0.5 and p.b == 0.5):
        raise DomainError("arctangent form needs a = b = 1/2")
    z = _zs(p, x)
    if z < 1.0:
        return 2.0 / math.pi * math.atan(math.sqrt(math.expm1(z)))
    # arctan(s) = pi/2 - arctan(1/s), with 1/s = 1/sqrt(e^z - 1) kept finite
    inv = math.exp(-0.5 * z) / math.sqrt(-math.expm1(-z))
    return 1.0 - 2.0 / math.pi * math.atan(inv)
