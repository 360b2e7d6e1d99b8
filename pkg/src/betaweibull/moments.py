"""S and T integrals, moments, the moment generating function and shape
measures of the beta Weibull distribution.

The central object is

    S(d, b, a) = int_0^inf x^(d-1) exp(-b x) (1 - exp(-x))^(a-1) dx,

with ``E(X^r) = lam^-r S(r/c + 1, b, a) / B(a, b)``. ``T(d, b, a, e)`` adds
a factor ``(log x)^e`` and feeds the information matrix.
"""

import math
import numbers
import warnings

from ._backend import kernels as _k
from ._emtail import em_tail
from .core import BwParams
from .errors import DivergenceError, DomainError
from .quad import SeriesResult, sum_alternating_series

__all__ = [
    "CancellationWarning",
    "s_integral",
    "s_series",
    "t_integral",
    "moment",
    "moment_kc",
    "mgf",
    "mean",
    "variance",
    "skewness",
    "kurtosis",
    "log_moment_integral",
]

QUAD_RTOL = 1e-12
MAX_EVALS = 10**6
_EM_MIN_TERMS = 64


class CancellationWarning(RuntimeWarning):
    """Raw-moment cancellation cost more than six significant digits."""


def _real(name, v):
    if not (isinstance(v, numbers.Real) and math.isfinite(v)):
        raise DomainError(f"{name} must be a finite real, got {v!r}")
    return float(v)


def _pos(name, v):
    v = _real(name, v)
    if v <= 0:
        raise DomainError(f"{name} must be positive, got {v!r}")
    return v


def _check_s_index(d, b, a):
    d = _pos("d", d)
    b = _pos("b", b)
    a = _pos("a", a)
    if d + a <= 1.0:
        raise DivergenceError(
            f"S integral diverges at the origin: need d + a > 1, got d={d}, a={a}"
        )
    return d, b, a


def _em_tail(d, b, a, n, c_last):
    """Euler-Maclaurin estimate of sum_{j>=n} c_j (b/(b+j))^d."""
    lb = math.log(b)

    def log_phi_xs(lx):
        # x^d (b/(b+x))^d = b^d / (1 + b/x)^d
        return d * lb - d * math.log1p(b * math.exp(-lx))

    def dlog_phi(x):
        return -d / (b + x), d / (b + x) ** 2, -2.0 * d / (b + x) ** 3

    return em_tail(a, n, c_last, a + d, log_phi_xs, dlog_phi)


def s_series(d, b, a, tol=1e-12):
    """Series evaluation of S(d, b, a).

    ``S = Gamma(d) sum_j c_j (b+j)^-d`` with ``c_j = prod_{k<=j} (k-a)/k``;
    the sum is finite for integer ``a``. For non-integer ``a`` the terms
    are of one sign beyond ``j = ceil(a)`` and decay only like
    ``j^-(a+d)``, so after an explicit partial sum the remainder is
    added through an Euler-Maclaurin estimate.

    Returns
    -------
    SeriesResult
        ``last_term_magnitude`` holds the size of the last Euler-Maclaurin
        correction relative to the value; ``converged`` compares it to
        ``tol``.
    """
    d, b, a = _check_s_index(d, b, a)
    scale = math.lgamma(d) - d * math.log(b)
    if a == round(a):
        # c_j vanishes for j >= a
        n = int(round(a))
        inner, _ = _k.s_partial(d, b, a, n)
        return SeriesResult(math.exp(scale) * inner, n, 0.0, True)
    n = max(math.ceil(a) + 2, _EM_MIN_TERMS) + math.ceil(2.0 * b)
    inner, c_last = _k.s_partial(d, b, a, n)
    tail, corr = _em_tail(d, b, a, n, c_last)
    inner += tail
    rel = corr / abs(inner) if inner else math.inf
    return SeriesResult(math.exp(scale) * inner, n, rel, rel <= tol)


def _st_quad(d, b, a, e, rtol):
    v, _, _ = _k.st_integral(0, d, b, a, e, rtol, MAX_EVALS)
    return v


def s_integral(d, b, a, method="series", tol=1e-12):
    """S(d, b, a) by series, quadrature or closed form.

    Parameters
    ----------
    d, b, a : float
        Positive, with ``d + a > 1`` for convergence at the origin.
    method : {"series", "quadrature", "closed_form"}
        ``closed_form`` exists for ``d`` in {1, 2, 3} through the beta,
        digamma and trigamma functions.
    tol : float
        Relative accuracy target.

    Examples
    --------
    >>> round(s_integral(2, 1, 1), 12)
    1.0
    """
    d, b, a = _check_s_index(d, b, a)
    if method == "series":
        return s_series(d, b, a, tol).value
    if method == "quadrature":
        return _st_quad(d, b, a, 0, tol)
    if method == "closed_form":
        bab = math.exp(_k.ln_beta(a, b))
        if d == 1:
            return bab
        g = _k.digamma(a + b) - _k.digamma(b)
        if d == 2:
            return bab * g
        if d == 3:
            return bab * (_k.trigamma(b) - _k.trigamma(a + b) + g * g)
        raise DomainError("closed form exists only for d in {1, 2, 3}")
    raise DomainError(f"unknown method {method!r}")


def t_integral(d, b, a, e, tol=QUAD_RTOL):
    """T(d, b, a, e): the S integrand weighted by ``(log x)^e``.

    Evaluated by quadrature. ``a`` may be zero or negative, as in the
    shifted arguments of the information matrix, provided the origin
    behaviour ``x^(d+a-2)`` stays integrable, i.e. ``d + a > 1``.

    Raises
    ------
    DivergenceError
        If ``d + a <= 1``.
    """
    d = _pos("d", d)
    b = _pos("b", b)
    a = _real("a", a)
    if not (isinstance(e, numbers.Integral) and e >= 0):
        raise DomainError(f"e must be a non-negative integer, got {e!r}")
    if d + a <= 1.0:
        raise DivergenceError(f"T integral diverges at the origin (d + a = {d + a})")
    return _st_quad(d, b, a, int(e), tol)


def _moment_log_parts(p, r, method, tol):
    """Return (log of the positive prefactor, inner factor) for E(X^r)."""
    d = r / p.c + 1.0
    if d <= 0 or d + p.a <= 1.0:
        raise DivergenceError(
            f"E(X^r) is infinite for r={r}: need r > -c*min(1, a)"
        )
    lnb = _k.ln_beta(p.a, p.b)
    base = -r * math.log(p.lam) - lnb
    if method == "series":
        # S = Gamma(d) b^-d * inner, kept apart so large r cannot overflow
        res = s_series(d, p.b, p.a, tol)
        inner = res.value * math.exp(-(math.lgamma(d) - d * math.log(p.b)))
        return base + math.lgamma(d) - d * math.log(p.b), inner
    return base, s_integral(d, p.b, p.a, method, tol)


def moment(p, r, method="series", tol=1e-12):
    """Generalized moment E(X^r) for real ``r > -c*min(1, a)``.

    Examples
    --------
    >>> round(moment(BwParams(2, 3, 1, 1), 1), 12) == round(7 / 12, 12)
    True
    """
    r = _real("r", r)
    if r == 0:
        return 1.0
    lg, inner = _moment_log_parts(p, r, method, tol)
    return math.exp(lg) * inner


def moment_kc(p, k):
    """E(X^(k c)); closed forms for ``k`` in {1, 2}, the series otherwise."""
    if not (isinstance(k, numbers.Integral) and k >= 1):
        raise DomainError("k must be a positive integer")
    g = _k.digamma(p.a + p.b) - _k.digamma(p.b)
    if k == 1:
        return g / p.lam ** p.c
    if k == 2:
        return (_k.trigamma(p.b) - _k.trigamma(p.a + p.b) + g * g) / p.lam ** (2 * p.c)
    return moment(p, k * p.c)


def mgf(p, t, tol=1e-12, max_terms=2000):
    """Moment generating function E(exp(tX)).

    For ``c = 1`` the closed form ``B(b - t/lam, a)/B(a, b)`` is used and
    requires ``t < b lam``. For ``c > 1`` the power series
    ``sum_r t^r E(X^r)/r!`` converges for every ``t``; for ``c < 1`` it
    diverges for all ``t != 0``.

    Raises
    ------
    DivergenceError
        Outside the domains above.
    """
    t = _real("t", t)
    if t == 0:
        return SeriesResult(1.0, 1, 0.0, True)
    if p.c == 1.0:
        if t >= p.b * p.lam:
            raise DivergenceError(f"mgf is infinite for t >= b*lam = {p.b * p.lam}")
        v = math.exp(_k.ln_beta(p.b - t / p.lam, p.a) - _k.ln_beta(p.a, p.b))
        return SeriesResult(v, 0, 0.0, True)
    if p.c < 1.0:
        raise DivergenceError("the moment series of the mgf diverges for c < 1")
    lt = math.log(abs(t))
    neg = t < 0

    def term(r):
        if r == 0:
            return 1.0
        lg, inner = _moment_log_parts(p, float(r), "series", tol)
        v = math.exp(r * lt - math.lgamma(r + 1.0) + lg) * inner
        return -v if neg and r % 2 else v

    # terms rise before they fall when |t| E(X) is large
    peak = int(min(max_terms, 4 + (abs(t) * moment(p, 1.0)) ** p.c))
    res = sum_alternating_series(term, tol=tol, min_terms=peak, max_terms=max_terms)
    return res


def _raw(p, upto):
    # standardized moments do not depend on lam
    q = BwParams(p.a, p.b, p.c, 1.0)
    return [moment(q, float(r)) for r in range(1, upto + 1)]


def _central2(m1, m2):
    var = math.fsum([m2, -m1 * m1])
    if var <= 1e-6 * m2:
        warnings.warn(
            "variance lost more than six digits to cancellation", CancellationWarning,
            stacklevel=3,
        )
    return var


def mean(p):
    return moment(p, 1.0)


def variance(p):
    m1, m2 = moment(p, 1.0), moment(p, 2.0)
    return _central2(m1, m2)


def skewness(p):
    """Standardized third central moment."""
    m1, m2, m3 = _raw(p, 3)
    var = _central2(m1, m2)
    mu3 = math.fsum([m3, -3.0 * m1 * m2, 2.0 * m1 ** 3])
    return mu3 / var ** 1.5


def kurtosis(p):
    """Standardized fourth central moment (3 for a normal law, not excess)."""
    m1, m2, m3, m4 = _raw(p, 4)
    var = _central2(m1, m2)
    mu4 = math.fsum([m4, -4.0 * m1 * m3, 6.0 * m1 * m1 * m2, -3.0 * m1 ** 4])
    return mu4 / (var * var)


def log_moment_integral(p_exp, q_exp):
    """int_0^1 z^p |log z|^q dz = Gamma(1+q) / (1+p)^(q+1) for p > -1."""
    p_exp = _real("p_exp", p_exp)
    q_exp = _real("q_exp", q_exp)
    if p_exp <= -1:
        raise DomainError("p_exp must exceed -1")
    if q_exp < 0:
        raise DomainError("q_exp must be non-negative")
    return math.exp(math.lgamma(1.0 + q_exp) - (q_exp + 1.0) * math.log1p(p_exp))
