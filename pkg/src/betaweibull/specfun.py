"""Gamma-family and beta-family special functions on the positive reals.

All functions are total on their stated domains. NaN or out-of-range
arguments raise :class:`~betaweibull.errors.DomainError` instead of
propagating NaN.
"""

import math
import numbers

from ._backend import kernels as _k
from .errors import ConvergenceError, DomainError

__all__ = [
    "ln_gamma",
    "digamma",
    "trigamma",
    "beta",
    "ln_beta",
    "inc_beta_ratio",
    "inc_beta_ratio_inv",
]

_LOG_HALF = math.log(0.5)
_INV_MAXIT = 200


def _positive(name, x):
    if not (isinstance(x, numbers.Real) and math.isfinite(x) and x > 0):
        raise DomainError(f"{name} must be a positive finite real, got {x!r}")
    return float(x)


def _unit(name, y):
    if not (isinstance(y, numbers.Real) and 0.0 <= y <= 1.0):
        raise DomainError(f"{name} must lie in [0, 1], got {y!r}")
    return float(y)


def ln_gamma(x):
    """Natural log of the gamma function for ``x > 0``."""
    return _k.ln_gamma(_positive("x", x))


def digamma(x):
    """Digamma function psi(x) = d/dx log Gamma(x) for ``x > 0``."""
    return _k.digamma(_positive("x", x))


def trigamma(x):
    """Trigamma function psi'(x) for ``x > 0``."""
    return _k.trigamma(_positive("x", x))


def ln_beta(a, b):
    """log B(a, b)."""
    return _k.ln_beta(_positive("a", a), _positive("b", b))


def beta(a, b):
    """Complete beta function B(a, b) = Gamma(a)Gamma(b)/Gamma(a+b)."""
    return math.exp(ln_beta(a, b))


def inc_beta_ratio(y, a, b):
    """Regularized incomplete beta function I_y(a, b).

    Parameters
    ----------
    y : float
        Upper limit in [0, 1].
    a, b : float
        Positive shape parameters.

    Notes
    -----
    Evaluated by continued fraction, switching to the complement
    I_{1-y}(b, a) above ``y = (a+1)/(a+b+2)``; a direct power series is
    used for small ``y`` when it converges geometrically.
    """
    y = _unit("y", y)
    a = _positive("a", a)
    b = _positive("b", b)
    return _k.inc_beta(y, 1.0 - y, a, b)


def _solve_lower(q, a, b, lnb):
    """Return t = log(y) <= log(1/2) solving I_y(a, b) = q."""

    log_a = math.log(a)

    def g(t):
        if t < -700.0:
            # y underflows; I = y^a/(a B) (1 + O(y))
            return math.exp(a * t - log_a - lnb) - q
        y = math.exp(t)
        return _k.inc_beta(y, -math.expm1(t), a, b) - q

    def dg(t):
        # dI/dt = y * beta density
        return math.exp(a * t + (b - 1.0) * math.log1p(-math.exp(t)) - lnb)

    hi = _LOG_HALF
    # small-y asymptote I ~ y^a / (a B(a,b)) gives the starting point
    t = min((math.log(q) + log_a + lnb) / a, hi)
    lo = t - 1.0
    while g(lo) > 0.0:
        lo = 2.0 * lo - 1.0
        if lo < -1e300:
            return -math.inf
    if not lo < t < hi:
        t = 0.5 * (lo + hi)
    for _ in range(_INV_MAXIT):
        gv = g(t)
        if gv == 0.0:
            return t
        if gv > 0.0:
            hi = t
        else:
            lo = t
        slope = dg(t)
        step = gv / slope if slope > 0.0 else math.inf
        t_new = t - step
        if not lo < t_new < hi:
            t_new = 0.5 * (lo + hi)
        if abs(t_new - t) <= 1e-15 * max(1.0, abs(t)) or hi - lo <= 1e-15 * max(1.0, abs(lo)):
            return t_new
        t = t_new
    raise ConvergenceError(
        f"inverse incomplete beta did not converge for q={q!r}, a={a!r}, b={b!r}"
    )


def _inc_beta_inv_log(p, a, b):
    """Solve I_y(a, b) = p for 0 < p < 1 in logs.

    Returns ``(t, lower)`` with ``t = log y`` when ``lower`` and
    ``t = log(1 - y)`` otherwise; ``t`` stays finite where ``y`` or
    ``1 - y`` underflows.
    """
    lnb = _k.ln_beta(a, b)
    p_half = _k.inc_beta(0.5, 0.5, a, b)
    if p <= p_half:
        return _solve_lower(p, a, b, lnb), True
    return _solve_lower(1.0 - p, b, a, lnb), False


def _inc_beta_inv_pair(p, a, b):
    """Solve I_y(a, b) = p; return ``(y, 1 - y)`` each to full precision."""
    if p <= 0.0:
        return 0.0, 1.0
    if p >= 1.0:
        return 1.0, 0.0
    t, lower = _inc_beta_inv_log(p, a, b)
    if lower:
        return math.exp(t), -math.expm1(t)
    return -math.expm1(t), math.exp(t)


def inc_beta_ratio_inv(p, a, b):
    """Inverse of :func:`inc_beta_ratio` in its first argument.

    Bracketed Newton iteration on ``log y`` (or ``log(1-y)`` in the upper
    half) with bisection as safeguard; at most 200 iterations.

    Raises
    ------
    ConvergenceError
        If the iteration cap is reached.
    """
    p = _unit("p", p)
    a = _positive("a", a)
    b = _positive("b", b)
    return _inc_beta_inv_pair(p, a, b)[0]
