"""Euler-Maclaurin remainders of the c_j series.

Both the S series and the cdf series sum ``c_j phi(j)`` with
``c_j = prod_{k<=j} (k-a)/k``. Beyond ``j = ceil(a)`` the coefficients keep
one sign and equal ``K Gamma(j+1-a)/Gamma(j+1)``, so the remainder is the
sum of a smooth function and Euler-Maclaurin applies.
"""

import math

from ._backend import kernels as _k
from ._gk import adaptive


def log_gamma_ratio_tail(alpha, beta, u):
    """log(Gamma(x+alpha)/Gamma(x+beta)) - (alpha-beta) log x at u = 1/x.

    Asymptotic series in Bernoulli polynomials, for large ``x``.
    """
    def b2(t):
        return t * t - t + 1.0 / 6.0

    def b3(t):
        return t * (t * (t - 1.5) + 0.5)

    def b4(t):
        return t * t * (t * (t - 2.0) + 1.0) - 1.0 / 30.0

    return (u * (b2(alpha) - b2(beta)) / 2.0
            - u * u * (b3(alpha) - b3(beta)) / 6.0
            + u ** 3 * (b4(alpha) - b4(beta)) / 12.0)


_STIRLING = (1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0,
             1.0 / 1188.0, -691.0 / 360360.0)


def log_gamma_ratio_scaled(lx, a):
    """log(Gamma(x+1-a)/Gamma(x+1)) + a log x for x = exp(lx).

    A plain lgamma difference loses about ``x log x`` ulps; above
    ``x = 10`` the Stirling series is differenced term by term instead.
    """
    if lx < 18.42:
        x = math.exp(lx)
        if x + 1.0 - a < 10.0:
            return math.lgamma(x + 1.0 - a) - math.lgamma(x + 1.0) + a * lx
    else:  # x > 1e8
        return log_gamma_ratio_tail(1.0 - a, 1.0, math.exp(-lx))
    u, v = x + 1.0 - a, x + 1.0
    r = (x + 0.5) * math.log1p(-a / v) - a * math.log1p((1.0 - a) / x) + a
    pu, pv = 1.0 / u, 1.0 / v
    u2, v2 = pu * pu, pv * pv
    for coef in _STIRLING:
        r += coef * (pu - pv)
        pu *= u2
        pv *= v2
    return r


def _psi2(x):
    # asymptotic tetragamma, adequate for x >= 60
    f = 1.0 / x
    f2 = f * f
    return -f2 - f2 * f - 0.5 * f2 * f2 + f2 * f2 * f2 / 6.0 - f2 ** 4 / 6.0


def em_tail(a, n, c_last, s, log_phi_xs, dlog_phi, log_x_break=None):
    """Estimate ``sum_{j>=n} c_j phi(j)``.

    Parameters
    ----------
    a : float
        Non-integer shape defining ``c_j``.
    n : int
        First omitted index, at least ``ceil(a) + 1`` and about 60 or more.
    c_last : float
        ``c_{n-1}``, which fixes ``K``.
    s : float
        Decay exponent of ``c_j phi(j)``, above 1; sets the substitution.
    log_phi_xs : callable
        ``lx -> log(phi(x) x^(s-a))`` written in ``lx = log x`` so that it
        stays finite for huge ``x``, including ``lx = inf``.
    dlog_phi : callable
        ``x -> (L, L', L'')``, derivatives of ``log phi``.
    log_x_break : float, optional
        Log of the point where ``phi`` changes behaviour (a cutoff); the quadrature is
        split there so that a nearly flat integrand cannot hide it.

    Returns
    -------
    (float, float)
        The estimate and the size of the last correction used.
    """
    lg = math.lgamma
    # K * Gamma(x+1-a)/Gamma(x+1) equals c_{n-1} at x = n-1
    log_abs_k = math.log(abs(c_last)) - (lg(n - a) - lg(n))
    sign = math.copysign(1.0, c_last)

    x = float(n)
    ln_n = math.log(n)
    log_g = log_abs_k + lg(x + 1.0 - a) - lg(x + 1.0) + log_phi_xs(ln_n) - (s - a) * ln_n
    g = math.exp(log_g)
    p0, p1, p2 = dlog_phi(x)
    L = _k.digamma(x + 1.0 - a) - _k.digamma(x + 1.0) + p0
    L1 = _k.trigamma(x + 1.0 - a) - _k.trigamma(x + 1.0) + p1
    L2 = _psi2(x + 1.0 - a) - _psi2(x + 1.0) + p2
    g1 = g * L
    g3 = g * (L ** 3 + 3.0 * L * L1 + L2)

    # integral over [n, inf): x = n w^(-1/(s-1)) flattens the x^-s decay
    q = 1.0 / (s - 1.0)

    def log_gxs(lx):
        # log(g(x) x^s); no cancellation for huge x
        return log_abs_k + log_gamma_ratio_scaled(lx, a) + log_phi_xs(lx)

    def h(w):
        lx = ln_n - q * math.log(w) if w > 0.0 else math.inf
        return math.exp(log_gxs(lx) + (1.0 - s) * ln_n) * q

    cuts = [0.0, 1.0]
    if log_x_break is not None and log_x_break > math.log(n):
        # w = (n/x)^(s-1); the drop next to w_break is narrow on the unit
        # interval, so grade the panels geometrically away from it
        w_break = math.exp((s - 1.0) * (ln_n - log_x_break))
        if w_break > 0.0:
            cuts = [0.0, 0.01 * w_break, 0.1 * w_break]
            w = w_break
            while w < 1.0:
                cuts.append(w)
                w *= 4.0
            cuts.append(1.0)
    atol = 1e-16 * h(1.0)
    integral = 0.0
    for lo, hi in zip(cuts, cuts[1:]):
        integral += adaptive(h, lo, hi, atol, 1e-13, 10**5)[0]
    est = integral + 0.5 * g - g1 / 12.0 + g3 / 720.0
    return sign * est, abs(g3) / 720.0
