"""Pure-Python kernels.

Mirror of ``_kernels.pyx``: same functions, same signatures, same numerics.
No argument checking happens here; the public wrappers in
:mod:`betaweibull.specfun` and :mod:`betaweibull.moments` validate inputs.
"""

import math

from ._gk import QuadratureError, adaptive

_CF_EPS = 1e-16
_CF_TINY = 1e-300
_CF_MAXIT = 20000

IS_COMPILED = False


def ln_gamma(x):
    return math.lgamma(x)


def ln_beta(a, b):
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def digamma(x):
    r = 0.0
    while x < 10.0:
        r -= 1.0 / x
        x += 1.0
    f = 1.0 / (x * x)
    t = f * (-1.0 / 12 + f * (1.0 / 120 + f * (-1.0 / 252 + f * (
        1.0 / 240 + f * (-1.0 / 132 + f * (691.0 / 32760 + f * (-1.0 / 12)))))))
    return r + math.log(x) - 0.5 / x + t


def trigamma(x):
    r = 0.0
    while x < 10.0:
        r += 1.0 / (x * x)
        x += 1.0
    f = 1.0 / (x * x)
    t = (1.0 / 6 + f * (-1.0 / 30 + f * (1.0 / 42 + f * (-1.0 / 30 + f * (
        5.0 / 66 + f * (-691.0 / 2730 + f * (7.0 / 6)))))))
    return r + 1.0 / x + 0.5 * f + t * f / x


def _ibeta_series(y, a, b, lnb):
    # I_y(a,b) = y^a / B(a,b) * sum_n (1-b)_n / n! * y^n / (a+n)
    term = 1.0
    acc = 1.0 / a
    n = 0
    while True:
        n += 1
        term *= (n - b) * y / n
        inc = term / (a + n)
        acc += inc
        if abs(inc) <= 1e-17 * abs(acc) or n > _CF_MAXIT:
            break
    return math.exp(a * math.log(y) - lnb) * acc


def _ibeta_cf(y, ym, a, b, lnb):
    # modified Lentz evaluation of the incomplete beta continued fraction
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * y / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAXIT + 1):
        m2 = 2 * m
        aa = m * (b - m) * y / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * y / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            break
    front = math.exp(a * math.log(y) + b * math.log(ym) - lnb) / a
    return front * h


def _ibeta_lower(y, ym, a, b, lnb):
    if y <= 0.2 and b * y <= 1.0:
        return _ibeta_series(y, a, b, lnb)
    return _ibeta_cf(y, ym, a, b, lnb)


def inc_beta(y, ym, a, b):
    """Regularized incomplete beta I_y(a,b) given both ``y`` and ``1-y``."""
    if y <= 0.0:
        return 0.0
    if ym <= 0.0:
        return 1.0
    lnb = ln_beta(a, b)
    if y > (a + 1.0) / (a + b + 2.0):
        return 1.0 - _ibeta_lower(ym, y, b, a, lnb)
    return _ibeta_lower(y, ym, a, b, lnb)


def _log_u_over_x(x):
    # log((1 - e^{-x}) / x), smooth with value 0 at the origin
    if x < 1e-5:
        return x * (-0.5 + x / 24.0)
    return math.log(-math.expm1(-x) / x)


def _q_over_x2(x):
    # (1 - (1 + x) e^{-x}) / x^2 without cancellation near the origin
    if x < 0.5:
        acc = 0.0
        term = 0.5  # k = 2 coefficient (k-1)/k!
        xp = 1.0
        fact = 2.0
        for k in range(2, 22):
            if k > 2:
                fact *= k
                xp *= -x
                term = (k - 1) / fact * xp
            acc += term
        return acc
    return -(math.expm1(-x) + x * math.exp(-x)) / (x * x)


def _log1mexp_neg(x):
    # log(1 - e^{-x}) for x > 0
    if x < 0.6931471805599453:
        return math.log(-math.expm1(-x))
    return math.log1p(-math.exp(-x))


def origin_exponent(kind, d, a):
    """Exponent p with integrand ~ x^(p-1) at the origin."""
    if kind == 0:
        return d + a - 1.0
    return a + 1.0


def st_integral(kind, d, b, a, e, rtol, max_evals):
    """Adaptive quadrature of the S/T integrand family over (0, inf).

    kind 0: x^(d-1) e^(-bx) (1-e^-x)^(a-1) (log x)^e
    kind 1: (log x)^e x e^(-bx) (1-e^-x)^(a-3) h(x) with
            h = (1-a)(1-(1+x)e^-x) + (a+b-1)(1-e^-x)^2   (``d`` unused)

    The head [0, 1] uses x = s^(1/p), which removes the algebraic origin
    singularity; the tail [1, inf) uses x = 1 - log(z)/b, which turns the
    exponential decay into a polynomial-in-log factor.
    Returns ``(value, abserr, panels)``.
    """
    p = origin_exponent(kind, d, a)
    inv_p = 1.0 / p
    head_scale = inv_p  # x0^p / p with x0 = 1
    e = int(e)

    if kind == 0:
        def head(s):
            lx = math.log(s) * inv_p
            x = math.exp(lx)
            v = head_scale * math.exp((a - 1.0) * _log_u_over_x(x) - b * x)
            return v * lx ** e if e else v

        def tail(z):
            x = 1.0 - math.log(z) / b
            lx = math.log(x)
            v = math.exp((d - 1.0) * lx + (a - 1.0) * _log1mexp_neg(x) - b) / b
            return v * lx ** e if e else v
    else:
        c1 = 1.0 - a
        c2 = a + b - 1.0

        def head(s):
            lx = math.log(s) * inv_p
            x = math.exp(lx)
            lr = _log_u_over_x(x)
            eta = c1 * _q_over_x2(x) + c2 * math.exp(2.0 * lr)
            v = head_scale * math.exp((a - 3.0) * lr - b * x) * eta
            return v * lx ** e if e else v

        def tail(z):
            x = 1.0 - math.log(z) / b
            lx = math.log(x)
            ex = math.exp(-x)
            h = c1 * (-math.expm1(-x) - x * ex) + c2 * (-math.expm1(-x)) ** 2
            v = x * math.exp((a - 3.0) * _log1mexp_neg(x) - b) * h / b
            return v * lx ** e if e else v

    budget = max_evals // 2
    v1, e1, n1 = adaptive(head, 0.0, 1.0, 0.0, 0.25 * rtol, budget)
    v2, e2, n2 = adaptive(tail, 0.0, 1.0, 0.0, 0.25 * rtol, budget)
    val = v1 + v2
    err = e1 + e2
    # head and tail differ in sign when e is odd; accuracy is judged
    # against |head| + |tail| since cancellation below that is not recoverable
    if err > rtol * (abs(v1) + abs(v2)) and err > 1e-300:
        raise QuadratureError(f"S/T quadrature error {err:.3g} above target")
    return val, err, n1 + n2


def s_partial(d, b, a, n):
    """Scaled partial sum  sum_{j<n} c_j (b/(b+j))^d  with c_j = prod (k-a)/k.

    Returns ``(value, last_coeff)`` where ``last_coeff`` is c_{n-1}.
    """
    acc = 0.0
    comp = 0.0
    c = 1.0
    for j in range(n):
        if j:
            c *= (j - a) / j
        t = c * math.exp(-d * math.log1p(j / b))
        # Kahan summation; early terms may cancel when a > 1
        y = t - comp
        s = acc + y
        comp = (s - acc) - y
        acc = s
    return acc, c


__all__ = [
    "QuadratureError",
    "IS_COMPILED",
    "ln_gamma",
    "ln_beta",
    "digamma",
    "trigamma",
    "inc_beta",
    "st_integral",
    "s_partial",
    "origin_exponent",
]
