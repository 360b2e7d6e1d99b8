# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels.

Same functions, signatures and numerics as ``_pykernels``; the adaptive
quadrature driver and the S/T integrands run entirely at C level.
"""

from libc.math cimport (exp, log, log1p, expm1, lgamma, fabs, isfinite, pow,
                        INFINITY)
from libc.stdlib cimport malloc, free

from ._gk import QuadratureError

IS_COMPILED = True

cdef double CF_EPS = 1e-16
cdef double CF_TINY = 1e-300
cdef int CF_MAXIT = 20000
cdef double EPMACH = 2.220446049250313e-16
cdef double UFLOW = 2.2250738585072014e-308

cdef double XGK[11]
cdef double WGK[11]
cdef double WG[5]
XGK[:] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
]
WGK[:] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208977196136,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
]
WG[:] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
]


def ln_gamma(double x):
    return lgamma(x)


cdef inline double _ln_beta(double a, double b) noexcept nogil:
    return lgamma(a) + lgamma(b) - lgamma(a + b)


def ln_beta(double a, double b):
    return _ln_beta(a, b)


def digamma(double x):
    cdef double r = 0.0, f, t
    while x < 10.0:
        r -= 1.0 / x
        x += 1.0
    f = 1.0 / (x * x)
    t = f * (-1.0 / 12 + f * (1.0 / 120 + f * (-1.0 / 252 + f * (
        1.0 / 240 + f * (-1.0 / 132 + f * (691.0 / 32760 + f * (-1.0 / 12)))))))
    return r + log(x) - 0.5 / x + t


def trigamma(double x):
    cdef double r = 0.0, f, t
    while x < 10.0:
        r += 1.0 / (x * x)
        x += 1.0
    f = 1.0 / (x * x)
    t = (1.0 / 6 + f * (-1.0 / 30 + f * (1.0 / 42 + f * (-1.0 / 30 + f * (
        5.0 / 66 + f * (-691.0 / 2730 + f * (7.0 / 6)))))))
    return r + 1.0 / x + 0.5 * f + t * f / x


cdef double _ibeta_series(double y, double a, double b, double lnb) noexcept nogil:
    cdef double term = 1.0, acc = 1.0 / a, inc
    cdef int n = 0
    while True:
        n += 1
        term *= (n - b) * y / n
        inc = term / (a + n)
        acc += inc
        if fabs(inc) <= 1e-17 * fabs(acc) or n > CF_MAXIT:
            break
    return exp(a * log(y) - lnb) * acc


cdef double _ibeta_cf(double y, double ym, double a, double b, double lnb) noexcept nogil:
    cdef double qab = a + b, qap = a + 1.0, qam = a - 1.0
    cdef double c = 1.0, d, h, aa, delta
    cdef int m, m2
    d = 1.0 - qab * y / qap
    if fabs(d) < CF_TINY:
        d = CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, CF_MAXIT + 1):
        m2 = 2 * m
        aa = m * (b - m) * y / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if fabs(d) < CF_TINY:
            d = CF_TINY
        c = 1.0 + aa / c
        if fabs(c) < CF_TINY:
            c = CF_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * y / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if fabs(d) < CF_TINY:
            d = CF_TINY
        c = 1.0 + aa / c
        if fabs(c) < CF_TINY:
            c = CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if fabs(delta - 1.0) < CF_EPS:
            break
    return exp(a * log(y) + b * log(ym) - lnb) / a * h


cdef inline double _ibeta_lower(double y, double ym, double a, double b,
                                double lnb) noexcept nogil:
    if y <= 0.2 and b * y <= 1.0:
        return _ibeta_series(y, a, b, lnb)
    return _ibeta_cf(y, ym, a, b, lnb)


def inc_beta(double y, double ym, double a, double b):
    """Regularized incomplete beta I_y(a,b) given both ``y`` and ``1-y``."""
    cdef double lnb
    if y <= 0.0:
        return 0.0
    if ym <= 0.0:
        return 1.0
    lnb = _ln_beta(a, b)
    if y > (a + 1.0) / (a + b + 2.0):
        return 1.0 - _ibeta_lower(ym, y, b, a, lnb)
    return _ibeta_lower(y, ym, a, b, lnb)


cdef inline double _log_u_over_x(double x) noexcept nogil:
    if x < 1e-5:
        return x * (-0.5 + x / 24.0)
    return log(-expm1(-x) / x)


cdef double _q_over_x2(double x) noexcept nogil:
    cdef double acc, term, xp, fact
    cdef int k
    if x < 0.5:
        acc = 0.0
        term = 0.5
        xp = 1.0
        fact = 2.0
        for k in range(2, 22):
            if k > 2:
                fact *= k
                xp *= -x
                term = (k - 1) / fact * xp
            acc += term
        return acc
    return -(expm1(-x) + x * exp(-x)) / (x * x)


cdef inline double _log1mexp_neg(double x) noexcept nogil:
    if x < 0.6931471805599453:
        return log(-expm1(-x))
    return log1p(-exp(-x))


def origin_exponent(int kind, double d, double a):
    """Exponent p with integrand ~ x^(p-1) at the origin."""
    if kind == 0:
        return d + a - 1.0
    return a + 1.0


cdef struct STParams:
    int kind
    int tail
    int e
    double d
    double b
    double a
    double inv_p


cdef inline double _ipow(double x, int e) noexcept nogil:
    cdef double r = 1.0
    cdef int i
    for i in range(e):
        r *= x
    return r


cdef double _st_eval(double s, STParams* P) noexcept nogil:
    cdef double x, lx, v, lr, eta, ex, h
    if not P.tail:
        lx = log(s) * P.inv_p
        x = exp(lx)
        if P.kind == 0:
            v = P.inv_p * exp((P.a - 1.0) * _log_u_over_x(x) - P.b * x)
        else:
            lr = _log_u_over_x(x)
            eta = (1.0 - P.a) * _q_over_x2(x) + (P.a + P.b - 1.0) * exp(2.0 * lr)
            v = P.inv_p * exp((P.a - 3.0) * lr - P.b * x) * eta
    else:
        x = 1.0 - log(s) / P.b
        lx = log(x)
        if P.kind == 0:
            v = exp((P.d - 1.0) * lx + (P.a - 1.0) * _log1mexp_neg(x) - P.b) / P.b
        else:
            ex = exp(-x)
            h = ((1.0 - P.a) * (-expm1(-x) - x * ex)
                 + (P.a + P.b - 1.0) * expm1(-x) * expm1(-x))
            v = x * exp((P.a - 3.0) * _log1mexp_neg(x) - P.b) * h / P.b
    if P.e:
        return v * _ipow(lx, P.e)
    return v


cdef int _qk21(STParams* P, double lo, double hi, double* result,
               double* abserr) noexcept nogil:
    cdef double center = 0.5 * (lo + hi)
    cdef double half = 0.5 * (hi - lo)
    cdef double fc = _st_eval(center, P)
    cdef double resg = 0.0
    cdef double resk = WGK[10] * fc
    cdef double resabs = fabs(resk)
    cdef double fv1[10]
    cdef double fv2[10]
    cdef double dx, f1, f2, reskh, resasc, dhalf, err
    cdef int j
    for j in range(10):
        dx = half * XGK[j]
        f1 = _st_eval(center - dx, P)
        f2 = _st_eval(center + dx, P)
        fv1[j] = f1
        fv2[j] = f2
        resk += WGK[j] * (f1 + f2)
        resabs += WGK[j] * (fabs(f1) + fabs(f2))
        if j & 1:
            resg += WG[j >> 1] * (f1 + f2)
    reskh = 0.5 * resk
    resasc = WGK[10] * fabs(fc - reskh)
    for j in range(10):
        resasc += WGK[j] * (fabs(fv1[j] - reskh) + fabs(fv2[j] - reskh))
    dhalf = fabs(half)
    resabs *= dhalf
    resasc *= dhalf
    err = fabs((resk - resg) * half)
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, pow(200.0 * err / resasc, 1.5))
    if resabs > UFLOW / (50.0 * EPMACH):
        err = max(EPMACH * 50.0 * resabs, err)
    result[0] = resk * half
    abserr[0] = err
    if not (isfinite(result[0]) and isfinite(err)):
        return -1
    return 0


cdef struct Panel:
    double lo
    double hi
    double val
    double err


cdef inline void _heap_push(Panel* heap, int* n, Panel p) noexcept nogil:
    cdef int i = n[0]
    cdef int parent
    n[0] += 1
    while i > 0:
        parent = (i - 1) >> 1
        if heap[parent].err >= p.err:
            break
        heap[i] = heap[parent]
        i = parent
    heap[i] = p


cdef inline Panel _heap_pop(Panel* heap, int* n) noexcept nogil:
    cdef Panel top = heap[0]
    cdef Panel last
    cdef int i = 0, child
    n[0] -= 1
    if n[0] == 0:
        return top
    last = heap[n[0]]
    while True:
        child = 2 * i + 1
        if child >= n[0]:
            break
        if child + 1 < n[0] and heap[child + 1].err > heap[child].err:
            child += 1
        if heap[child].err <= last.err:
            break
        heap[i] = heap[child]
        i = child
    heap[i] = last
    return top


cdef int _adaptive(STParams* P, double rtol, long max_evals, double* value,
                   double* abserr, int* panels) noexcept nogil:
    """Return 0 on success, 1 non-finite, 2 budget exhausted, 3 roundoff."""
    cdef int cap = <int>(max_evals // 21) + 4
    cdef Panel* heap = <Panel*>malloc(cap * sizeof(Panel))
    cdef int n = 0, i, status = 0
    cdef long evals = 21
    cdef double r, e, r1, e1, r2, e2, mid, total, err
    cdef double frozen = 0.0, frozen_val = 0.0
    cdef Panel p, q
    if heap == NULL:
        return 2
    if _qk21(P, 0.0, 1.0, &r, &e) != 0:
        free(heap)
        return 1
    p.lo = 0.0
    p.hi = 1.0
    p.val = r
    p.err = e
    _heap_push(heap, &n, p)
    total = r
    err = e
    while err > rtol * fabs(total):
        if n == 0:
            status = 3
            break
        if evals + 42 > max_evals:
            status = 2
            break
        p = _heap_pop(heap, &n)
        mid = 0.5 * (p.lo + p.hi)
        if not (p.lo < mid < p.hi) or (p.hi - p.lo) <= 4.0 * EPMACH * max(fabs(p.lo), fabs(p.hi)):
            frozen += p.err
            frozen_val += p.val
            continue
        if _qk21(P, p.lo, mid, &r1, &e1) != 0 or _qk21(P, mid, p.hi, &r2, &e2) != 0:
            status = 1
            break
        evals += 42
        total += r1 + r2 - p.val
        q.lo = p.lo
        q.hi = mid
        q.val = r1
        q.err = e1
        _heap_push(heap, &n, q)
        q.lo = mid
        q.hi = p.hi
        q.val = r2
        q.err = e2
        _heap_push(heap, &n, q)
        if n % 64 == 0:
            total = frozen_val
            err = frozen
            for i in range(n):
                total += heap[i].val
                err += heap[i].err
        else:
            err += e1 + e2 - p.err
    total = frozen_val
    for i in range(n):
        total += heap[i].val
    value[0] = total
    abserr[0] = max(err, 0.0)
    panels[0] = max(1, n)
    free(heap)
    return status


def st_integral(int kind, double d, double b, double a, int e, double rtol,
                long max_evals):
    """Adaptive quadrature of the S/T integrand family over (0, inf).

    See ``_pykernels.st_integral`` for the integrands and substitutions.
    Returns ``(value, abserr, panels)``.
    """
    cdef STParams P
    cdef double v1, e1, v2, e2, val, err
    cdef int n1, n2, s1, s2
    cdef long budget = max_evals // 2
    P.kind = kind
    P.e = e
    P.d = d
    P.b = b
    P.a = a
    P.inv_p = 1.0 / (d + a - 1.0 if kind == 0 else a + 1.0)
    with nogil:
        P.tail = 0
        s1 = _adaptive(&P, 0.25 * rtol, budget, &v1, &e1, &n1)
        P.tail = 1
        s2 = _adaptive(&P, 0.25 * rtol, budget, &v2, &e2, &n2)
    for s in (s1, s2):
        if s == 1:
            raise QuadratureError("S/T integrand is not finite")
        if s == 2:
            raise QuadratureError("S/T quadrature ran out of evaluations")
        if s == 3:
            raise QuadratureError("roundoff limits S/T quadrature accuracy")
    val = v1 + v2
    err = e1 + e2
    if err > rtol * (fabs(v1) + fabs(v2)) and err > 1e-300:
        raise QuadratureError(f"S/T quadrature error {err:.3g} above target")
    return val, err, n1 + n2


def s_partial(double d, double b, double a, long n):
    """Scaled partial sum  sum_{j<n} c_j (b/(b+j))^d  with c_j = prod (k-a)/k.

    Returns ``(value, last_coeff)`` where ``last_coeff`` is c_{n-1}.
    """
    cdef double acc = 0.0, comp = 0.0, c = 1.0, t, y, s
    cdef long j
    for j in range(n):
        if j:
            c *= (j - a) / j
        t = c * exp(-d * log1p(j / b))
        y = t - comp
        s = acc + y
        comp = (s - acc) - y
        acc = s
    return acc, c
