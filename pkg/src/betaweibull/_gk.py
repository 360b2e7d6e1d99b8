"""21-point Gauss-Kronrod rule and a globally adaptive driver.

The node/weight tables and the error heuristic follow QUADPACK's ``qk21``.
The compiled kernel carries its own copy of the same tables.
"""

import heapq
import math
import sys

from .errors import ConvergenceError

XGK = (
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
    0.000000000000000000000000000000000,
)

WGK = (
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
)

# 10-point Gauss weights, paired with XGK[1], XGK[3], ..., XGK[9]
WG = (
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
)

EPMACH = sys.float_info.epsilon
UFLOW = sys.float_info.min


class QuadratureError(ConvergenceError):
    """Adaptive quadrature could not reach the requested accuracy."""


def qk21(f, lo, hi):
    """Apply the 21-point Kronrod rule on ``[lo, hi]``.

    Returns ``(result, abserr, resabs)`` where ``resabs`` approximates the
    integral of ``|f|``.
    """
    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    fc = f(center)
    resg = 0.0
    resk = WGK[10] * fc
    resabs = abs(resk)
    fv1 = [0.0] * 10
    fv2 = [0.0] * 10
    for j in range(10):
        dx = half * XGK[j]
        f1 = f(center - dx)
        f2 = f(center + dx)
        fv1[j] = f1
        fv2[j] = f2
        resk += WGK[j] * (f1 + f2)
        resabs += WGK[j] * (abs(f1) + abs(f2))
        if j & 1:
            resg += WG[j >> 1] * (f1 + f2)
    reskh = 0.5 * resk
    resasc = WGK[10] * abs(fc - reskh)
    for j in range(10):
        resasc += WGK[j] * (abs(fv1[j] - reskh) + abs(fv2[j] - reskh))
    dhalf = abs(half)
    result = resk * half
    resabs *= dhalf
    resasc *= dhalf
    abserr = abs((resk - resg) * half)
    if resasc != 0.0 and abserr != 0.0:
        abserr = resasc * min(1.0, (200.0 * abserr / resasc) ** 1.5)
    if resabs > UFLOW / (50.0 * EPMACH):
        abserr = max(EPMACH * 50.0 * resabs, abserr)
    if not (math.isfinite(result) and math.isfinite(abserr)):
        raise QuadratureError(f"integrand is not finite on [{lo!r}, {hi!r}]")
    return result, abserr, resabs


def adaptive(f, lo, hi, tol, rtol, max_evals):
    """Globally adaptive bisection driven by the largest panel error.

    Stops once the summed error estimate is at most ``max(tol, rtol*|I|)``.
    Returns ``(value, abserr, panels)``; raises :class:`QuadratureError`
    when ``max_evals`` integrand calls are exhausted first.
    """
    r, e, _ = qk21(f, lo, hi)
    heap = [(-e, lo, hi, r)]
    total, err = r, e
    evals = 21
    frozen = 0.0  # error held by panels too narrow to split
    frozen_val = 0.0
    while err > max(tol, rtol * abs(total)):
        if not heap:
            raise QuadratureError(
                f"roundoff limits accuracy: error {err:.3g} above target"
            )
        if evals + 42 > max_evals:
            raise QuadratureError(
                f"no convergence after {evals} evaluations (error {err:.3g})"
            )
        neg_e, a, b, r = heapq.heappop(heap)
        mid = 0.5 * (a + b)
        if not (a < mid < b) or (b - a) <= 4.0 * EPMACH * max(abs(a), abs(b)):
            frozen += -neg_e
            frozen_val += r
            continue
        r1, e1, _ = qk21(f, a, mid)
        r2, e2, _ = qk21(f, mid, b)
        evals += 42
        total += r1 + r2 - r
        heapq.heappush(heap, (-e1, a, mid, r1))
        heapq.heappush(heap, (-e2, mid, b, r2))
        # recompute sums from panels periodically to stop drift
        if len(heap) % 64 == 0:
            total = frozen_val + math.fsum(p[3] for p in heap)
            err = frozen + math.fsum(-p[0] for p in heap)
        else:
            err += e1 + e2 + neg_e
    total = frozen_val + math.fsum(p[3] for p in heap)
    return total, max(err, 0.0), max(1, len(heap))
