"""Adaptive quadrature and series summation.

These are general-purpose routines taking Python callables. They serve as
the independent numerical route against which the closed forms and series
elsewhere in the package are checked. The S/T integrals themselves run on
a specialised kernel (see :mod:`betaweibull.moments`).
"""

import math
from dataclasses import dataclass

from ._gk import QuadratureError, adaptive
from .errors import DomainError

__all__ = [
    "QuadResult",
    "SeriesResult",
    "QuadratureError",
    "integrate_interval",
    "integrate_unit_interval",
    "integrate_semi_infinite",
    "sum_alternating_series",
]

MAX_EVALS = 10**6
MAX_TERMS = 10**5


@dataclass(frozen=True)
class QuadResult:
    value: float
    abs_error_estimate: float
    subdivisions: int


@dataclass(frozen=True)
class SeriesResult:
    """Value of a truncated infinite series plus truncation diagnostics."""

    value: float
    terms_used: int
    last_term_magnitude: float
    converged: bool


def _check_tol(tol, rtol):
    if not (tol >= 0 and rtol >= 0 and (tol > 0 or rtol > 0)):
        raise DomainError("need tol >= 0, rtol >= 0 and at least one positive")


def integrate_interval(f, lo, hi, tol=1e-12, rtol=0.0):
    """Integrate ``f`` over the finite interval ``[lo, hi]``."""
    _check_tol(tol, rtol)
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise DomainError(f"bad interval [{lo!r}, {hi!r}]")
    v, e, n = adaptive(f, float(lo), float(hi), tol, rtol, MAX_EVALS)
    return QuadResult(v, e, n)


def integrate_unit_interval(f, tol=1e-12, rtol=0.0):
    """Integrate ``f`` over (0, 1); endpoint singularities are allowed.

    Success means ``abs_error_estimate <= max(tol, rtol*|value|)``.

    Raises
    ------
    QuadratureError
        When 10**6 integrand evaluations do not reach the target.
    """
    return integrate_interval(f, 0.0, 1.0, tol, rtol)


def integrate_semi_infinite(f, tol=1e-12, rtol=0.0, scale=1.0):
    """Integrate ``f`` over (0, inf).

    The range is split at ``scale``. The head ``[0, scale]`` is integrated
    directly so that an integrable singularity at the origin keeps the
    full resolution of floating point near zero. The tail is mapped onto
    (0, 1] by ``x = scale / s``. ``scale`` should be of the order of the
    bulk of the integrand.

    Examples
    --------
    >>> round(integrate_semi_infinite(lambda x: math.exp(-x)).value, 12)
    1.0
    """
    _check_tol(tol, rtol)
    if not (scale > 0 and math.isfinite(scale)):
        raise DomainError("scale must be positive")

    def tail(s):
        x = scale / s
        return f(x) * scale / (s * s)

    v1, e1, n1 = adaptive(f, 0.0, scale, 0.5 * tol, 0.5 * rtol, MAX_EVALS // 2)
    v2, e2, n2 = adaptive(tail, 0.0, 1.0, 0.5 * tol, 0.5 * rtol, MAX_EVALS // 2)
    return QuadResult(v1 + v2, e1 + e2, n1 + n2)


def sum_alternating_series(term, tol=1e-12, min_terms=0, max_terms=MAX_TERMS):
    """Sum ``term(0) + term(1) + ...`` with a two-small-terms stopping rule.

    Summation stops at the first ``j >= min_terms`` for which both
    ``|term(j-1)|`` and ``|term(j)|`` are at most ``tol*max(1, |S_j|)``.
    A single small term is not accepted, since terms built from
    ``1/Gamma(a-j)`` pass close to zero near integer ``a - j``.
    Hitting ``max_terms`` returns ``converged=False`` rather than raising.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    acc = 0.0
    comp = 0.0
    small_prev = False
    mag = math.inf
    for j in range(max_terms):
        t = term(j)
        if not math.isfinite(t):
            return SeriesResult(acc, j, math.inf, False)
        y = t - comp
        s = acc + y
        comp = (s - acc) - y
        acc = s
        mag = abs(t)
        small = mag <= tol * max(1.0, abs(acc))
        if small and small_prev and j + 1 >= min_terms:
            return SeriesResult(acc, j + 1, mag, True)
        small_prev = small
    return SeriesResult(acc, max_terms, mag, False)
