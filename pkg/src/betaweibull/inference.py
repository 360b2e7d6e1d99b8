"""Likelihood, score, maximum likelihood fitting, expected information and
likelihood ratio / Wald tests for the beta Weibull family.

Fitting works on the logarithms of the free parameters, so positivity
needs no constraints. The optimizer is BFGS with an Armijo backtracking
line search and the analytic score.
"""

import math
import numbers
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from ._backend import kernels as _k
from .core import BwParams, SpecialCase, _log1mexp, logpdf
from .errors import (ConvergenceError, DivergenceError, DomainError,
                     NegativeStatisticError, SingularInformationError)

__all__ = [
    "PARAM_NAMES",
    "Dataset",
    "FitOptions",
    "FitResult",
    "InfoMatrix",
    "TestResult",
    "log_likelihood",
    "score",
    "score_contributions",
    "fit_bw",
    "fit_submodel",
    "fisher_info",
    "observed_info",
    "lr_test",
    "wald_test",
]

PARAM_NAMES = ("a", "b", "c", "lam")
BOUNDARY_LOG = 25.0
_EULER = 0.5772156649015329

# free parameters and pinned values of each sub-model
_SUBMODELS = {
    SpecialCase.BETA_WEIBULL: (("a", "b", "c", "lam"), {}),
    SpecialCase.STANDARD_WEIBULL: (("c", "lam"), {"a": 1.0, "b": 1.0}),
    SpecialCase.EXPONENTIATED_WEIBULL: (("a", "c", "lam"), {"b": 1.0}),
    SpecialCase.BETA_EXPONENTIAL: (("a", "b", "lam"), {"c": 1.0}),
}


@dataclass(frozen=True)
class Dataset:
    """Ordered positive observations with a provenance label."""

    observations: tuple
    label: str = ""

    def __post_init__(self):
        obs = tuple(float(v) for v in self.observations)
        if not obs:
            raise DomainError("empty dataset")
        for i, v in enumerate(obs):
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"observation {i + 1} must be positive and finite, got {v!r}")
        object.__setattr__(self, "observations", obs)

    def __len__(self):
        return len(self.observations)

    def as_array(self):
        return np.array(self.observations)

    def scaled(self, k):
        return Dataset(tuple(k * v for v in self.observations), self.label)


@dataclass(frozen=True)
class InfoMatrix:
    """Per-observation expected information in (a, b, c, lam) order."""

    entries: np.ndarray

    def covariance(self, n, free=PARAM_NAMES):
        """Asymptotic covariance ``K_FF^-1 / n`` of the free parameters."""
        idx = [PARAM_NAMES.index(f) for f in free]
        sub = self.entries[np.ix_(idx, idx)]
        try:
            inv = np.linalg.inv(sub)
        except np.linalg.LinAlgError as exc:
            raise SingularInformationError("information matrix is singular") from exc
        inv = 0.5 * (inv + inv.T)
        return inv / n


@dataclass(frozen=True)
class TestResult:
    statistic: float
    df: int
    p_value: float
    kind: str  # "LR" or "Wald"


@dataclass
class FitOptions:
    """Controls for :func:`fit_bw` and :func:`fit_submodel`.

    ``gtol`` applies to the infinity norm of the gradient of the mean
    log-likelihood with respect to the log-parameters.
    """

    gtol: float = 1e-6
    step_tol: float = 1e-10
    max_iter: int = 500
    max_step: float = 5.0
    multistart: str = "auto"  # "auto", "always" or "never"
    nested_starts: bool = True
    attach_covariance: bool = True


@dataclass
class FitResult:
    params: BwParams
    log_likelihood: float
    iterations: int
    converged: bool
    gradient_norm: float
    covariance: np.ndarray = None
    model: SpecialCase = SpecialCase.BETA_WEIBULL
    free: tuple = PARAM_NAMES
    boundary: bool = False
    message: str = ""
    n: int = 0
    trace: list = field(default_factory=list, repr=False)

    def standard_errors(self):
        if self.covariance is None:
            return None
        return np.sqrt(np.diag(self.covariance))


def _data_array(data):
    if isinstance(data, Dataset):
        return data.as_array()
    return Dataset(tuple(np.ravel(data))).as_array()


def log_likelihood(p, data):
    """Log-likelihood of ``data`` at ``p``; ``-inf`` when a term underflows."""
    y = _data_array(data)
    with np.errstate(over="ignore", invalid="ignore"):
        return float(np.sum(logpdf(p, y)))


def score_contributions(p, data):
    """Per-observation score vectors, shape ``(n, 4)``.

    The ``(a - 1)`` terms carry ``z/(e^z - 1)`` with ``z = (lam y)^c``, so
    they stay finite both when ``e^{-z}`` rounds to 1 and when ``z``
    overflows.
    """
    y = _data_array(data)
    a, b, c, lam = p.as_tuple()
    llam = np.log(lam * y)
    lz = c * llam
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        z = np.exp(lz)
        ratio = np.where(z == 0, 1.0, z / np.expm1(z))
    ratio = np.nan_to_num(ratio, nan=0.0)
    psab = _k.digamma(a + b)
    s_a = psab - _k.digamma(a) + _log1mexp(z, lz)
    s_b = psab - _k.digamma(b) - z
    s_c = 1.0 / c + llam - b * z * llam + (a - 1.0) * llam * ratio
    s_l = c / lam - b * c * z / lam + c * (a - 1.0) * ratio / lam
    return np.column_stack([s_a, s_b, s_c, s_l])


def score(p, data):
    """Gradient of the log-likelihood in (a, b, c, lam)."""
    return score_contributions(p, data).sum(axis=0)


# optimization


def _assemble(theta, free, pinned):
    vals = dict(pinned)
    for name, t in zip(free, theta):
        vals[name] = math.exp(t)
    return BwParams(vals["a"], vals["b"], vals["c"], vals["lam"])


class _Objective:
    """Mean negative log-likelihood in log-parameters, with gradient."""

    def __init__(self, y, free, pinned):
        self.y = y
        self.n = len(y)
        self.free = free
        self.pinned = pinned
        self.idx = [PARAM_NAMES.index(f) for f in free]

    def value(self, theta):
        if np.any(np.abs(theta) > 700):
            return math.inf
        try:
            p = _assemble(theta, self.free, self.pinned)
        except DomainError:
            return math.inf
        ll = log_likelihood(p, self.y)
        return -ll / self.n if math.isfinite(ll) else math.inf

    def grad(self, theta):
        p = _assemble(theta, self.free, self.pinned)
        s = score(p, self.y)[self.idx]
        vals = np.exp(theta)
        return -(s * vals) / self.n


def _bfgs(obj, theta0, opts):
    theta = np.array(theta0, dtype=float)
    f = obj.value(theta)
    if not math.isfinite(f):
        return theta, f, 0, False, math.inf, "start point has zero likelihood", []
    g = obj.grad(theta)
    k = len(theta)
    H = np.eye(k)
    trace = []
    message = "iteration cap reached"
    converged = False
    it = 0
    for it in range(1, opts.max_iter + 1):
        gnorm = float(np.max(np.abs(g)))
        trace.append((it - 1, -f * obj.n, gnorm))
        if gnorm <= opts.gtol:
            converged = True
            message = "gradient tolerance met"
            it -= 1
            break
        if np.any(np.abs(theta) > BOUNDARY_LOG):
            message = "parameter reached the boundary region"
            it -= 1
            break
        d = -H @ g
        slope = float(g @ d)
        if not slope < 0:
            H = np.eye(k)
            d = -g
            slope = float(g @ d)
        big = float(np.max(np.abs(d)))
        if big > opts.max_step:
            d *= opts.max_step / big
            slope *= opts.max_step / big
        alpha = 1.0
        while True:
            f_new = obj.value(theta + alpha * d)
            if f_new <= f + 1e-4 * alpha * slope:
                break
            alpha *= 0.5
            if alpha < 1e-20:
                break
        if alpha < 1e-20:
            if H is not None and not np.allclose(H, np.eye(k)):
                H = np.eye(k)  # retry once along steepest descent
                continue
            message = "line search failed"
            break
        s = alpha * d
        theta_new = theta + s
        g_new = obj.grad(theta_new)
        yv = g_new - g
        sy = float(s @ yv)
        if sy > 1e-12 * float(np.linalg.norm(s) * np.linalg.norm(yv)):
            rho = 1.0 / sy
            I = np.eye(k)
            V = I - rho * np.outer(s, yv)
            H = V @ H @ V.T + rho * np.outer(s, s)
        theta, f, g = theta_new, f_new, g_new
        if float(np.linalg.norm(s)) <= opts.step_tol:
            gnorm = float(np.max(np.abs(g)))
            converged = gnorm <= opts.gtol
            message = "step tolerance met"
            break
    gnorm = float(np.max(np.abs(g)))
    if gnorm <= opts.gtol:
        converged = True
    trace.append((it, -f * obj.n, gnorm))
    return theta, f, it, converged, gnorm, message, trace


def _weibull_start(y):
    ly = np.log(y)
    sd = float(np.std(ly, ddof=1)) if len(y) > 1 else 0.0
    c0 = math.pi / (math.sqrt(6.0) * sd) if sd > 0 else 1.0
    llam0 = -float(np.mean(ly)) - _EULER / c0
    return c0, math.exp(llam0)


def _result_from(theta, f, it, conv, gnorm, msg, trace, model, free, pinned, n, opts):
    p = _assemble(theta, free, pinned)
    boundary = bool(np.any(np.abs(theta) > BOUNDARY_LOG))
    res = FitResult(params=p, log_likelihood=-f * n, iterations=it,
                    converged=conv and not boundary, gradient_norm=gnorm, model=model,
                    free=free, boundary=boundary, message=msg, n=n, trace=trace)
    return res


def _attach_covariance(res, opts):
    if not opts.attach_covariance or res.boundary or not res.converged:
        return res
    info = fisher_info(res.params)
    res.covariance = info.covariance(res.n, res.free)
    return res


def _run(y, model, start, opts):
    free, pinned = _SUBMODELS[model]
    vals = dict(zip(PARAM_NAMES, start.as_tuple()))
    theta0 = np.log([vals[f] for f in free])
    obj = _Objective(y, free, pinned)
    out = _bfgs(obj, theta0, opts)
    return _result_from(*out, model, free, pinned, len(y), opts)


def _better(r1, r2):
    """True when r1 should replace r2 as the reported optimum."""
    l1, l2 = r1.log_likelihood, r2.log_likelihood
    if not math.isfinite(l2):
        return math.isfinite(l1)
    if l1 > l2 + 1e-12 * max(1.0, abs(l2)):
        return True
    if abs(l1 - l2) <= 1e-12 * max(1.0, abs(l2)):
        return r1.params.as_tuple() < r2.params.as_tuple()
    return False


def _good(r):
    return r.converged and not r.boundary


def _opts(opts):
    return FitOptions() if opts is None else opts


def fit_submodel(data, model, init=None, opts=None):
    """Maximum likelihood over a sub-model.

    Parameters
    ----------
    data : Dataset or array_like
    model : SpecialCase
        STANDARD_WEIBULL (a = b = 1), EXPONENTIATED_WEIBULL (b = 1) or
        BETA_EXPONENTIAL (c = 1). BETA_WEIBULL is passed to :func:`fit_bw`.
    init : BwParams, optional
        Start; pinned components are overwritten.
    """
    opts = _opts(opts)
    if model is SpecialCase.BETA_WEIBULL:
        return fit_bw(data, init, opts)
    if model not in _SUBMODELS:
        raise DomainError(f"cannot fit sub-model {model}")
    y = _data_array(data)
    _, pinned = _SUBMODELS[model]
    if init is None:
        if model is SpecialCase.BETA_EXPONENTIAL:
            init = BwParams(1.0, 1.0, 1.0, 1.0 / float(np.mean(y)))
        else:
            c0, l0 = _weibull_start(y)
            if model is SpecialCase.EXPONENTIATED_WEIBULL:
                w = _run(y, SpecialCase.STANDARD_WEIBULL, BwParams(1, 1, c0, l0), opts)
                c0, l0 = w.params.c, w.params.lam
            init = BwParams(1.0, 1.0, c0, l0)
    init = init.replace(**pinned)
    res = _run(y, model, init, opts)
    return _attach_covariance(res, opts)


def _grid_starts(c_ref, lam_ref):
    starts = []
    for a0 in (0.1, 1.0, 5.0):
        for b0 in (0.1, 1.0, 5.0):
            for cs in (0.5, 1.0, 2.0):
                # keep the Weibull-scale location roughly fixed
                c0 = c_ref * cs
                lam0 = lam_ref * b0 ** (1.0 / c0)
                starts.append(BwParams(a0, b0, c0, lam0))
    return starts


def fit_bw(data, init=None, opts=None):
    """Maximum likelihood for all four parameters.

    Without ``init`` the Weibull sub-model is fitted first and the search
    starts at ``(0.9, 0.9, c_W, lam_W)``. Starts from the Weibull,
    exponentiated Weibull and beta exponential optima are added when
    ``opts.nested_starts`` is set, so the reported maximum is never below
    a sub-model maximum. If no start converges to an interior point (or
    ``opts.multistart == "always"``) a 3 x 3 x 3 grid over
    ``(a, b) in {0.1, 1, 5}^2`` and ``c`` scaled by ``{0.5, 1, 2}`` is run.
    The best log-likelihood wins, ties going to the lexicographically
    smaller parameter vector.

    Returns
    -------
    FitResult
        ``covariance`` is ``K^-1 / n`` from :func:`fisher_info`; it is
        omitted when the fit did not converge or any log-parameter exceeds
        25 in magnitude (``boundary`` is then set).
    """
    opts = _opts(opts)
    y = _data_array(data)
    bw = SpecialCase.BETA_WEIBULL
    candidates = []
    if init is not None:
        candidates.append(_run(y, bw, init, opts))
        c_ref, lam_ref = init.c, init.lam
    else:
        sub_opts = FitOptions(**{**opts.__dict__, "attach_covariance": False})
        w = fit_submodel(y, SpecialCase.STANDARD_WEIBULL, opts=sub_opts)
        c_ref, lam_ref = w.params.c, w.params.lam
        candidates.append(_run(y, bw, BwParams(0.9, 0.9, c_ref, lam_ref), opts))
        if opts.nested_starts:
            subs = [w]
            for m in (SpecialCase.EXPONENTIATED_WEIBULL, SpecialCase.BETA_EXPONENTIAL):
                subs.append(fit_submodel(y, m, opts=sub_opts))
            for s in subs:
                if math.isfinite(s.log_likelihood) and np.all(np.abs(np.log(s.params.as_array())) < BOUNDARY_LOG):
                    candidates.append(_run(y, bw, s.params, opts))
    if opts.multistart == "always" or (
            opts.multistart == "auto" and not any(_good(r) for r in candidates)):
        for st in _grid_starts(c_ref, lam_ref):
            candidates.append(_run(y, bw, st, opts))
    best = candidates[0]
    for r in candidates[1:]:
        if _better(r, best):
            best = r
    return _attach_covariance(best, opts)


# information


def _combined(b, a, e):
    v, _, _ = _k.st_integral(1, 0.0, b, a, e, _INFO_RTOL, _INFO_EVALS)
    return v


def _t(d, b, a, e):
    if d + a <= 1.0:
        raise DivergenceError(
            f"component integral T({d}, {b}, {a}, {e}) diverges; use the combined route"
        )
    v, _, _ = _k.st_integral(0, d, b, a, e, _INFO_RTOL, _INFO_EVALS)
    return v


_INFO_RTOL = 1e-11
_INFO_EVALS = 10**6


def fisher_info(p, route="auto"):
    """Expected information per observation at ``p``.

    Parameters
    ----------
    p : BwParams
    route : {"auto", "combined", "separate"}
        How ``kappa_cc`` and ``kappa_c,lam`` are evaluated. Their printed
        form is a combination of four T integrals with ``a - 2`` in the
        third slot, some divergent for ``a <= 1``. ``combined`` integrates
        the bracket as one integrand,
        ``(log x)^e x e^{-bx} (1-e^{-x})^(a-3) h(x)`` with
        ``h = (1-a)(1-(1+x)e^{-x}) + (a+b-1)(1-e^{-x})^2 = O(x^2)``,
        which converges for every ``a > 0``. ``auto`` uses it for
        ``a <= 2``.

    Raises
    ------
    DivergenceError
        For ``route="separate"`` when a component integral diverges.
    """
    if route not in ("auto", "combined", "separate"):
        raise DomainError(f"unknown route {route!r}")
    a, b, c, lam = p.as_tuple()
    B = math.exp(_k.ln_beta(a, b))
    tg = _k.trigamma
    K = np.empty((4, 4))
    K[0, 0] = tg(a) - tg(a + b)
    K[0, 1] = -tg(a + b)
    K[0, 2] = -_t(2, b + 1, a - 1, 1) / (c * B)
    K[0, 3] = -c * _t(2, b + 1, a - 1, 0) / (lam * B)
    K[1, 1] = tg(b) - tg(a + b)
    K[1, 2] = _t(2, b, a, 1) / (c * B)
    K[1, 3] = c * _t(2, b, a, 0) / (lam * B)
    use_comb = route == "combined" or (route == "auto" and a <= 2.0)
    if use_comb:
        K[2, 2] = 1.0 / c ** 2 + _combined(b, a, 2) / (c ** 2 * B)
        K[2, 3] = _combined(b, a, 1) / (lam * B)
    else:
        def bracket(e):
            return ((a - 1) * _t(3, b + 1, a - 2, e) + b * _t(2, b, a - 2, e)
                    - (a + 2 * b - 1) * _t(2, b + 1, a - 2, e)
                    + (a + b - 1) * _t(2, b + 2, a - 2, e))
        K[2, 2] = 1.0 / c ** 2 + bracket(2) / (c ** 2 * B)
        K[2, 3] = bracket(1) / (lam * B)
    if a == 1.0:
        K[3, 3] = c ** 2 / lam ** 2
    else:
        K[3, 3] = c ** 2 / lam ** 2 + c ** 2 * (a - 1) / (lam ** 2 * B) * _t(3, b + 1, a - 2, 0)
    for i in range(4):
        for j in range(i):
            K[i, j] = K[j, i]
    return InfoMatrix(K)


def observed_info(p, data, step=1e-5):
    """Observed information per observation by central differences of the
    analytic score. Reported as a diagnostic only."""
    y = _data_array(data)
    x0 = p.as_array()
    H = np.empty((4, 4))
    for j in range(4):
        h = step * x0[j]
        xp = x0.copy()
        xm = x0.copy()
        xp[j] += h
        xm[j] -= h
        H[:, j] = (score(BwParams.from_sequence(xp), y)
                   - score(BwParams.from_sequence(xm), y)) / (2 * h)
    return -0.5 * (H + H.T) / len(y)


# tests


def _chi2_sf(x, df):
    return float(stats.chi2.sf(x, df))


def lr_test(full, restricted, df):
    """Likelihood ratio test ``2 (l_full - l_restricted)`` on ``df`` degrees.

    Raises
    ------
    NegativeStatisticError
        If the full model's maximum is below the restricted one by more
        than 1e-8, which means the full optimization failed.
    """
    if not (isinstance(df, numbers.Integral) and df >= 1):
        raise DomainError("df must be a positive integer")
    diff = full.log_likelihood - restricted.log_likelihood
    if diff < -1e-8:
        raise NegativeStatisticError(
            f"full model log-likelihood below the restricted one by {-diff:.3g}"
        )
    w = max(0.0, 2.0 * diff)
    return TestResult(w, int(df), _chi2_sf(w, df), "LR")


def wald_test(fit, pinned, covariance=None):
    """Wald statistic for ``theta_S = theta_0`` over the pinned subset.

    Parameters
    ----------
    fit : FitResult
    pinned : dict
        Parameter name to null value, e.g. ``{"a": 1, "b": 1}``.
    covariance : array_like, optional
        Covariance of ``fit.free`` to use instead of ``fit.covariance``.

    Raises
    ------
    SingularInformationError
        If the covariance sub-block is singular.
    """
    if not pinned:
        raise DomainError("pinned must name at least one parameter")
    cov = fit.covariance if covariance is None else np.asarray(covariance, dtype=float)
    if cov is None:
        raise DomainError("fit carries no covariance (boundary or non-converged fit)")
    names = list(pinned)
    try:
        idx = [fit.free.index(nm) for nm in names]
    except ValueError as exc:
        raise DomainError(f"pinned parameters must be free in the fit: {names}") from exc
    est = np.array([getattr(fit.params, nm) for nm in names])
    null = np.array([float(pinned[nm]) for nm in names])
    d = est - null
    sub = cov[np.ix_(idx, idx)]
    try:
        w = float(d @ np.linalg.solve(sub, d))
    except np.linalg.LinAlgError as exc:
        raise SingularInformationError("covariance sub-block is singular") from exc
    if not math.isfinite(w):
        raise SingularInformationError("covariance sub-block is singular")
    w = max(w, 0.0)
    return TestResult(w, len(names), _chi2_sf(w, len(names)), "Wald")
