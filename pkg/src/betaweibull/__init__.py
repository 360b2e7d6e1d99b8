"""Beta Weibull distribution: density, distribution function, moments,
maximum likelihood fitting, expected information and LR/Wald tests."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .core import (BwParams, SpecialCase, beta_to_bw, cdf, classify, hazard,
                   logpdf, logpdf_logx, pdf, quantile, sample, survival)
from .errors import (ConvergenceError, DivergenceError, DomainError,
                     NegativeStatisticError, SingularInformationError)
from .inference import (Dataset, FitOptions, FitResult, InfoMatrix, TestResult,
                        fisher_info, fit_bw, fit_submodel, log_likelihood,
                        lr_test, observed_info, score, wald_test)
from .moments import (kurtosis, mgf, moment, moment_kc, s_integral, skewness,
                      t_integral)

__all__ = [
    "BACKEND",
    "BwParams",
    "SpecialCase",
    "Dataset",
    "FitOptions",
    "FitResult",
    "InfoMatrix",
    "TestResult",
    "ConvergenceError",
    "DivergenceError",
    "DomainError",
    "NegativeStatisticError",
    "SingularInformationError",
    "beta_to_bw",
    "cdf",
    "classify",
    "fisher_info",
    "fit_bw",
    "fit_submodel",
    "hazard",
    "kurtosis",
    "log_likelihood",
    "logpdf",
    "logpdf_logx",
    "lr_test",
    "mgf",
    "moment",
    "moment_kc",
    "observed_info",
    "pdf",
    "quantile",
    "s_integral",
    "sample",
    "score",
    "skewness",
    "survival",
    "t_integral",
    "wald_test",
]
