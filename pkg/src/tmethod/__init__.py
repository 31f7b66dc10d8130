"""Extreme value fits of block maxima through monotone transformations.

The T-method fits G_0((T(x | beta) - b) / a) to block maxima, with the
transform family chosen so that the transformed tail is close to
exponential; the classical GEV fit is the identity-transform special case.
"""
from .distributions import DistributionSpec, Kind
from .errors import (ConvergenceError, DataFileError, DomainError, ExperimentError,
                     InsufficientDataError, IntegrationError, NotApplicableError,
                     ParameterError, UnderflowError)
from .fitting import (FitConfig, FitResult, TMethodParams, extrapolate_quantile,
                      fit_classical, fit_tmethod, loglik_classical, loglik_tmethod)
from .gev import GevParams, gev_cdf, gev_logpdf, gev_quantile, h_hat
from .transforms import FamilyKind, TransformFamily, forward, inverse, suggest_family

__version__ = "0.1.0"
