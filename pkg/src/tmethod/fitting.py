"""Maximum-likelihood fits of the classical GEV model and of the T-method.

The T-method models block maxima X as G_0((T(X | beta) - b) / a) with the
Gumbel shape held at zero, and estimates (beta, a, b) jointly. With T the
identity it is exactly the Gumbel fit.

Both fits run a Nelder-Mead simplex in standardized coordinates:

* classical: (gamma, log(a / a0), (b - b0) / a0)
* T-method:  (log beta, log(a / a_ref), (b - b_ref) / a_ref)

where (a0, b0) are Gumbel moment estimates on the raw data and
(a_ref, b_ref) are the same estimates on T(data | beta), recomputed for each
beta so that location and scale stay O(1) while beta moves.
"""
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np
from scipy import optimize

from .errors import ConvergenceError, DomainError
from .gev import GevParams, gev_cdf, gev_isf, gev_logpdf, gev_sf
from .rng import make_rng
from .transforms import (FamilyKind, TransformFamily, check_domain, inverse,
                         log_derivative)

EULER_GAMMA = 0.5772156649015329
MIN_SAMPLE = 20


@dataclass(frozen=True)
class FitConfig:
    restarts: int = 5
    tolerance: float = 1e-10
    max_iter: int = 10_000
    jitter: float = 0.2
    seed: int = 0
    initial_step: float = 0.1


@dataclass(frozen=True)
class TMethodParams:
    family: TransformFamily
    scale: float
    location: float

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError(f"scale must be > 0, got {self.scale}")

    @property
    def beta(self):
        return self.family.beta


@dataclass
class FitResult:
    params: Union[GevParams, TMethodParams]
    loglik: float
    converged: bool
    iterations: int
    n_restarts_used: int
    sample_size: int
    small_sample: bool = False
    message: str = ""
    start_logliks: tuple = field(default=(), repr=False)

    @property
    def method(self):
        return "classical" if isinstance(self.params, GevParams) else "tmethod"

    def quantile(self, exceedance):
        """Model quantile at upper-tail probability ``exceedance``."""
        return extrapolate_quantile(self, exceedance)

    def cdf(self, x):
        return model_cdf(self.params, x)

    def sf(self, x):
        return model_sf(self.params, x)

    def to_dict(self):
        p = self.params
        out = {"method": self.method}
        if isinstance(p, GevParams):
            out.update(gamma=p.gamma, a=p.scale, b=p.location)
        else:
            out.update(family=p.family.kind.value, beta=p.family.beta, a=p.scale, b=p.location)
        out.update(loglik=self.loglik, converged=bool(self.converged),
                   iterations=int(self.iterations), n_restarts_used=int(self.n_restarts_used),
                   sample_size=int(self.sample_size), small_sample=bool(self.small_sample))
        if self.message:
            out["message"] = self.message
        return out


# --- likelihoods -----------------------------------------------------------

def _as_data(data):
    x = np.asarray(data, dtype=float).ravel()
    if x.size == 0:
        raise ValueError("data must be nonempty")
    return x


def loglik_classical(params, data):
    """Sum of log GEV densities of the rescaled data, including the -log a Jacobian."""
    x = _as_data(data)
    return _loglik_classical(params.gamma, params.scale, params.location, x)


def _loglik_classical(gamma, a, b, x):
    terms = gev_logpdf(gamma, (x - b) / a) - math.log(a)
    return float(np.sum(terms))


def loglik_tmethod(params, data):
    """Sum over the data of log G_0'((T(x) - b)/a) + log T'(x) - log a."""
    x = _as_data(data)
    check_domain(params.family, x)
    return _loglik_tmethod(params.family, params.scale, params.location, x)


def _transform(family, x):
    if family.kind is FamilyKind.IDENTITY:
        return x
    if family.kind is FamilyKind.POWER:
        return x ** family.beta
    return np.log(x) ** family.beta


def _loglik_tmethod(family, a, b, x):
    y = _transform(family, x)
    terms = gev_logpdf(0.0, (y - b) / a) + log_derivative(family, x) - math.log(a)
    return float(np.sum(terms))


# --- model cdf and extrapolation -------------------------------------------

def model_cdf(params, x):
    x_arr = np.asarray(x, dtype=float)
    if isinstance(params, GevParams):
        out = gev_cdf(params.gamma, (x_arr - params.location) / params.scale)
    else:
        fam = params.family
        inside = x_arr > fam.domain_lower
        y = _transform(fam, np.where(inside, x_arr, fam.domain_lower + 1.0))
        out = np.where(inside, gev_cdf(0.0, (y - params.location) / params.scale), 0.0)
    return float(out) if np.ndim(x) == 0 else out


def model_sf(params, x):
    x_arr = np.asarray(x, dtype=float)
    if isinstance(params, GevParams):
        out = gev_sf(params.gamma, (x_arr - params.location) / params.scale)
    else:
        fam = params.family
        inside = x_arr > fam.domain_lower
        y = _transform(fam, np.where(inside, x_arr, fam.domain_lower + 1.0))
        out = np.where(inside, gev_sf(0.0, (y - params.location) / params.scale), 1.0)
    return float(out) if np.ndim(x) == 0 else out


def extrapolate_quantile(fit, exceedance):
    """Value x with model probability ``exceedance`` of being exceeded.

    ``fit`` is a FitResult or a bare parameter object. For the T-method the
    Gumbel quantile is mapped back through the inverse transform; a level
    whose Gumbel quantile falls below the range of T raises DomainError.
    """
    params = fit.params if isinstance(fit, FitResult) else fit
    if isinstance(params, GevParams):
        z = gev_isf(params.gamma, exceedance)
        return params.location + params.scale * z
    y = params.location + params.scale * np.asarray(gev_isf(0.0, exceedance))
    try:
        out = inverse(params.family, y)
    except DomainError as exc:
        raise DomainError(f"extrapolated level is outside the transform range: {exc}",
                          value=exc.value, index=exc.index) from None
    return float(out) if np.ndim(exceedance) == 0 else out


# --- optimizer --------------------------------------------------------------

def gumbel_moments(values):
    """Moment estimates (a, b) of a Gumbel law: a = sqrt(6) sd / pi, b = mean - euler * a."""
    sd = float(np.std(values))
    a = math.sqrt(6.0) * sd / math.pi
    return a, float(np.mean(values)) - EULER_GAMMA * a


def _check_fit_data(data):
    x = _as_data(data)
    if not np.all(np.isfinite(x)):
        raise ValueError("data contain non-finite values")
    small = x.size < MIN_SAMPLE
    if small:
        warnings.warn(f"fitting {x.size} points (< {MIN_SAMPLE}); estimates are unreliable",
                      stacklevel=3)
    if x.size < 2 or np.ptp(x) == 0.0:
        raise ConvergenceError("data have zero variance; the likelihood is unbounded")
    return x, small


def _nelder_mead(objective, z0, config):
    z0 = np.asarray(z0, dtype=float)
    simplex = np.vstack([z0] + [z0 + config.initial_step * e for e in np.eye(len(z0))])
    res = optimize.minimize(
        objective, z0, method="Nelder-Mead",
        options=dict(initial_simplex=simplex, xatol=config.tolerance, fatol=1e-8,
                     maxiter=config.max_iter, maxfev=4 * config.max_iter),
    )
    return res


def _multistart(objective, starts, config):
    runs = [_nelder_mead(objective, z0, config) for z0 in starts]
    start_values = tuple(-float(objective(np.asarray(z0))) for z0 in starts)
    finite = [r for r in runs if np.isfinite(r.fun)]
    converged = [r for r in finite if r.status == 0]
    pool = converged or finite or runs
    best = min(pool, key=lambda r: r.fun)
    return best, bool(converged) and best.status == 0, start_values, len(runs)


def _jitter_starts(base, jitter_fn, config):
    rng = make_rng(config.seed)
    starts = [np.asarray(base, dtype=float)]
    for _ in range(max(config.restarts, 1) - 1):
        starts.append(jitter_fn(np.asarray(base, dtype=float), rng))
    return starts


def _finish(params, loglik, res, ok, start_values, n_starts, m, small, label):
    result = FitResult(params=params, loglik=loglik, converged=ok and np.isfinite(loglik),
                       iterations=int(res.nit), n_restarts_used=n_starts, sample_size=m,
                       small_sample=small, start_logliks=start_values,
                       message="" if ok else f"{label}: no start converged ({res.message})")
    if not result.converged:
        raise ConvergenceError(result.message or f"{label} fit did not converge", best=result)
    return result


def fit_classical(data, config=None, fix_gamma=None):
    """Maximum-likelihood GEV fit. ``fix_gamma`` pins the shape (0 gives a Gumbel fit)."""
    config = config or FitConfig()
    x, small = _check_fit_data(data)
    a0, b0 = gumbel_moments(x)

    if fix_gamma is None:
        def unpack(z):
            return float(z[0]), a0 * math.exp(z[1]), b0 + a0 * z[2]

        def jitter(z, rng):
            u = rng.uniform(-config.jitter, config.jitter, 3)
            return z + np.array([0.5 * u[0], math.log1p(u[1]), u[2]])
        base = [0.0, 0.0, 0.0]
    else:
        g_fixed = float(fix_gamma)

        def unpack(z):
            return g_fixed, a0 * math.exp(z[0]), b0 + a0 * z[1]

        def jitter(z, rng):
            u = rng.uniform(-config.jitter, config.jitter, 2)
            return z + np.array([math.log1p(u[0]), u[1]])
        base = [0.0, 0.0]

    def objective(z):
        g, a, b = unpack(z)
        val = _loglik_classical(g, a, b, x)
        return -val if np.isfinite(val) else np.inf

    starts = _jitter_starts(base, jitter, config)
    res, ok, start_values, n = _multistart(objective, starts, config)
    g, a, b = unpack(res.x)
    params = GevParams(g, a, b)
    return _finish(params, loglik_classical(params, x), res, ok, start_values, n,
                   x.size, small, "classical")


def fit_tmethod(data, family_kind, config=None):
    """Maximum-likelihood T-method fit with the Gumbel shape fixed at zero."""
    config = config or FitConfig()
    kind = FamilyKind(family_kind)
    x, small = _check_fit_data(data)
    check_domain(TransformFamily(kind), x)

    if kind is FamilyKind.IDENTITY:
        # no beta: the parameterization and objective coincide with the Gumbel fit
        fam = TransformFamily(kind)
        a0, b0 = gumbel_moments(x)

        def unpack(z):
            return fam, a0 * math.exp(z[0]), b0 + a0 * z[1]

        def jitter(z, rng):
            u = rng.uniform(-config.jitter, config.jitter, 2)
            return z + np.array([math.log1p(u[0]), u[1]])
        base = [0.0, 0.0]
    else:
        def unpack(z):
            fam = TransformFamily(kind, math.exp(z[0]))
            a_ref, b_ref = gumbel_moments(_transform(fam, x))
            return fam, a_ref * math.exp(z[1]), b_ref + a_ref * z[2]

        def jitter(z, rng):
            u = rng.uniform(-config.jitter, config.jitter, 3)
            return z + np.array([math.log1p(u[0]), math.log1p(u[1]), u[2]])
        base = [0.0, 0.0, 0.0]

    def objective(z):
        try:
            fam, a, b = unpack(z)
        except (OverflowError, ValueError):
            return np.inf
        if not (np.isfinite(a) and a > 0 and np.isfinite(b)):
            return np.inf
        with np.errstate(over="ignore", invalid="ignore"):
            val = _loglik_tmethod(fam, a, b, x)
        return -val if np.isfinite(val) else np.inf

    starts = _jitter_starts(base, jitter, config)
    res, ok, start_values, n = _multistart(objective, starts, config)
    fam, a, b = unpack(res.x)
    params = TMethodParams(fam, a, b)
    return _finish(params, loglik_tmethod(params, x), res, ok, start_values, n,
                   x.size, small, "tmethod")


def standardized_gradient(fit, data, step=1e-5):
    """Central-difference gradient of the log-likelihood in standardized coordinates.

    Coordinates are (gamma or log beta, log a, b / a) around the fitted point,
    so every component is measured on an O(1) scale.
    """
    x = _as_data(data)
    p = fit.params if isinstance(fit, FitResult) else fit
    if isinstance(p, GevParams):
        def f(z):
            return _loglik_classical(p.gamma + z[0], p.scale * math.exp(z[1]),
                                     p.location + p.scale * z[2], x)
    elif p.family.kind is FamilyKind.IDENTITY:
        def f(z):
            return _loglik_tmethod(p.family, p.scale * math.exp(z[1]),
                                   p.location + p.scale * z[2], x)
    else:
        def f(z):
            fam = p.family.with_beta(p.family.beta * math.exp(z[0]))
            # hold the standardized location/scale fixed relative to T(x | beta)
            a_ref0, b_ref0 = gumbel_moments(_transform(p.family, x))
            a_ref, b_ref = gumbel_moments(_transform(fam, x))
            za, zb = p.scale / a_ref0, (p.location - b_ref0) / a_ref0
            return _loglik_tmethod(fam, a_ref * za * math.exp(z[1]),
                                   b_ref + a_ref * zb + a_ref * za * z[2], x)
    grad = np.zeros(3)
    for k in range(3):
        e = np.zeros(3)
        e[k] = step
        grad[k] = (f(e) - f(-e)) / (2 * step)
    return grad
