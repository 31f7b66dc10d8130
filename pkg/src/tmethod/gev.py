"""Generalized extreme value family G_gamma and the second-order correction H.

All functions take the standardized coordinate x = (value - location) / scale.
Shapes with ``|gamma| < SMALL_GAMMA`` are routed to a second-order expansion
around the Gumbel case so that the family is continuous at gamma = 0.
"""
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import DomainError, IntegrationError, ParameterError

SMALL_GAMMA = 1e-8


@dataclass(frozen=True)
class GevParams:
    gamma: float
    scale: float
    location: float

    def __post_init__(self):
        if not self.scale > 0:
            raise ParameterError(f"GEV scale must be > 0, got {self.scale}")


def _as_out(out, like):
    return float(out) if np.ndim(like) == 0 else out


def _log_term(gamma, x):
    """log(1 + gamma x) / gamma and the validity mask 1 + gamma x > 0."""
    x = np.asarray(x, dtype=float)
    if gamma == 0.0:
        return x, np.ones(x.shape, dtype=bool)
    gx = gamma * x
    ok = gx > -1.0
    if abs(gamma) < SMALL_GAMMA:
        return x - 0.5 * gamma * x * x, ok
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.log1p(np.where(ok, gx, 0.0)) / gamma, ok


def gev_cdf(gamma, x):
    """G_gamma(x) = exp(-(1 + gamma x)^(-1/gamma)); exp(-e^-x) at gamma = 0."""
    gamma = float(gamma)
    s, ok = _log_term(gamma, x)
    with np.errstate(over="ignore"):
        out = np.exp(-np.exp(-s))
    if gamma > 0:
        out = np.where(ok, out, 0.0)
    elif gamma < 0:
        out = np.where(ok, out, 1.0)
    return _as_out(out, x)


def gev_sf(gamma, x):
    """1 - G_gamma(x) without cancellation in the upper tail."""
    gamma = float(gamma)
    s, ok = _log_term(gamma, x)
    with np.errstate(over="ignore"):
        out = -np.expm1(-np.exp(-s))
    if gamma > 0:
        out = np.where(ok, out, 1.0)
    elif gamma < 0:
        out = np.where(ok, out, 0.0)
    return _as_out(out, x)


def gev_logpdf(gamma, x):
    """log G_gamma'(x); ``-inf`` outside the support 1 + gamma x > 0."""
    gamma = float(gamma)
    x_arr = np.asarray(x, dtype=float)
    if gamma == 0.0:
        with np.errstate(over="ignore"):
            out = -x_arr - np.exp(-x_arr)
        return _as_out(out, x)
    s, ok = _log_term(gamma, x_arr)
    with np.errstate(over="ignore", invalid="ignore"):
        # log density = -(1 + gamma) * s - exp(-s), with s = log1p(gamma x)/gamma
        out = -(1.0 + gamma) * s - np.exp(-s)
    out = np.where(ok, out, -np.inf)
    return _as_out(out, x)


def gev_pdf(gamma, x):
    with np.errstate(under="ignore"):
        return _as_out(np.exp(gev_logpdf(gamma, x)), x)


def _check_u(u, what="probability"):
    u_arr = np.asarray(u, dtype=float)
    bad = ~((u_arr > 0) & (u_arr < 1))
    if np.any(bad):
        v = u_arr[bad].flat[0] if u_arr.ndim else float(u_arr)
        raise DomainError(f"{what} must lie in (0, 1), got {v}", value=v)
    return u_arr


def _quantile_from_neglog(gamma, y):
    # y = -log(u) > 0; the quantile is (y^-gamma - 1)/gamma
    ly = np.log(y)
    if gamma == 0.0:
        return -ly
    if abs(gamma) < SMALL_GAMMA:
        return -ly + 0.5 * gamma * ly * ly
    return np.expm1(-gamma * ly) / gamma


def gev_quantile(gamma, u):
    """G_gamma^{-1}(u) for u in (0, 1)."""
    u_arr = _check_u(u)
    return _as_out(_quantile_from_neglog(float(gamma), -np.log(u_arr)), u)


def gev_isf(gamma, q):
    """Upper-tail quantile: G_gamma^{-1}(1 - q), accurate for tiny q."""
    q_arr = _check_u(q, "exceedance probability")
    return _as_out(_quantile_from_neglog(float(gamma), -np.log1p(-q_arr)), q)


def _h_closed(gamma, rho, s):
    if gamma == 0.0 and rho == -1.0:
        return np.exp(-s) + s - 1.0
    if gamma == 0.0 and rho == 0.0:
        return 0.5 * s * s
    return None


def _inner(rho, u):
    # integral_0^u exp(rho s) ds, itself by quadrature
    val, _ = integrate.quad(lambda s: np.exp(rho * s), 0.0, u, epsabs=1e-12, epsrel=1e-12)
    return val


def _h_quad(gamma, rho, s):
    if gamma >= 0:
        val, err = integrate.quad(lambda u: np.exp(gamma * u) * _inner(rho, u), 0.0, s,
                                  epsabs=1e-10, epsrel=1e-10, limit=200)
        return val
    if rho > 0 and gamma + rho >= 0:
        raise IntegrationError(f"H diverges for gamma={gamma}, rho={rho}: need gamma + rho < 0")
    with np.errstate(over="ignore"):
        val, err = integrate.quad(lambda u: np.exp(gamma * u) * _inner(rho, u), s, np.inf,
                                  epsabs=1e-10, epsrel=1e-10, limit=200)
    if not np.isfinite(val) or err > 1e-8:
        raise IntegrationError(f"H integral failed for gamma={gamma}, rho={rho} (err={err:g})")
    return -val


def h_hat(gamma, rho, x, method="auto"):
    """Second-order shape function H_gamma at the standardized point ``x``.

    This is H-hat composed with G_gamma, i.e. H_gamma(-log(-log G_gamma(x))).
    For (gamma, rho) = (0, -1) and (0, 0) the closed forms e^-x + x - 1 and
    x^2/2 are used unless ``method="quad"``; every other pair is integrated
    numerically with nested adaptive quadrature.
    """
    gamma, rho = float(gamma), float(rho)
    x_arr = np.asarray(x, dtype=float)
    s, ok = _log_term(gamma, x_arr)
    if not np.all(ok):
        raise DomainError("x outside the GEV support")
    if method == "auto":
        closed = _h_closed(gamma, rho, s)
        if closed is not None:
            return _as_out(closed, x)
    elif method != "quad":
        raise ValueError(f"unknown method {method!r}")
    out = np.vectorize(lambda v: _h_quad(gamma, rho, v), otypes=[float])(s)
    return _as_out(out, x)
