"""Convergence diagnostics for block maxima of a law F.

Everything is driven by the auxiliary function j(x) = F^{-1}(exp(-1/x)),
evaluated through the upper-tail quantile so that j stays accurate for
large x. Derivatives of j are numerical, so any law with a quantile works.
"""
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np
from scipy import special

from . import distributions as D
from ._numerics import golden_section_max, richardson_derivative
from .distributions import Kind
from .errors import DomainError, NotApplicableError, UnderflowError
from .gev import gev_cdf, gev_pdf, gev_quantile, gev_sf, h_hat

GRID_POINTS = 10_000
EDGEWORTH_GRID = 1000


def j_eval(dist, x, order=0):
    """j(x), j'(x) or j''(x) for x > 1."""
    x = float(x)
    if not x > 1:
        raise DomainError(f"j is evaluated for x > 1, got {x}", value=x)
    if order not in (0, 1, 2):
        raise ValueError(f"order must be 0, 1 or 2, got {order}")

    def j(t):
        # 1 - exp(-1/t) computed without cancellation
        try:
            return float(D.isf(dist, -np.expm1(-1.0 / t)))
        except DomainError as exc:
            raise DomainError(f"j({t}) failed for {dist.name}: {exc}", value=t) from exc

    if order == 0:
        return j(x)
    return richardson_derivative(j, x, order)


def norming(dist, n):
    """Asymptotically optimal (a_n, b_n) = (n j'(n), j(n))."""
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}", value=n)
    return n * j_eval(dist, n, 1), j_eval(dist, n, 0)


def w_rate(dist, n, gamma=0.0):
    """Edgeworth rate W(n) = n j''(n) / j'(n) - gamma + 1."""
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}", value=n)
    return n * j_eval(dist, n, 2) / j_eval(dist, n, 1) - gamma + 1.0


def _log_cdf(dist, y):
    s = np.asarray(D.sf(dist, y), dtype=float)
    c = np.asarray(D.cdf(dist, y), dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(s < 0.5, np.log1p(-s), np.log(c))


def block_cdf_rescaled(dist, n, a, b, x):
    """F(a x + b)^n."""
    y = a * np.asarray(x, dtype=float) + b
    with np.errstate(under="ignore"):
        return np.exp(n * _log_cdf(dist, y))


def block_sf_rescaled(dist, n, a, b, x):
    """1 - F(a x + b)^n without cancellation."""
    y = a * np.asarray(x, dtype=float) + b
    return -np.expm1(n * _log_cdf(dist, y))


def uniform_error(dist, n, gamma=0.0, norming_constants=None):
    """d_n = sup_x |F(a_n x + b_n)^n - G_gamma(x)|.

    The sup is taken over x with G_gamma(x) in [1e-8, 1 - 1e-8]: a grid
    uniform in probability, then golden-section refinement around the best
    cell.
    """
    a, b = norming_constants or norming(dist, n)
    u = np.linspace(1e-8, 1 - 1e-8, GRID_POINTS)
    xs = gev_quantile(gamma, u)

    def err(x):
        return float(np.abs(block_cdf_rescaled(dist, n, a, b, x) - gev_cdf(gamma, x)))

    vals = np.abs(block_cdf_rescaled(dist, n, a, b, xs) - gev_cdf(gamma, xs))
    k = int(np.argmax(vals))
    lo, hi = xs[max(k - 1, 0)], xs[min(k + 1, len(xs) - 1)]
    _, best = golden_section_max(err, lo, hi, tol=1e-12)
    return max(best, float(vals[k]))


def hazard_remainder(dist, x):
    """h(x) = -log F(x) - (-F F'' log F / F'^2 + 1)."""
    x = float(x)
    F = float(D.cdf(dist, x))
    if not 0 < F < 1:
        raise DomainError(f"F({x}) = {F} is not inside (0, 1)", value=x)
    f1 = float(D.density(dist, x, 0))
    f2 = float(D.density(dist, x, 1))
    if f1 <= 0 or not np.isfinite(f1):
        raise ZeroDivisionError(f"density vanishes at x={x}; h is singular")
    minus_log_f = -float(_log_cdf(dist, x))
    return minus_log_f * (1.0 - F * f2 / (f1 * f1)) - 1.0


def tail_ratio(dist, n, x, gamma=0.0, norming_constants=None):
    """L(x) = (1 - F(a_n x + b_n)^n) / (1 - G_gamma(x)).

    ``norming_constants`` is a pair (a, b), ``"closed"`` for the tabulated
    first-order constants, or None for the numerical (n j'(n), j(n)). The
    choice matters deep in the tail: for the exponential law a_n = n j'(n)
    is 1 - 1/(2n), and any a_n < 1 makes L grow like exp((1 - a_n) x),
    while a_n = 1, b_n = log n gives L -> 1.
    """
    if isinstance(norming_constants, str):
        if norming_constants != "closed":
            raise ValueError(f"unknown norming {norming_constants!r}")
        cf = closed_form(dist, n)
        if cf is None:
            raise NotApplicableError(f"no closed-form norming for {dist.name}")
        norming_constants = (cf.a_n, cf.b_n)
    a, b = norming_constants or norming(dist, n)
    num = np.asarray(block_sf_rescaled(dist, n, a, b, x), dtype=float)
    den = np.asarray(gev_sf(gamma, x), dtype=float)
    if np.any((den < 1e-300) & (num < 1e-300)):
        raise UnderflowError("both tails underflow; L(x) is undefined here")
    if np.any(den == 0):
        raise UnderflowError("1 - G(x) underflows to zero")
    out = num / den
    return float(out) if np.ndim(x) == 0 else out


def edgeworth_residual(dist, n, rho, gamma=0.0, w=None, norming_constants=None):
    """Sup-distance between the scaled error and its second-order limit.

    The error e_n(x) = F(a_n x + b_n)^n - G_gamma(x) scaled by W(n) tends to
    -G_gamma'(x) * H(x), with H from :func:`tmethod.gev.h_hat`. The minus
    sign is what a direct expansion of F^n gives when W(n) is computed as
    n j''(n)/j'(n) - gamma + 1 (for the exponential law W(n) = +1/(2n) and
    e_n = -G'(x) H(x) / (2n) + o(1/n)). The sup runs over 1000 points
    uniform in G-probability on [1e-4, 1 - 1e-4].
    """
    if w is None:
        w = 0.0 if dist.kind is Kind.GUMBEL else w_rate(dist, n, gamma)
    if w == 0 or abs(w) < 1e-12:
        raise NotApplicableError(f"W(n) = {w} for {dist.name}; the expansion is degenerate")
    a, b = norming_constants or norming(dist, n)
    u = np.linspace(1e-4, 1 - 1e-4, EDGEWORTH_GRID)
    xs = gev_quantile(gamma, u)
    scaled = (block_cdf_rescaled(dist, n, a, b, xs) - gev_cdf(gamma, xs)) / w
    limit = -gev_pdf(gamma, xs) * h_hat(gamma, rho, xs)
    return float(np.max(np.abs(scaled - limit)))


# --- closed-form asymptotics ----------------------------------------------------

@dataclass(frozen=True)
class ClosedForm:
    a_n: float
    b_n: float
    w_n: float


def closed_form(dist, n):
    """First-order asymptotic (a_n, b_n, W(n)) for the tabulated laws, else None.

    Rayleigh W uses alpha where a stray symbol appears in the usual table,
    Gamma forms use n throughout, the normal W uses n / sqrt(2 pi), and the
    lognormal W is +1/D(n): a direct expansion of j gives a positive rate.
    """
    n = float(n)
    k = dist.kind
    if k in (Kind.EXPONENTIAL, Kind.DISK_AREA):
        return ClosedForm(1.0, np.log(n), 1.0 / (2 * n))
    if k is Kind.GUMBEL:
        return ClosedForm(1.0, np.log(n), 0.0)
    if k is Kind.NORMAL:
        lt = np.log(n / np.sqrt(2 * np.pi))
        b = np.sqrt(2 * lt - np.log(2 * lt))
        return ClosedForm(1.0 / b, b, -1.0 / (2 * lt))
    if k is Kind.LOGNORMAL:
        d = np.sqrt(2 * np.log(n / np.sqrt(2 * np.pi)))
        return ClosedForm(np.exp(d) / d, np.exp(d), 1.0 / d)
    if k is Kind.RAYLEIGH:
        al = dist.shape
        ln = np.log(n)
        return ClosedForm(ln ** (1 / al - 1) / al, ln ** (1 / al),
                          (1 - al) / (al * ln) + 1 / (2 * n))
    if k is Kind.GAMMA:
        a = dist.shape
        lg = np.log(n / special.gamma(a))
        return ClosedForm(1 + (a - 1) / lg, lg + (a - 1) * np.log(lg),
                          -(a - 1) / ((a - 1 + lg) * lg))
    return None


@dataclass(frozen=True)
class ConvergenceReport:
    n: int
    a_n: float
    b_n: float
    w_n: float
    d_n: float
    closed_form_a_n: Optional[float] = None
    closed_form_b_n: Optional[float] = None
    closed_form_w_n: Optional[float] = None

    def to_dict(self):
        return asdict(self)


REPORT_COLUMNS = ("n", "a_n", "b_n", "w_n", "d_n",
                  "closed_form_a_n", "closed_form_b_n", "closed_form_w_n")


def convergence_report(dist, n, gamma=0.0):
    a, b = norming(dist, n)
    cf = closed_form(dist, n)
    return ConvergenceReport(
        n=int(n), a_n=a, b_n=b, w_n=w_rate(dist, n, gamma),
        d_n=min(1.0, uniform_error(dist, n, gamma, (a, b))),
        closed_form_a_n=None if cf is None else float(cf.a_n),
        closed_form_b_n=None if cf is None else float(cf.b_n),
        closed_form_w_n=None if cf is None else float(cf.w_n),
    )
