"""Source laws F for block-maximum experiments.

Each law is described by an immutable :class:`DistributionSpec`. Besides the
cdf and quantile, every law exposes the survival function ``sf`` and its
inverse ``isf`` so that upper-tail quantities keep full relative accuracy
where ``1 - cdf`` would cancel.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import numpy as np
from scipy import special

from .errors import DomainError, ParameterError
from .rng import make_rng, uniform_open

__all__ = [
    "Kind", "CustomLaw", "DistributionSpec",
    "cdf", "sf", "density", "quantile", "isf", "sample",
    "exponential", "normal", "lognormal", "rayleigh", "gamma", "gumbel",
    "disk_area", "disk_radius", "from_name",
]


class Kind(str, Enum):
    EXPONENTIAL = "exponential"
    NORMAL = "normal"
    LOGNORMAL = "lognormal"
    RAYLEIGH = "rayleigh"
    GAMMA = "gamma"
    GUMBEL = "gumbel"
    DISK_AREA = "disk_area"
    DISK_RADIUS = "disk_radius"
    CUSTOM = "custom"


_SUPPORT = {
    Kind.EXPONENTIAL: (0.0, np.inf),
    Kind.NORMAL: (-np.inf, np.inf),
    Kind.LOGNORMAL: (0.0, np.inf),
    Kind.RAYLEIGH: (0.0, np.inf),
    Kind.GAMMA: (0.0, np.inf),
    Kind.GUMBEL: (-np.inf, np.inf),
    Kind.DISK_AREA: (0.0, np.inf),
    Kind.DISK_RADIUS: (0.0, np.inf),
}


@dataclass(frozen=True)
class CustomLaw:
    """User-supplied law. Only ``cdf`` and ``quantile`` are required.

    Missing upper-tail functions fall back to ``1 - cdf`` and
    ``quantile(1 - q)``, which lose relative accuracy deep in the tail.
    """
    cdf: Callable
    quantile: Callable
    sf: Optional[Callable] = None
    isf: Optional[Callable] = None
    pdf: Optional[Callable] = None
    pdf_prime: Optional[Callable] = None
    support: tuple = (-np.inf, np.inf)
    name: str = "custom"


@dataclass(frozen=True)
class DistributionSpec:
    kind: Kind
    shape: float = float("nan")
    custom: Optional[CustomLaw] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.kind is Kind.RAYLEIGH and not self.shape > 0:
            raise ParameterError(f"Rayleigh shape alpha must be > 0, got {self.shape}")
        if self.kind is Kind.GAMMA and not self.shape > 0:
            raise ParameterError(f"Gamma shape a must be > 0, got {self.shape}")
        if self.kind is Kind.CUSTOM and self.custom is None:
            raise ParameterError("custom distributions need a CustomLaw")

    @property
    def support_lower(self):
        if self.kind is Kind.CUSTOM:
            return float(self.custom.support[0])
        return _SUPPORT[self.kind][0]

    @property
    def support_upper(self):
        if self.kind is Kind.CUSTOM:
            return float(self.custom.support[1])
        return _SUPPORT[self.kind][1]

    @property
    def name(self):
        if self.kind is Kind.CUSTOM:
            return self.custom.name
        if self.kind in (Kind.RAYLEIGH, Kind.GAMMA):
            return f"{self.kind.value}({self.shape:g})"
        return self.kind.value

    # Methods delegate to the module-level functions so both spellings work.
    def cdf(self, x):
        return cdf(self, x)

    def sf(self, x):
        return sf(self, x)

    def density(self, x, order=0):
        return density(self, x, order)

    def quantile(self, p):
        return quantile(self, p)

    def isf(self, q):
        return isf(self, q)

    def sample(self, seed, count):
        return sample(self, seed, count)


def exponential():
    return DistributionSpec(Kind.EXPONENTIAL)


def normal():
    return DistributionSpec(Kind.NORMAL)


def lognormal():
    return DistributionSpec(Kind.LOGNORMAL)


def rayleigh(alpha=2.0):
    return DistributionSpec(Kind.RAYLEIGH, float(alpha))


def gamma(a):
    return DistributionSpec(Kind.GAMMA, float(a))


def gumbel():
    return DistributionSpec(Kind.GUMBEL)


def disk_area():
    return DistributionSpec(Kind.DISK_AREA)


def disk_radius():
    return DistributionSpec(Kind.DISK_RADIUS)


def from_name(name, shape=None):
    """Build a spec from a name such as ``"normal"``, ``"rayleigh:2"`` or ``"gamma:0.5"``."""
    if ":" in name:
        name, _, s = name.partition(":")
        shape = float(s)
    kind = Kind(name.strip().lower().replace("-", "_"))
    if kind in (Kind.RAYLEIGH, Kind.GAMMA):
        if shape is None:
            if kind is Kind.GAMMA:
                raise ParameterError("gamma needs a shape, e.g. 'gamma:2'")
            shape = 2.0
        return DistributionSpec(kind, float(shape))
    if kind is Kind.CUSTOM:
        raise ParameterError("custom laws cannot be built from a name")
    return DistributionSpec(kind)


def _scalar_or_array(out, like):
    if np.ndim(like) == 0:
        return float(out)
    return out


def _positive_part(x):
    # laws on (0, inf): evaluate at a safe point where x <= 0, then mask
    return np.where(x > 0, x, 1.0)


def cdf(dist, x):
    """F(x), clamped to 0 / 1 outside the support."""
    x_in = x
    x = np.asarray(x, dtype=float)
    k = dist.kind
    with np.errstate(over="ignore", under="ignore", invalid="ignore", divide="ignore"):
        if k is Kind.CUSTOM:
            out = np.asarray(dist.custom.cdf(x), dtype=float)
        elif k is Kind.NORMAL:
            out = special.ndtr(x)
        elif k is Kind.GUMBEL:
            out = np.exp(-np.exp(-x))
        else:
            xp = _positive_part(x)
            if k in (Kind.EXPONENTIAL, Kind.DISK_AREA):
                v = -np.expm1(-xp)
            elif k is Kind.DISK_RADIUS:
                v = _exp_cdf(np.pi * xp ** 2)
            elif k is Kind.LOGNORMAL:
                v = special.ndtr(np.log(xp))
            elif k is Kind.RAYLEIGH:
                v = -np.expm1(-xp ** dist.shape)
            elif k is Kind.GAMMA:
                v = special.gammainc(dist.shape, xp)
            out = np.where(x > 0, v, 0.0)
    out = np.where(np.isposinf(x), 1.0, out)
    return _scalar_or_array(out, x_in)


def _exp_cdf(a):
    return -np.expm1(-a)


def sf(dist, x):
    """1 - F(x), computed without cancellation in the upper tail."""
    x_in = x
    x = np.asarray(x, dtype=float)
    k = dist.kind
    with np.errstate(over="ignore", under="ignore", invalid="ignore", divide="ignore"):
        if k is Kind.CUSTOM:
            if dist.custom.sf is not None:
                out = np.asarray(dist.custom.sf(x), dtype=float)
            else:
                out = 1.0 - np.asarray(dist.custom.cdf(x), dtype=float)
        elif k is Kind.NORMAL:
            out = special.ndtr(-x)
        elif k is Kind.GUMBEL:
            out = -np.expm1(-np.exp(-x))
        else:
            xp = _positive_part(x)
            if k in (Kind.EXPONENTIAL, Kind.DISK_AREA):
                v = np.exp(-xp)
            elif k is Kind.DISK_RADIUS:
                v = np.exp(-np.pi * xp ** 2)
            elif k is Kind.LOGNORMAL:
                v = special.ndtr(-np.log(xp))
            elif k is Kind.RAYLEIGH:
                v = np.exp(-xp ** dist.shape)
            elif k is Kind.GAMMA:
                v = special.gammaincc(dist.shape, xp)
            out = np.where(x > 0, v, 1.0)
    out = np.where(np.isposinf(x), 0.0, out)
    return _scalar_or_array(out, x_in)


def density(dist, x, order=0):
    """F'(x) for ``order=0`` and F''(x) for ``order=1``.

    ``x`` must lie strictly inside the support.
    """
    if order not in (0, 1):
        raise ValueError(f"density order must be 0 or 1, got {order!r}")
    x_in = x
    x = np.asarray(x, dtype=float)
    lo, hi = dist.support_lower, dist.support_upper
    bad = ~((x > lo) & (x < hi))
    if np.any(bad):
        v = x[bad].flat[0] if x.ndim else float(x)
        raise DomainError(f"x={v} outside the open support ({lo}, {hi}) of {dist.name}", value=v)
    k = dist.kind
    with np.errstate(over="ignore", under="ignore"):
        if k is Kind.CUSTOM:
            fn = dist.custom.pdf if order == 0 else dist.custom.pdf_prime
            if fn is None:
                raise NotImplementedError(f"custom law {dist.name} supplies no density of order {order}")
            out = np.asarray(fn(x), dtype=float)
        elif k in (Kind.EXPONENTIAL, Kind.DISK_AREA):
            out = np.exp(-x) if order == 0 else -np.exp(-x)
        elif k is Kind.NORMAL:
            phi = np.exp(-0.5 * x * x) / np.sqrt(2 * np.pi)
            out = phi if order == 0 else -x * phi
        elif k is Kind.LOGNORMAL:
            lx = np.log(x)
            phi = np.exp(-0.5 * lx * lx) / np.sqrt(2 * np.pi)
            out = phi / x if order == 0 else -phi * (lx + 1.0) / (x * x)
        elif k is Kind.RAYLEIGH:
            al = dist.shape
            xa = x ** al
            e = np.exp(-xa)
            if order == 0:
                out = al * x ** (al - 1) * e
            else:
                out = al * e * x ** (al - 2) * ((al - 1) - al * xa)
        elif k is Kind.GAMMA:
            a = dist.shape
            f = np.exp((a - 1) * np.log(x) - x - special.gammaln(a))
            out = f if order == 0 else f * ((a - 1) / x - 1.0)
        elif k is Kind.GUMBEL:
            e = np.exp(-x)
            f = np.exp(-e) * e
            out = f if order == 0 else f * (e - 1.0)
        elif k is Kind.DISK_RADIUS:
            e = np.exp(-np.pi * x * x)
            out = 2 * np.pi * x * e if order == 0 else 2 * np.pi * e * (1 - 2 * np.pi * x * x)
    return _scalar_or_array(out, x_in)


def _check_prob(p, what):
    bad = ~((p > 0) & (p < 1))
    if np.any(bad):
        v = p[bad].flat[0] if p.ndim else float(p)
        raise DomainError(f"{what} must lie in (0, 1), got {v}", value=v)


def quantile(dist, p):
    """F^{-1}(p) for p in (0, 1)."""
    p_in = p
    p = np.asarray(p, dtype=float)
    _check_prob(p, "probability")
    k = dist.kind
    if k is Kind.CUSTOM:
        out = np.asarray(dist.custom.quantile(p), dtype=float)
    elif k in (Kind.EXPONENTIAL, Kind.DISK_AREA):
        out = -np.log1p(-p)
    elif k is Kind.DISK_RADIUS:
        out = np.sqrt(-np.log1p(-p) / np.pi)
    elif k is Kind.NORMAL:
        out = special.ndtri(p)
    elif k is Kind.LOGNORMAL:
        out = np.exp(special.ndtri(p))
    elif k is Kind.RAYLEIGH:
        out = (-np.log1p(-p)) ** (1.0 / dist.shape)
    elif k is Kind.GAMMA:
        out = special.gammaincinv(dist.shape, p)
    elif k is Kind.GUMBEL:
        out = -np.log(-np.log(p))
    return _scalar_or_array(out, p_in)


def isf(dist, q):
    """Upper-tail quantile: the x with 1 - F(x) = q, for q in (0, 1)."""
    q_in = q
    q = np.asarray(q, dtype=float)
    _check_prob(q, "exceedance probability")
    k = dist.kind
    if k is Kind.CUSTOM:
        if dist.custom.isf is not None:
            out = np.asarray(dist.custom.isf(q), dtype=float)
        else:
            out = np.asarray(dist.custom.quantile(1.0 - q), dtype=float)
    elif k in (Kind.EXPONENTIAL, Kind.DISK_AREA):
        out = -np.log(q)
    elif k is Kind.DISK_RADIUS:
        out = np.sqrt(-np.log(q) / np.pi)
    elif k is Kind.NORMAL:
        out = -special.ndtri(q)
    elif k is Kind.LOGNORMAL:
        out = np.exp(-special.ndtri(q))
    elif k is Kind.RAYLEIGH:
        out = (-np.log(q)) ** (1.0 / dist.shape)
    elif k is Kind.GAMMA:
        out = special.gammainccinv(dist.shape, q)
    elif k is Kind.GUMBEL:
        out = -np.log(-np.log1p(-q))
    return _scalar_or_array(out, q_in)


def sample(dist, seed, count):
    """``count`` iid draws by inverse-cdf sampling from a seeded stream.

    ``seed`` is an integer or a ``numpy.random.Generator``.
    """
    count = int(count)
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    rng = make_rng(seed)
    # isf(U) has the law of F for U uniform, and resolves the upper tail better
    return np.asarray(isf(dist, uniform_open(rng, count)), dtype=float)
