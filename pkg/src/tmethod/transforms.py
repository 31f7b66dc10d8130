"""Monotone transformation families T(x | beta) and a family-selection heuristic."""
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DomainError, InsufficientDataError, ParameterError


class FamilyKind(str, Enum):
    IDENTITY = "identity"
    POWER = "power"
    LOGPOWER = "logpower"


@dataclass(frozen=True)
class TransformFamily:
    """T(x) = x, x**beta (x > 0) or (log x)**beta (x > 1)."""
    kind: FamilyKind
    beta: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", FamilyKind(self.kind))
        if self.kind is not FamilyKind.IDENTITY and not self.beta > 0:
            raise ParameterError(f"beta must be > 0, got {self.beta}")

    @property
    def domain_lower(self):
        return {FamilyKind.IDENTITY: -np.inf, FamilyKind.POWER: 0.0,
                FamilyKind.LOGPOWER: 1.0}[self.kind]

    def with_beta(self, beta):
        return TransformFamily(self.kind, float(beta))


def _first_bad(mask, values):
    idx = int(np.flatnonzero(mask.ravel())[0])
    return idx, float(values.ravel()[idx])


def check_domain(family, x):
    """Raise DomainError naming the first value outside the family domain."""
    x = np.asarray(x, dtype=float)
    if family.kind is FamilyKind.IDENTITY:
        bad = ~np.isfinite(x)
    else:
        bad = ~(x > family.domain_lower) | ~np.isfinite(x)
    if np.any(bad):
        idx, v = _first_bad(bad, x)
        raise DomainError(
            f"value {v} at index {idx} is outside the {family.kind.value} domain "
            f"x > {family.domain_lower}", value=v, index=idx)


def forward(family, x):
    """Return (T(x), T'(x))."""
    x_in = x
    x = np.asarray(x, dtype=float)
    check_domain(family, x)
    k, b = family.kind, family.beta
    if k is FamilyKind.IDENTITY:
        y, dy = x, np.ones_like(x)
    elif k is FamilyKind.POWER:
        y = x ** b
        dy = b * y / x
    else:
        lx = np.log(x)
        y = lx ** b
        dy = b * y / (lx * x)
    if np.ndim(x_in) == 0:
        return float(y), float(dy)
    return y, dy


def log_derivative(family, x):
    """log T'(x), evaluated without forming T'(x) itself."""
    k, b = family.kind, family.beta
    if k is FamilyKind.IDENTITY:
        return np.zeros_like(np.asarray(x, dtype=float))
    if k is FamilyKind.POWER:
        return np.log(b) + (b - 1.0) * np.log(x)
    lx = np.log(x)
    return np.log(b) + (b - 1.0) * np.log(lx) - np.log(x)


def inverse(family, y):
    """T^{-1}(y). Values below the range of T raise DomainError."""
    y_in = y
    y = np.asarray(y, dtype=float)
    k, b = family.kind, family.beta
    if k is FamilyKind.IDENTITY:
        x = y
    else:
        bad = ~(y > 0)
        if np.any(bad):
            idx, v = _first_bad(bad, y)
            raise DomainError(f"{v} is below the range (0, inf) of the {k.value} transform",
                              value=v, index=idx)
        if k is FamilyKind.POWER:
            x = y ** (1.0 / b)
        else:
            x = np.exp(y ** (1.0 / b))
    return float(x) if np.ndim(y_in) == 0 else x


# --- family selection -------------------------------------------------------

STRAIGHT_T = 2.0
MIN_SAMPLE = 50


@dataclass(frozen=True)
class CurvatureFit:
    coef: float
    t_stat: float

    @property
    def shape(self):
        if abs(self.t_stat) < STRAIGHT_T:
            return "straight"
        return "down" if self.coef < 0 else "up"


@dataclass(frozen=True)
class FamilySuggestion:
    kind: FamilyKind | None
    hint: str
    semilog: CurvatureFit
    loglog: CurvatureFit | None
    candidates: tuple = field(default=())
    out_of_scope: bool = False


def _spacing_curvature(values, ranks, m):
    """Quadratic coefficient of the tail QQ curve, estimated from spacings.

    Writing the sorted tail as x = c0 + c1*l + c2*l^2 with l = -log(survival),
    the normalized spacings (m - i)(x[i+1] - x[i]) are independent draws with
    mean dx/dl = c1 + 2*c2*l (exactly iid for an exponential tail). Regressing
    them on l gives c2 with an honest t-statistic; a plain least-squares fit of
    the curve itself does not, because neighbouring order statistics are
    strongly correlated.
    """
    spacing = (m - ranks[:-1]) * np.diff(values)
    ell = -np.log(1.0 - (ranks[:-1] - 0.5) / m)
    X = np.column_stack([np.ones_like(ell), ell])
    coef, *_ = np.linalg.lstsq(X, spacing, rcond=None)
    resid = spacing - X @ coef
    s2 = resid @ resid / (len(spacing) - 2)
    se = np.sqrt(s2 * np.linalg.inv(X.T @ X)[1, 1])
    slope = coef[1]
    t = slope / se if se > 0 else np.copysign(np.inf, slope)
    return CurvatureFit(float(slope / 2.0), float(t))


def tail_points(sample, drop_top=5):
    """Upper half of the order statistics, minus the ``drop_top`` largest.

    Returns the values and their 1-based ranks within the full sorted sample.
    """
    x = np.sort(np.asarray(sample, dtype=float))
    m = len(x)
    ranks = np.arange(1, m + 1)
    keep = slice(m // 2, m - drop_top)
    return x[keep], ranks[keep]


def suggest_family(sample):
    """Pick a transformation family from the curvature of the empirical tail.

    On a semilog plot of the empirical survival function an exponential tail
    is straight; downward curvature means a super-exponential tail (power
    transform with beta > 1). Upward curvature paired with a loglog plot that
    still bends down points to a sub-exponential but super-polynomial tail
    (power with beta < 1, or log-power). A straight loglog plot signals a
    polynomial tail outside the Gumbel domain.
    """
    x = np.asarray(sample, dtype=float)
    if x.size < MIN_SAMPLE:
        raise InsufficientDataError(f"need at least {MIN_SAMPLE} values, got {x.size}")
    m = x.size
    xs, ranks = tail_points(x)
    semi = _spacing_curvature(xs, ranks, m)
    loglog = None
    if np.all(xs > 0):
        loglog = _spacing_curvature(np.log(xs), ranks, m)

    shape = semi.shape
    if shape == "straight":
        return FamilySuggestion(FamilyKind.IDENTITY, "exponential tail", semi, loglog,
                                (FamilyKind.IDENTITY,))
    if shape == "down":
        return FamilySuggestion(FamilyKind.POWER, "super-exponential tail: power, beta > 1",
                                semi, loglog, (FamilyKind.POWER,))
    if loglog is None:
        return FamilySuggestion(FamilyKind.POWER, "sub-exponential tail with non-positive data: "
                                "power, beta < 1", semi, None, (FamilyKind.POWER,))
    if loglog.shape == "down":
        return FamilySuggestion(FamilyKind.LOGPOWER, "sub-exponential, super-polynomial tail: "
                                "log-power or power with beta < 1", semi, loglog,
                                (FamilyKind.LOGPOWER, FamilyKind.POWER))
    return FamilySuggestion(None, "polynomial tail: law likely outside the Gumbel domain",
                            semi, loglog, (), out_of_scope=True)
