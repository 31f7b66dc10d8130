"""Monte Carlo harness: block maxima, QQ data, the disk example and the
classical-vs-T-method extrapolation comparison."""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import distributions as D
from .errors import ConvergenceError, DomainError, ExperimentError, ParameterError
from .fitting import FitConfig, FitResult, extrapolate_quantile, fit_classical, fit_tmethod
from .rng import make_rng, uniform_open
from .transforms import FamilyKind

RUNS_FORMAT = "tmethod.mc_runs.v1"
SUMMARY_FORMAT = "tmethod.mc_summary.v1"
DISK_FORMAT = "tmethod.disk_report.v1"
QQ_FORMAT = "tmethod.qq.v1"

DEFAULT_LEVELS = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6)
MAX_FAILURE_FRACTION = 0.10


def block_maxima(dist, n, m, seed):
    """``m`` maxima, each over ``n`` fresh draws from ``dist``.

    Draws are isf(U) for uniform U, and isf is decreasing, so the block
    maximum is isf of the block's smallest uniform. This is the same number
    the explicit maximum would give, at the cost of one isf call per block.
    """
    n, m = int(n), int(m)
    if n < 1 or m < 1:
        raise ValueError(f"n and m must be >= 1, got n={n}, m={m}")
    rng = make_rng(seed)
    u_min = np.empty(m)
    rows = max(1, 2_000_000 // n)
    for start in range(0, m, rows):
        stop = min(m, start + rows)
        u_min[start:stop] = uniform_open(rng, (stop - start, n)).min(axis=1)
    return np.asarray(D.isf(dist, u_min), dtype=float)


def block_isf(dist, n, exceedance):
    """Exact quantile of the block maximum: the x with 1 - F(x)^n = exceedance."""
    p = np.asarray(exceedance, dtype=float)
    # F(x) = (1 - p)^(1/n), so 1 - F(x) = -expm1(log1p(-p) / n)
    q = -np.expm1(np.log1p(-p) / n)
    return D.isf(dist, q)


def block_sf(dist, n, x):
    """Exact exceedance 1 - F(x)^n of the block maximum."""
    s = np.asarray(D.sf(dist, x), dtype=float)
    with np.errstate(divide="ignore"):
        out = -np.expm1(n * np.log1p(-s))
    return float(out) if np.ndim(x) == 0 else out


# --- QQ data -----------------------------------------------------------------

@dataclass
class QQPoints:
    empirical: np.ndarray
    model: np.ndarray
    position: np.ndarray

    @property
    def exceedance(self):
        return 1.0 - self.position

    def rows(self):
        return zip(self.position, self.exceedance, self.empirical, self.model)


def plotting_positions(m):
    """Hazen positions (i - 0.5) / m for i = 1..m."""
    return (np.arange(1, m + 1) - 0.5) / m


def qq_points(data, fit):
    """Pair each order statistic with the model quantile at its plotting position."""
    x = np.sort(np.asarray(data, dtype=float).ravel())
    if x.size == 0:
        raise ValueError("data must be nonempty")
    if isinstance(fit, FitResult) and not fit.converged:
        raise ValueError("qq_points needs a converged fit")
    u = plotting_positions(x.size)
    model = np.asarray(extrapolate_quantile(fit, 1.0 - u), dtype=float)
    return QQPoints(empirical=x, model=model, position=u)


# --- disk example --------------------------------------------------------------

DISK_N = 10
DISK_BOXES = 100
DISK_RADII = (1.0, 1.2, 1.4, 1.6, 1.7, 1.8, 1.91, 2.0, 2.1)


@dataclass
class DiskReport:
    seed: int
    radii: np.ndarray
    exact: np.ndarray
    bob: Optional[np.ndarray]
    alice: Optional[np.ndarray]
    bob_fit: Optional[FitResult]
    alice_fit: Optional[FitResult]
    errors: dict = field(default_factory=dict)

    def at(self, r):
        i = int(np.argmin(np.abs(self.radii - r)))
        pick = lambda arr: None if arr is None else float(arr[i])
        return {"r": float(self.radii[i]), "exact": float(self.exact[i]),
                "bob": pick(self.bob), "alice": pick(self.alice)}

    def to_dict(self):
        as_list = lambda arr: None if arr is None else [float(v) for v in arr]
        return {
            "format": DISK_FORMAT, "seed": int(self.seed), "n": DISK_N, "boxes": DISK_BOXES,
            "radii": as_list(self.radii), "exact": as_list(self.exact),
            "bob": as_list(self.bob), "alice": as_list(self.alice),
            "bob_fit": None if self.bob_fit is None else self.bob_fit.to_dict(),
            "alice_fit": None if self.alice_fit is None else self.alice_fit.to_dict(),
            "errors": dict(self.errors),
        }


def disk_exact_exceedance(r, n=DISK_N):
    """P(largest of n disk radii > r) = 1 - (1 - exp(-pi r^2))^n."""
    return block_sf(D.disk_radius(), n, r)


def run_disk_example(seed, radii=DISK_RADII, fit_config=None):
    """Fit the largest-of-10 disk data two ways and compare with the exact law.

    Bob fits a GEV to the radii directly. Alice fits a Gumbel law to the areas
    and maps back with P(R > r) = P(A > pi r^2).
    """
    radii = np.asarray(radii, dtype=float)
    areas = block_maxima(D.disk_area(), DISK_N, DISK_BOXES, seed)
    r_data = np.sqrt(areas / np.pi)
    cfg = fit_config or FitConfig()
    report = DiskReport(seed=int(seed), radii=radii, exact=disk_exact_exceedance(radii),
                        bob=None, alice=None, bob_fit=None, alice_fit=None)
    try:
        report.bob_fit = fit_classical(r_data, cfg)
        report.bob = np.asarray(report.bob_fit.sf(radii), dtype=float)
    except ConvergenceError as exc:
        report.errors["bob"] = str(exc)
    try:
        report.alice_fit = fit_classical(areas, cfg, fix_gamma=0.0)
        report.alice = np.asarray(report.alice_fit.sf(np.pi * radii ** 2), dtype=float)
    except ConvergenceError as exc:
        report.errors["alice"] = str(exc)
    return report


# --- Monte Carlo comparison ----------------------------------------------------

@dataclass(frozen=True)
class ExperimentConfig:
    dist: D.DistributionSpec
    block_size_n: int = 100
    sample_size_m: int = 1000
    mc_runs: int = 100
    exceedance_levels: tuple = DEFAULT_LEVELS
    family_kind: FamilyKind = FamilyKind.POWER
    master_seed: int = 0
    fit_config: FitConfig = FitConfig()
    # pin the classical shape (0.0 turns the classical column into a Gumbel fit)
    classical_fix_gamma: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "family_kind", FamilyKind(self.family_kind))
        levels = tuple(float(v) for v in self.exceedance_levels)
        object.__setattr__(self, "exceedance_levels", levels)
        if not all(0 < v < 1 for v in levels):
            raise ParameterError("exceedance levels must lie in (0, 1)")
        if any(b >= a for a, b in zip(levels, levels[1:])):
            raise ParameterError("exceedance levels must be strictly decreasing")
        for name in ("block_size_n", "sample_size_m", "mc_runs"):
            if int(getattr(self, name)) < 1:
                raise ParameterError(f"{name} must be >= 1")

    def describe(self):
        return {"dist": self.dist.name, "n": int(self.block_size_n),
                "m": int(self.sample_size_m), "runs": int(self.mc_runs),
                "levels": list(self.exceedance_levels), "family": self.family_kind.value,
                "master_seed": int(self.master_seed),
                "classical_fix_gamma": self.classical_fix_gamma}


@dataclass
class RunRecord:
    run_id: int
    classical: np.ndarray      # quantile per level, NaN where the fit failed
    tmethod: np.ndarray
    classical_error: str = ""
    tmethod_error: str = ""


@dataclass
class McSummary:
    levels: np.ndarray
    ideal_quantile: np.ndarray
    mean_quantile_classical: np.ndarray
    std_quantile_classical: np.ndarray
    mean_quantile_tmethod: np.ndarray
    std_quantile_tmethod: np.ndarray
    n_failed_fits: int
    n_runs: int
    n_dropped_runs: int
    typical_run: int
    config: dict
    runs: list = field(default_factory=list, repr=False)

    def row(self, level):
        i = int(np.argmin(np.abs(np.log(self.levels) - np.log(level))))
        return {k: float(getattr(self, k)[i]) for k in (
            "levels", "ideal_quantile", "mean_quantile_classical", "std_quantile_classical",
            "mean_quantile_tmethod", "std_quantile_tmethod")}

    def to_dict(self):
        per_level = []
        for i, lev in enumerate(self.levels):
            per_level.append({
                "exceedance": float(lev),
                "ideal_quantile": float(self.ideal_quantile[i]),
                "mean_quantile_classical": float(self.mean_quantile_classical[i]),
                "std_quantile_classical": float(self.std_quantile_classical[i]),
                "mean_quantile_tmethod": float(self.mean_quantile_tmethod[i]),
                "std_quantile_tmethod": float(self.std_quantile_tmethod[i]),
            })
        return {"format": SUMMARY_FORMAT, "config": self.config, "levels": per_level,
                "n_runs": int(self.n_runs), "n_failed_fits": int(self.n_failed_fits),
                "n_dropped_runs": int(self.n_dropped_runs),
                "typical_run": int(self.typical_run)}


def _one_run(config, run_id):
    rng = make_rng(config.master_seed, run_id)
    data = block_maxima(config.dist, config.block_size_n, config.sample_size_m, rng)
    fit_seed = int(rng.integers(2 ** 62))
    fcfg = FitConfig(**{**config.fit_config.__dict__, "seed": fit_seed})
    levels = np.asarray(config.exceedance_levels)
    nan = np.full(levels.shape, np.nan)
    rec = RunRecord(run_id, nan.copy(), nan.copy())
    try:
        fc = fit_classical(data, fcfg, fix_gamma=config.classical_fix_gamma)
        rec.classical = np.asarray(extrapolate_quantile(fc, levels), dtype=float)
    except (ConvergenceError, DomainError) as exc:
        rec.classical_error = f"{type(exc).__name__}: {exc}"
    try:
        ft = fit_tmethod(data, config.family_kind, fcfg)
        rec.tmethod = np.asarray(extrapolate_quantile(ft, levels), dtype=float)
    except (ConvergenceError, DomainError) as exc:
        rec.tmethod_error = f"{type(exc).__name__}: {exc}"
    return rec


def run_mc_comparison(config, threads=1):
    """Fit both models to ``mc_runs`` independent samples and aggregate.

    Run ``i`` draws from the stream keyed by (master_seed, i), so the summary
    is bit-identical for any ``threads``.
    """
    ids = range(int(config.mc_runs))
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(lambda i: _one_run(config, i), ids))
    else:
        records = [_one_run(config, i) for i in ids]
    return summarize(config, records)


def summarize(config, records):
    levels = np.asarray(config.exceedance_levels)
    failed_c = [r for r in records if r.classical_error]
    failed_t = [r for r in records if r.tmethod_error]
    dropped = [r for r in records if r.classical_error and r.tmethod_error]
    n = len(records)
    for label, failed in (("classical", failed_c), ("tmethod", failed_t)):
        if len(failed) > MAX_FAILURE_FRACTION * n:
            raise ExperimentError(f"{len(failed)}/{n} {label} fits failed (limit "
                                  f"{MAX_FAILURE_FRACTION:.0%}); first: {failed[0].__dict__}")
    kept = [r for r in records if r not in dropped]
    qc = np.array([r.classical for r in kept if not r.classical_error]).reshape(-1, len(levels))
    qt = np.array([r.tmethod for r in kept if not r.tmethod_error]).reshape(-1, len(levels))

    def stats(q):
        if len(q) == 0:
            return np.full(levels.shape, np.nan), np.full(levels.shape, np.nan)
        std = q.std(axis=0, ddof=1) if len(q) > 1 else np.zeros(levels.shape)
        return q.mean(axis=0), std

    mc, sc = stats(qc)
    mt, st = stats(qt)
    ideal = np.asarray(block_isf(config.dist, config.block_size_n, levels), dtype=float)

    # typical run: median T-method error at the deepest level
    ok = [r for r in kept if not r.tmethod_error]
    if ok:
        err = np.array([abs(r.tmethod[-1] - ideal[-1]) for r in ok])
        typical = ok[int(np.argsort(err, kind="stable")[(len(err) - 1) // 2])].run_id
    else:
        typical = -1
    return McSummary(levels=levels, ideal_quantile=ideal,
                     mean_quantile_classical=mc, std_quantile_classical=sc,
                     mean_quantile_tmethod=mt, std_quantile_tmethod=st,
                     n_failed_fits=len(failed_c) + len(failed_t), n_runs=n,
                     n_dropped_runs=len(dropped), typical_run=typical,
                     config=config.describe(), runs=records)


def iter_run_rows(summary):
    """(run_id, method, level, quantile) rows in run, method, level order."""
    for rec in summary.runs:
        for method, q in (("classical", rec.classical), ("tmethod", rec.tmethod)):
            for lev, val in zip(summary.levels, q):
                yield rec.run_id, method, float(lev), float(val)


PRESETS = {
    "fig2-normal": dict(dist="normal", family="power"),
    "fig2-lognormal": dict(dist="lognormal", family="logpower"),
    "supp-exponential": dict(dist="exponential", family="power"),
}


def preset_config(name, runs=100, seed=0, levels=DEFAULT_LEVELS, fit_config=None):
    p = PRESETS[name]
    return ExperimentConfig(dist=D.from_name(p["dist"]), block_size_n=100, sample_size_m=1000,
                            mc_runs=runs, exceedance_levels=tuple(levels),
                            family_kind=p["family"], master_seed=seed,
                            fit_config=fit_config or FitConfig())
