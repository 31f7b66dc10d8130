"""Command-line front end.

    tmethod fit --family power --input maxima.csv --out fit.json [--qq qq.csv]
    tmethod convergence --dist exponential --n 10,100,1000 [--out table.csv]
    tmethod experiment --preset fig2-normal --runs 100 --seed 7 [--out summary.json]
    tmethod suggest --input maxima.csv

Errors go to stderr as one JSON object; the exit status is 0 on success,
1 on errors, and 3 when a fit did not converge (the best-so-far fit is
still written).
"""
import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import distributions as D
from .convergence import REPORT_COLUMNS, convergence_report
from .errors import ConvergenceError, DataFileError, TMethodError
from .experiments import (DEFAULT_LEVELS, PRESETS, QQ_FORMAT, RUNS_FORMAT, ExperimentConfig,
                          block_maxima, iter_run_rows, qq_points, run_disk_example,
                          run_mc_comparison)
from .fitting import FitConfig, fit_classical, fit_tmethod
from .io import (CONVERGENCE_FORMAT, FIT_FORMAT, dumps, parse_data_file, write_csv)
from .rng import DEFAULT_SEED
from .transforms import FamilyKind, suggest_family

SEED_ENV = "TMETHOD_SEED"
EXIT_ERROR = 1
EXIT_NOT_CONVERGED = 3
FAMILIES = ("classical", "gumbel", "identity", "power", "logpower", "auto")
ALL_PRESETS = ("fig1-disks",) + tuple(PRESETS)


def default_seed():
    return int(os.environ.get(SEED_ENV, DEFAULT_SEED))


@dataclass
class CliConfig:
    command: str
    input_path: Optional[str] = None
    output_path: Optional[str] = None
    qq_path: Optional[str] = None
    runs_path: Optional[str] = None
    format: str = "json"
    family: str = "power"
    distribution: Optional[str] = None
    preset: Optional[str] = None
    n: Optional[list] = None
    m: Optional[int] = None
    runs: Optional[int] = None
    levels: tuple = DEFAULT_LEVELS
    seed: int = field(default_factory=default_seed)
    threads: int = 1
    fit: FitConfig = field(default_factory=FitConfig)

    def validate(self):
        if self.command == "fit" and not (self.input_path or self.distribution):
            raise ValueError("fit needs --input or --dist for synthetic data")
        if self.command == "suggest" and not (self.input_path or self.distribution):
            raise ValueError("suggest needs --input or --dist")
        if self.command == "experiment" and not (self.preset or self.distribution):
            raise ValueError("experiment needs --preset or --dist")
        if self.command == "convergence" and not self.distribution:
            raise ValueError("convergence needs --dist")
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        return self


# --- helpers -----------------------------------------------------------------

def _emit(text, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_data(cfg):
    if cfg.input_path:
        return np.asarray(parse_data_file(cfg.input_path), dtype=float)
    n = (cfg.n or [100])[0]
    return block_maxima(D.from_name(cfg.distribution), n, cfg.m or 1000, cfg.seed)


def _fit(data, family, fit_cfg):
    """Run the requested fit. Returns (FitResult, extra dict for the JSON)."""
    extra = {}
    if family == "classical":
        return fit_classical(data, fit_cfg), extra
    if family == "gumbel":
        return fit_classical(data, fit_cfg, fix_gamma=0.0), extra
    if family != "auto":
        return fit_tmethod(data, family, fit_cfg), extra
    sug = suggest_family(data)
    extra["suggestion"] = _suggestion_dict(sug)
    if sug.out_of_scope:
        return fit_classical(data, fit_cfg), extra
    if len(sug.candidates) == 1:
        return fit_tmethod(data, sug.candidates[0], fit_cfg), extra
    fits = []
    for kind in sug.candidates:
        try:
            fits.append(fit_tmethod(data, kind, fit_cfg))
        except (ConvergenceError, TMethodError):
            continue
    if not fits:
        raise ConvergenceError("no candidate family could be fitted")
    return max(fits, key=lambda f: f.loglik), extra


def _suggestion_dict(sug):
    return {
        "kind": None if sug.kind is None else sug.kind.value,
        "hint": sug.hint,
        "candidates": [k.value for k in sug.candidates],
        "out_of_scope": sug.out_of_scope,
        "semilog": {"coef": sug.semilog.coef, "t": sug.semilog.t_stat, "shape": sug.semilog.shape},
        "loglog": None if sug.loglog is None else {
            "coef": sug.loglog.coef, "t": sug.loglog.t_stat, "shape": sug.loglog.shape},
    }


def _write_fit(fit, extra, data, cfg):
    payload = {"format": FIT_FORMAT, **fit.to_dict(), **extra}
    _emit(dumps(payload), cfg.output_path)
    if cfg.qq_path:
        qq = qq_points(data, fit) if fit.converged else None
        rows = [] if qq is None else qq.rows()
        write_csv(cfg.qq_path, QQ_FORMAT, ["position", "exceedance", "empirical", "model"], rows)


# --- commands ------------------------------------------------------------------

def cmd_fit(cfg):
    data = _load_data(cfg)
    try:
        fit, extra = _fit(data, cfg.family, cfg.fit)
    except ConvergenceError as exc:
        if exc.best is None:
            raise
        _write_fit(exc.best, {}, data, cfg)
        raise
    _write_fit(fit, extra, data, cfg)
    return 0


def cmd_suggest(cfg):
    data = _load_data(cfg)
    sug = suggest_family(data)
    d = _suggestion_dict(sug)
    if cfg.format == "json" or cfg.output_path:
        _emit(dumps(d), cfg.output_path)
    else:
        print(f"suggested family: {d['kind']} ({d['hint']})")
    return 0


def cmd_convergence(cfg):
    dist = D.from_name(cfg.distribution)
    ns = cfg.n or [10, 100, 1000]
    reports = [convergence_report(dist, n) for n in ns]
    if cfg.format == "json":
        payload = {"format": CONVERGENCE_FORMAT, "dist": dist.name,
                   "rows": [r.to_dict() for r in reports]}
        _emit(dumps(payload), cfg.output_path)
    else:
        rows = [[getattr(r, c) for c in REPORT_COLUMNS] for r in reports]
        if cfg.output_path:
            write_csv(cfg.output_path, CONVERGENCE_FORMAT, REPORT_COLUMNS, rows)
        else:
            write_csv(sys.stdout, CONVERGENCE_FORMAT, REPORT_COLUMNS, rows)
    return 0


def cmd_experiment(cfg):
    if cfg.preset == "fig1-disks":
        report = run_disk_example(cfg.seed, fit_config=cfg.fit)
        _emit(dumps(report.to_dict()), cfg.output_path)
        if cfg.runs_path:
            rows = zip(report.radii, report.exact,
                       report.bob if report.bob is not None else [None] * len(report.radii),
                       report.alice if report.alice is not None else [None] * len(report.radii))
            write_csv(cfg.runs_path, "tmethod.disk_curve.v1", ["r", "exact", "bob", "alice"],
                      [[float(v) if v is not None else None for v in row] for row in rows])
        return 0
    if cfg.preset:
        p = PRESETS[cfg.preset]
        dist_name = cfg.distribution or p["dist"]
        family = p["family"] if cfg.family in (None, "auto") else cfg.family
    else:
        dist_name, family = cfg.distribution, cfg.family
    if family not in ("identity", "power", "logpower"):
        raise ValueError(f"experiments need a T-method family, got {family!r}")
    config = ExperimentConfig(
        dist=D.from_name(dist_name), block_size_n=(cfg.n or [100])[0],
        sample_size_m=cfg.m or 1000, mc_runs=cfg.runs or 100,
        exceedance_levels=tuple(cfg.levels), family_kind=family,
        master_seed=cfg.seed, fit_config=cfg.fit)
    summary = run_mc_comparison(config, threads=cfg.threads)
    _emit(dumps(summary.to_dict()), cfg.output_path)
    if cfg.runs_path:
        write_csv(cfg.runs_path, RUNS_FORMAT, ["run_id", "method", "level", "quantile"],
                  iter_run_rows(summary))
    return 0


COMMANDS = {"fit": cmd_fit, "suggest": cmd_suggest, "convergence": cmd_convergence,
            "experiment": cmd_experiment}


def run_command(cfg):
    """Execute a validated config; returns the process exit status."""
    try:
        cfg.validate()
        return COMMANDS[cfg.command](cfg)
    except ConvergenceError as exc:
        _report_error(exc, best=None if exc.best is None else exc.best.to_dict())
        return EXIT_NOT_CONVERGED
    except DataFileError as exc:
        _report_error(exc, rows=[list(r) for r in exc.rows])
        return EXIT_ERROR
    except (TMethodError, ValueError, OSError, KeyError) as exc:
        _report_error(exc)
        return EXIT_ERROR


def _report_error(exc, **extra):
    payload = {"error": type(exc).__name__, "message": str(exc)}
    payload.update({k: v for k, v in extra.items() if v is not None})
    sys.stderr.write(json.dumps(payload) + "\n")


# --- argument parsing -------------------------------------------------------------

def _int_list(text):
    return [int(float(v)) for v in text.split(",") if v.strip()]


def _float_list(text):
    return tuple(float(v) for v in text.split(",") if v.strip())


def build_parser():
    parser = argparse.ArgumentParser(prog="tmethod", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", dest="output_path")
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--seed", type=int, default=None,
                       help=f"master seed (default ${SEED_ENV} or {DEFAULT_SEED})")

    def fit_opts(p):
        p.add_argument("--restarts", type=int, default=5)
        p.add_argument("--tolerance", type=float, default=1e-10)
        p.add_argument("--max-iter", type=int, default=10_000)
        p.add_argument("--jitter", type=float, default=0.2)

    p = sub.add_parser("fit", help="fit block maxima")
    common(p)
    fit_opts(p)
    p.add_argument("--input", dest="input_path")
    p.add_argument("--dist", dest="distribution", help="draw synthetic block maxima instead")
    p.add_argument("--n", type=_int_list, default=None, help="block size for synthetic data")
    p.add_argument("--m", type=int, default=None, help="number of synthetic maxima")
    p.add_argument("--family", choices=FAMILIES, default="power")
    p.add_argument("--qq", dest="qq_path", help="write QQ points to this CSV")

    p = sub.add_parser("suggest", help="suggest a transformation family")
    common(p)
    p.add_argument("--input", dest="input_path")
    p.add_argument("--dist", dest="distribution")
    p.add_argument("--n", type=_int_list, default=None)
    p.add_argument("--m", type=int, default=None)

    p = sub.add_parser("convergence", help="norming constants, W(n), d_n over an n grid")
    common(p)
    p.add_argument("--dist", dest="distribution", required=True,
                   help="e.g. exponential, normal, rayleigh:2, gamma:0.5")
    p.add_argument("--n", type=_int_list, default=[10, 100, 1000])

    p = sub.add_parser("experiment", help="reproduce the disk or Monte Carlo experiments")
    common(p)
    fit_opts(p)
    p.add_argument("--preset", choices=ALL_PRESETS)
    p.add_argument("--dist", dest="distribution")
    p.add_argument("--family", choices=FAMILIES, default="auto")
    p.add_argument("--n", type=_int_list, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--runs", type=int, default=None)
    p.add_argument("--full", action="store_true", help="1000 Monte Carlo runs")
    p.add_argument("--levels", type=_float_list, default=DEFAULT_LEVELS)
    p.add_argument("--runs-csv", dest="runs_path", help="per-run CSV output")
    p.add_argument("--threads", type=int, default=1)
    return parser


def config_from_args(ns):
    d = vars(ns)
    seed = d.get("seed")
    fit = FitConfig(restarts=d.get("restarts", 5), tolerance=d.get("tolerance", 1e-10),
                    max_iter=d.get("max_iter", 10_000), jitter=d.get("jitter", 0.2))
    runs = d.get("runs")
    if d.get("full"):
        runs = 1000
    fmt = d.get("format") or ("csv" if ns.command == "convergence" else "json")
    return CliConfig(
        command=ns.command, input_path=d.get("input_path"), output_path=d.get("output_path"),
        qq_path=d.get("qq_path"), runs_path=d.get("runs_path"), format=fmt,
        family=d.get("family") or "power", distribution=d.get("distribution"),
        preset=d.get("preset"), n=d.get("n"), m=d.get("m"), runs=runs,
        levels=tuple(d.get("levels") or DEFAULT_LEVELS),
        seed=default_seed() if seed is None else seed,
        threads=d.get("threads") or 1, fit=fit)


def main(argv=None):
    ns = build_parser().parse_args(argv)
    return run_command(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
