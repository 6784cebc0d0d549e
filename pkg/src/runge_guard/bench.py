"""Experiment runners behind the command-line subcommands.

Every runner is a pure function of a :class:`~runge_guard.scenario.Scenario`
and returns rows ready for CSV output; a sweep point depends only on its
own parameters, so points can be produced in any order or in parallel.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .attitude import PicardConfig, ReconstructionConfig, run_sequence
from .errors import BoundaryWindowError
from .interp_core import (
    EFH_BAC,
    POLY_BAC,
    POLY_PLAIN,
    SCHEMES,
    NodeGrid,
    SampleWindow,
    build_bac_interpolant,
    interpolant,
)
from .lebesgue import lebesgue_constant, lebesgue_function, table_bounds
from .motion import NOISE_ARW, NOISE_NONE, ConingParams, GyroModel, synthesize
from .scenario import Run, Scenario

DEMO_COLUMNS = ["t", "scheme", "abs_err", "lebesgue", "N", "d"]
SEQUENCE_COLUMNS = ["interval", "t_end", "err_rad", "boundary", "err_rad_excl", "converged", "scheme", "N", "d"]
SWEEP_COLUMNS = ["fc", "fs", "scheme", "N", "d", "max_err_all", "max_err_excl_boundary", "converged"]
NOISE_COLUMNS = SWEEP_COLUMNS + ["arw_deg_per_sqrt_h", "alpha_deg"]
LEBESGUE_COLUMNS = ["scheme", "N", "d", "node_kind", "constant", "lower_bound", "upper_bound"]

_SCHEME_ORDER = {s: i for i, s in enumerate(SCHEMES)}


def fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(columns, rows, fh=None, header: dict | None = None) -> str | None:
    buf = fh if fh is not None else io.StringIO()
    buf.write(f"# runge-guard {__version__}\n")
    for key, value in (header or {}).items():
        buf.write(f"# {key} = {value}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(row[c]) for c in columns])
    if fh is None:
        return buf.getvalue()
    return None


# -- signal reconstruction demos ------------------------------------------

@dataclass(frozen=True)
class DemoSummary:
    scheme: str
    N: int
    d: int
    max_abs_err: float
    max_lebesgue: float
    windows: int


def demo_samples(sc: Scenario):
    count = int(round((sc.t_end - sc.t_start) * sc.sample_rate)) + 1
    step = 1.0 / sc.sample_rate
    t = sc.t_start + np.arange(count) * step
    f = sc.amplitude * np.sin(2.0 * math.pi * sc.signal_freq * t)
    if sc.noise_sigma > 0:
        f = f + np.random.default_rng(sc.seed).normal(0.0, sc.noise_sigma, size=count)
    return t, f, step


def interp_demo(sc: Scenario):
    """Windowed reconstruction of a sampled sinusoid by each configured scheme.

    Returns ``(rows, summaries)``.  Windows of ``N`` steps tile the samples
    from the first one; BAC windows without ``d`` real neighbours on both
    sides are skipped.
    """
    t, f, step = demo_samples(sc)

    def truth(x):
        return sc.amplitude * np.sin(2.0 * math.pi * sc.signal_freq * x)

    rows, summaries = [], []
    for run in sc.runs:
        N, d = run.N, run.d
        errs, lebs, used = [], [], 0
        k = 0
        while (k + 1) * N <= len(t) - 1:
            window = SampleWindow.from_samples(k * N, N, step, f, d, t0=float(t[k * N]))
            k += 1
            try:
                interp = build_bac_interpolant(window, run.scheme, d)
            except BoundaryWindowError:
                continue
            used += 1
            lo, hi = interp.core
            m = N * sc.points_per_gap
            pts = lo + (hi - lo) * (np.arange(m + 1) / m)
            pts[-1] = hi
            err = np.abs(interp(pts) - truth(pts))
            leb = lebesgue_function(interp, pts)
            errs.append(err)
            lebs.append(leb)
            for ti, ei, li in zip(pts, err, leb):
                rows.append({"t": float(ti), "scheme": run.scheme, "abs_err": float(ei),
                             "lebesgue": float(li), "N": N, "d": d})
        max_err = float(np.max(np.concatenate(errs))) if errs else math.nan
        max_leb = float(np.max(np.concatenate(lebs))) if lebs else math.nan
        summaries.append(DemoSummary(run.scheme, N, d, max_err, max_leb, used))
    return rows, summaries


# -- Lebesgue table -------------------------------------------------------

def lebesgue_entry(scheme: str, N: int, d: int, node_kind: str, resolution: int = 500):
    if scheme in ("poly", "fh"):
        grid = NodeGrid(0.0, 1.0, N + 1, node_kind)
        interp = interpolant(grid, np.zeros(N + 1), scheme, d)
    else:
        window = SampleWindow(0.0, 1.0, N, np.zeros(N + 2 * d + 1), d, d)
        interp = build_bac_interpolant(window, scheme, d)
    return lebesgue_constant(interp, resolution, scheme=scheme, N=N, d=d, node_kind=node_kind,
                             bounds=table_bounds(scheme, N, d, node_kind))


def lebesgue_table(sc: Scenario):
    reports = [lebesgue_entry(s, N, d, kind, sc.resolution) for s, N, d, kind in sc.entries]
    rows = [dict(zip(LEBESGUE_COLUMNS, r.csv_row())) for r in reports]
    return rows, reports


# -- coning runs and sweeps -----------------------------------------------

def picard_config(sc: Scenario) -> PicardConfig:
    return PicardConfig(sc.picard_max_order, sc.picard_tol, sc.picard_max_iters)


def recon_config(sc: Scenario, run: Run) -> ReconstructionConfig:
    return ReconstructionConfig(run.N, run.d, run.scheme, sc.n_theta, sc.P_theta)


def coning_sequence(alpha, fc, fs, duration, run: Run, arw=0.0, seed=0, sc: Scenario | None = None):
    """One chained attitude run over a synthesized coning stream."""
    sc = sc or Scenario(kind="coning_run")
    p = ConingParams(alpha, fc)
    g = GyroModel(fs, NOISE_ARW if arw > 0 else NOISE_NONE, arw, seed)
    stream = synthesize(p, g, duration)
    n_use = (len(stream) // run.N) * run.N
    if n_use != len(stream):
        stream = type(stream)(stream.dt, stream.increments[:n_use], stream.t0, stream.meta)
    return run_sequence(stream, recon_config(sc, run), picard_config(sc), p)


@dataclass(frozen=True)
class SweepPoint:
    fc: float
    run: Run
    alpha: float
    arw: float


def _sweep_point(args):
    point, sc = args
    res = coning_sequence(point.alpha, point.fc, sc.fs, sc.duration, point.run, point.arw, sc.seed, sc)
    return {
        "fc": point.fc,
        "fs": sc.fs,
        "scheme": point.run.scheme,
        "N": point.run.N,
        "d": point.run.d,
        "max_err_all": res.max_error(),
        "max_err_excl_boundary": res.max_error_excl_boundary(),
        "converged": res.all_converged,
        "arw_deg_per_sqrt_h": point.arw * 60.0 * 180.0 / math.pi,
        "alpha_deg": math.degrees(point.alpha),
    }


def _run_points(points, sc: Scenario, jobs: int):
    args = [(p, sc) for p in points]
    if jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_point, args))
    else:
        rows = [_sweep_point(a) for a in args]
    return rows


def _row_key(row):
    return (row["arw_deg_per_sqrt_h"], row["alpha_deg"], row["fc"], _SCHEME_ORDER[row["scheme"]], row["N"], row["d"])


def freq_sweep(sc: Scenario, jobs: int = 1):
    """Max attitude error versus coning frequency, noise-free unless ``arw`` is set."""
    points = [SweepPoint(fc, run, sc.alpha, sc.arw) for fc in sc.fc_list for run in sc.runs]
    return sorted(_run_points(points, sc, jobs), key=_row_key)


def noise_sweep(sc: Scenario, jobs: int = 1):
    """Frequency sweep repeated for each (ARW, coning angle) case with one shared seed."""
    points = [SweepPoint(fc, run, alpha, arw) for arw, alpha in sc.cases for fc in sc.fc_list for run in sc.runs]
    return sorted(_run_points(points, sc, jobs), key=_row_key)


def coning_run(sc: Scenario):
    """Per-interval errors for each configured run at a single coning frequency."""
    rows, results = [], []
    for run in sc.runs:
        res = coning_sequence(sc.alpha, sc.fc, sc.fs, sc.duration, run, sc.arw, sc.seed, sc)
        results.append(res)
        for r in res.records:
            rows.append({"interval": r.interval_index, "t_end": r.t_end, "err_rad": r.err_att,
                         "boundary": r.boundary_flag, "err_rad_excl": r.err_att_excl,
                         "converged": r.converged, "scheme": run.scheme, "N": run.N, "d": run.d})
    return rows, results


def lookup(rows, **match):
    """Rows whose fields equal every ``match`` item (floats compared exactly)."""
    return [r for r in rows if all(r[k] == v for k, v in match.items())]


__all__ = [
    "EFH_BAC", "POLY_BAC", "POLY_PLAIN", "interp_demo", "lebesgue_table", "coning_run",
    "freq_sweep", "noise_sweep", "coning_sequence", "write_csv", "lookup",
]
