"""Lebesgue functions and constants of barycentric interpolants.

Constants are found by a dense scan of every inter-node gap followed by a
golden-section refinement around the best sample.  Known bounds for the
node family and scheme are attached to the report but never enforced.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .interp_core import (
    CHEBYSHEV2,
    BarycentricInterpolant,
    _as_points,
    _barycentric_terms,
)

DEFAULT_RESOLUTION = 500
GOLDEN_STEPS = 40

CSV_COLUMNS = ["scheme", "N", "d", "node_kind", "constant", "lower_bound", "upper_bound"]


@dataclass(frozen=True)
class LebesgueReport:
    constant: float
    argmax_t: float
    lower_bound: float | None = None
    upper_bound: float | None = None
    grid_resolution: int = DEFAULT_RESOLUTION
    scheme: str = ""
    N: int = 0
    d: int = 0
    node_kind: str = ""

    def within_bounds(self, slack: float = 0.0) -> bool:
        ok = True
        if self.lower_bound is not None:
            ok &= self.constant >= self.lower_bound * (1.0 - slack)
        if self.upper_bound is not None:
            ok &= self.constant <= self.upper_bound * (1.0 + slack)
        return bool(ok)

    def csv_row(self) -> list:
        def fmt(v):
            return "" if v is None else repr(float(v))

        return [self.scheme, self.N, self.d, self.node_kind, fmt(self.constant),
                fmt(self.lower_bound), fmt(self.upper_bound)]


def lebesgue_function(interp: BarycentricInterpolant, t, allow_margin: bool = False):
    """``sum |w_j/(t-t_j)| / |sum w_j/(t-t_j)|``; exactly 1 at nodes."""
    interp.check_domain(t, allow_margin)
    scalar, tt = _as_points(t)
    terms, hit = _barycentric_terms(interp.grid, interp.weights.values, tt)
    on_node = hit >= 0
    terms[on_node] = 0.0
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.abs(terms).sum(axis=1) / np.abs(terms.sum(axis=1))
    out[on_node] = 1.0
    return out[0] if scalar else out


def table_bounds(scheme: str, N: int, d: int = 0, node_kind: str = "equispaced"):
    """Known ``(lower, upper)`` bounds on the constant, ``None`` where none applies.

    ``scheme`` is one of ``poly``, ``fh``, ``efh_bac``/``efh`` or
    ``poly_bac``/``poly_plain``.  For the extended scheme ``N`` is the core
    degree and ``d`` the extension depth.
    """
    if scheme in ("poly", "poly_plain") and node_kind == CHEBYSHEV2:
        return None, 2.0 * math.log(N + 1) / math.pi + 1.0
    if scheme in ("poly", "poly_plain"):
        return 2.0 ** (N - 2) / N ** 2, None
    if scheme == "fh":
        if d == 0 or N / d - 1.0 <= 0:
            lower = None
        else:
            lower = 2.0 ** (d - 2) / (d + 1) * math.log(N / d - 1.0)
            lower = lower if lower > 0 else None
        return lower, 2.0 ** (d - 1) * (2.0 + math.log(N))
    if scheme in ("efh", "efh_bac"):
        return None, 2.0 + math.log(N + 2 * d)
    return None, None


def _scan_points(interp: BarycentricInterpolant, lo: float, hi: float, resolution: int):
    nodes = np.asarray(interp.grid.nodes)
    inner = nodes[(nodes > lo) & (nodes < hi)]
    edges = np.concatenate([[lo], inner, [hi]])
    frac = np.arange(resolution) / resolution
    pts = (edges[:-1, None] + (edges[1:] - edges[:-1])[:, None] * frac[None, :]).ravel()
    return np.append(pts, hi)


def lebesgue_constant(
    interp: BarycentricInterpolant,
    resolution: int = DEFAULT_RESOLUTION,
    scheme: str = "",
    N: int | None = None,
    d: int = 0,
    node_kind: str | None = None,
    bounds: tuple | None = None,
) -> LebesgueReport:
    """Maximum of the Lebesgue function over ``interp.core``.

    ``scheme``, ``N`` and ``d`` label the report and select the bounds
    (override with ``bounds``).
    """
    if resolution < 100:
        raise ValueError("resolution must be at least 100 points per gap")
    lo, hi = interp.core
    pts = _scan_points(interp, lo, hi, resolution)
    vals = lebesgue_function(interp, pts)
    i = int(np.argmax(vals))
    best_t, best = float(pts[i]), float(vals[i])
    a = float(pts[max(i - 1, 0)])
    c = float(pts[min(i + 1, len(pts) - 1)])
    if a < best_t < c:
        def neg(t):
            return -float(lebesgue_function(interp, min(max(t, lo), hi)))

        tr = optimize.golden(neg, brack=(a, best_t, c), maxiter=GOLDEN_STEPS)
        tr = min(max(float(tr), a), c)
        val = -neg(tr)
        if val > best:
            best_t, best = tr, val
    node_kind = node_kind or interp.grid.kind
    N = interp.grid.degree if N is None else N
    if bounds is None:
        bounds = table_bounds(scheme or "poly", N, d, node_kind)
    return LebesgueReport(best, best_t, bounds[0], bounds[1], resolution, scheme, N, d, node_kind)


def perturbation_bound_check(
    interp: BarycentricInterpolant,
    f,
    eps: float,
    trials: int = 100,
    seed: int = 0,
    resolution: int = 200,
    report: LebesgueReport | None = None,
) -> bool:
    """Check the relative-perturbation error bound on random trials.

    Each trial scales every sample by ``1 + e_j`` with ``|e_j| <= eps`` and
    requires the perturbed sup error to stay below
    ``||f - p||_inf + eps ||f||_inf Lambda`` (Lambda with 1% search slack).
    """
    if report is None:
        report = lebesgue_constant(interp)
    lam = report.constant * 1.01
    lo, hi = interp.core
    pts = _scan_points(interp, lo, hi, resolution)
    exact = np.asarray(f(pts), dtype=float)
    base_err = float(np.max(np.abs(exact - interp(pts))))
    fnorm = max(float(np.max(np.abs(exact))), float(np.max(np.abs(interp.values))))
    bound = base_err + eps * fnorm * lam
    rng = np.random.default_rng(seed)
    ok = True
    for _ in range(trials):
        e = rng.uniform(-eps, eps, size=interp.values.shape)
        pert = interp.__class__(interp.grid, interp.weights, interp.values * (1.0 + e), interp.core)
        err = float(np.max(np.abs(exact - pert(pts))))
        # float rounding in the perturbed evaluation itself
        ok &= err <= bound * (1.0 + 1e-12) + 1e-15
    return bool(ok)


def write_csv(reports, fh=None, header: dict | None = None) -> str | None:
    buf = fh if fh is not None else io.StringIO()
    for key, value in (header or {}).items():
        buf.write(f"# {key} = {value}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in reports:
        w.writerow(r.csv_row())
    if fh is None:
        return buf.getvalue()
    return None
