"""Oracle and property checks runnable without pytest (``runge-guard selftest``).

Each check returns a :class:`Check`; the tolerances are the contract
values, not calibrated to the current implementation.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import chebyshev as cheb
from .attitude import PicardConfig, quatfiter_integrate
from .chebyshev import ChebSeries
from .interp_core import (
    NodeGrid,
    SampleWindow,
    build_bac_interpolant,
    fh_blend_eval_oracle,
    interpolant,
    lagrange_eval_oracle,
)
from .quaternion import Quaternion


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    worst: float
    tol: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: worst={self.worst:.3e} tol={self.tol:.0e}"


def _off_node_points(grid: NodeGrid, rng, count: int) -> np.ndarray:
    t = rng.uniform(grid.nodes[0], grid.end, size=count)
    return t[grid.node_index(t) < 0]


def check_lagrange_equivalence(seed: int = 0, tol: float = 1e-11) -> Check:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for N in range(1, 11):
        grid = NodeGrid(rng.uniform(-1, 1), rng.uniform(0.05, 1.0), N + 1)
        vals = rng.uniform(-1, 1, size=N + 1)
        interp = interpolant(grid, vals)
        for t in _off_node_points(grid, rng, 40):
            ref = lagrange_eval_oracle(grid, vals, t)
            worst = max(worst, abs(interp(t) - ref) / max(1.0, abs(ref)))
    return Check("barycentric poly == Lagrange form (N<=10)", worst <= tol, worst, tol)


def check_fh_equivalence(seed: int = 0, tol: float = 1e-11) -> Check:
    rng = np.random.default_rng(seed + 1)
    worst = 0.0
    for N in (4, 8, 13, 20):
        for d in range(0, min(N, 8) + 1):
            grid = NodeGrid(0.0, 1.0 / N, N + 1)
            vals = rng.uniform(-1, 1, size=N + 1)
            interp = interpolant(grid, vals, "fh", d)
            for t in _off_node_points(grid, rng, 15):
                ref = fh_blend_eval_oracle(grid, vals, d, t)
                worst = max(worst, abs(interp(t) - ref) / max(1.0, abs(ref)))
    return Check("barycentric FH == blended local polynomials (N<=20, d<=8)", worst <= tol, worst, tol)


def chebyshev_quadrature_oracle(f, n: int, points: int = 10_000) -> np.ndarray:
    """Chebyshev coefficients by trapezoid quadrature of ``(2/pi) int_0^pi f(cos s) cos(i s) ds``."""
    s = np.linspace(0.0, np.pi, points + 1)
    wts = np.full(points + 1, np.pi / points)
    wts[[0, -1]] *= 0.5
    fs = f(np.cos(s))
    c = np.array([(2.0 / np.pi) * np.sum(wts * fs * np.cos(i * s)) for i in range(n + 1)])
    c[0] *= 0.5
    return c


def check_cheb_fit(tol: float = 1e-12) -> Check:
    series = cheb.fit(np.sin, 12, 64)
    ref = chebyshev_quadrature_oracle(np.sin, 12)
    worst = float(np.max(np.abs(series.coeffs - ref)))
    return Check("Chebyshev fit == quadrature oracle (sin, n=12, P=64)", worst <= tol, worst, tol)


def check_cheb_derivative(seed: int = 0, tol: float = 1e-6) -> Check:
    rng = np.random.default_rng(seed + 2)
    t_N = 0.008
    s = ChebSeries(rng.normal(size=11), t_N)
    ds = cheb.differentiate(s)
    tau = rng.uniform(-0.99, 0.99, size=50)
    h = 1e-6
    # d/dt = (2/t_N) d/dtau
    fd = (cheb.evaluate(s, tau + h) - cheb.evaluate(s, tau - h)) / (2 * h) * (2.0 / t_N)
    exact = cheb.evaluate(ds, tau)
    worst = float(np.max(np.abs(exact - fd)) / np.max(np.abs(exact)))
    return Check("Chebyshev derivative == central differences (degree 10)", worst <= tol, worst, tol)


def check_picard_single_axis(tol: float = 1e-13) -> Check:
    worst = 0.0
    for w, t_N in ((0.7, 0.008), (25.0, 0.01), (-3.0, 0.05)):
        q0 = Quaternion.from_axis_angle([0.3, -0.5, 0.8], 0.4)
        omega = ChebSeries([[w, 0.0, 0.0]], t_N)
        res = quatfiter_integrate(omega, q0, PicardConfig())
        ref = q0 * Quaternion(math.cos(w * t_N / 2), math.sin(w * t_N / 2), 0.0, 0.0)
        worst = max(worst, float(np.max(np.abs(res.q_end.as_array() - ref.as_array()))))
    return Check("Picard constant-rate rotation == closed form", worst <= tol, worst, tol)


def check_partition_of_unity(seed: int = 0, tol: float = 1e-13) -> Check:
    rng = np.random.default_rng(seed + 3)
    worst = 0.0
    c = 2.75
    # plain N=20 is excluded: Lambda_20 ~ 1e4 lifts rounding to ~1e-12
    cases = [("poly_plain", N) for N in (2, 4, 8, 10)]
    cases += [(s, N) for s in ("poly_bac", "efh_bac") for N in (2, 4, 8, 20)]
    for scheme, N in cases:
        w = SampleWindow(0.0, 0.01, N, np.full(3 * N + 1, c), N, N)
        interp = build_bac_interpolant(w, scheme, N)
        t = rng.uniform(*interp.core, size=1000)
        worst = max(worst, float(np.max(np.abs(interp(t) - c)) / c))
    return Check("constant samples reproduce the constant", worst <= tol, worst, tol)


def check_node_interpolation(seed: int = 0) -> Check:
    rng = np.random.default_rng(seed + 4)
    bad = 0
    for scheme in ("poly_plain", "poly_bac", "efh_bac"):
        N = 8
        vals = rng.normal(size=3 * N + 1)
        w = SampleWindow(0.0, 0.001, N, vals, N, N)
        interp = build_bac_interpolant(w, scheme, N)
        nodes = np.asarray(interp.grid.nodes)
        bad += int(np.count_nonzero(interp(nodes, allow_margin=True) != interp.values))
    return Check("every scheme returns samples bitwise at nodes", bad == 0, float(bad), 0.0)


ALL_CHECKS = (
    check_lagrange_equivalence,
    check_fh_equivalence,
    check_cheb_fit,
    check_cheb_derivative,
    check_picard_single_axis,
    check_partition_of_unity,
    check_node_interpolation,
)


def run_all(echo=print) -> bool:
    start = time.perf_counter()
    ok = True
    for fn in ALL_CHECKS:
        c = fn()
        ok &= c.passed
        echo(c.line())
    echo(f"selftest {'passed' if ok else 'FAILED'} in {time.perf_counter() - start:.2f} s")
    return ok
