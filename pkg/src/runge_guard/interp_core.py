"""Barycentric polynomial and Floater-Hormann rational interpolation.

Interpolants are built on generated node grids (equispaced or Chebyshev
points of the second kind) and evaluated with the second barycentric
formula.  The borrowing-and-cutting (BAC) variants interpolate through
``d`` real neighbouring samples on each side of a window but only answer
inside the central (core) interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .errors import BoundaryWindowError, DomainError

EQUISPACED = "equispaced"
CHEBYSHEV2 = "chebyshev2"

POLY_PLAIN = "poly_plain"
POLY_BAC = "poly_bac"
EFH_BAC = "efh_bac"
SCHEMES = (POLY_PLAIN, POLY_BAC, EFH_BAC)

# binomial(N, N/2) stays below the float64 range up to here
MAX_POLY_DEGREE = 1000


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class NodeGrid:
    """Ordered interpolation nodes generated from ``start``, ``step`` and ``count``.

    Equispaced nodes are ``start + j*step``.  ``chebyshev2`` nodes are the
    points ``cos(j*pi/N)`` mapped (in increasing order) onto the same span
    ``[start, start + (count-1)*step]``.
    """

    start: float
    step: float
    count: int
    kind: str = EQUISPACED

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError(f"step must be positive, got {self.step}")
        if self.count < 2:
            raise ValueError(f"need at least two nodes, got {self.count}")
        if self.kind not in (EQUISPACED, CHEBYSHEV2):
            raise ValueError(f"unknown node kind {self.kind!r}")

    @property
    def degree(self) -> int:
        return self.count - 1

    @property
    def span(self) -> float:
        return self.degree * self.step

    @property
    def end(self) -> float:
        return float(self.nodes[-1])

    @cached_property
    def offsets(self) -> np.ndarray:
        """Node positions relative to ``start``."""
        j = np.arange(self.count)
        if self.kind == EQUISPACED:
            return _frozen(j * self.step)
        x = (1.0 - np.cos(j * np.pi / self.degree)) / 2.0
        x[0], x[-1] = 0.0, 1.0
        return _frozen(x * self.span)

    @cached_property
    def nodes(self) -> np.ndarray:
        return _frozen(self.start + self.offsets)

    def node_index(self, t):
        """Index of the node equal (bitwise) to each ``t``, or -1."""
        t = np.asarray(t, dtype=float)
        if self.kind == EQUISPACED:
            j = np.rint((t - self.start) / self.step)
            j = np.clip(np.nan_to_num(j), 0, self.degree).astype(int)
        else:
            j = np.clip(np.searchsorted(self.nodes, t), 0, self.degree)
        return np.where(self.nodes[j] == t, j, -1)


@dataclass(frozen=True)
class BarycentricWeights:
    values: np.ndarray
    scheme: str

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values))
        if np.any(self.values == 0):
            raise ValueError("barycentric weights must be nonzero")

    def __len__(self):
        return len(self.values)

    def scaled(self, factor: float) -> "BarycentricWeights":
        return BarycentricWeights(self.values * factor, self.scheme)


@lru_cache(maxsize=None)
def equispaced_poly_weights(N: int) -> BarycentricWeights:
    """Weights ``(-1)^j binomial(N, j)`` of the degree-``N`` polynomial on equispaced nodes."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if N > MAX_POLY_DEGREE:
        raise OverflowError(
            f"binomial({N}, {N // 2}) exceeds the float64 range; N must be <= {MAX_POLY_DEGREE}"
        )
    w = np.empty(N + 1)
    w[0] = 1.0
    for j in range(N):
        w[j + 1] = -w[j] * (N - j) / (j + 1)
    return BarycentricWeights(w, "poly")


@lru_cache(maxsize=None)
def chebyshev2_weights(N: int) -> BarycentricWeights:
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    w = (-1.0) ** np.arange(N + 1)
    w[0] *= 0.5
    w[-1] *= 0.5
    return BarycentricWeights(w, "poly")


@lru_cache(maxsize=None)
def fh_weights(N: int, d: int) -> BarycentricWeights:
    """Floater-Hormann weights for ``N+1`` equispaced nodes and blending degree ``d``.

    ``w_j = (-1)^(j-d) * sum_{i in J_j} binomial(d, j-i)`` with
    ``J_j = {i in 0..N-d : j-d <= i <= j}``.  Sums are formed in exact
    integer arithmetic.
    """
    if not 0 <= d <= N:
        raise ValueError(f"blending degree must satisfy 0 <= d <= N, got d={d}, N={N}")
    w = np.empty(N + 1)
    for j in range(N + 1):
        total = sum(math.comb(d, j - i) for i in range(max(0, j - d), min(j, N - d) + 1))
        w[j] = total if (j - d) % 2 == 0 else -total
    return BarycentricWeights(w, f"fh({d})")


def _as_points(t):
    t = np.asarray(t, dtype=float)
    return t.ndim == 0, np.atleast_1d(t)


def _barycentric_terms(grid: NodeGrid, weights: np.ndarray, t: np.ndarray):
    """Return the Cauchy-weighted terms ``w_j/(t - t_j)`` plus node hits.

    Differences are formed relative to ``grid.start`` to keep cancellation
    local to the window.
    """
    hit = grid.node_index(t)
    diff = (t - grid.start)[:, None] - grid.offsets[None, :]
    # rounding can make an off-node t collide with a node offset
    zero = diff == 0.0
    if np.any(zero):
        rows, cols = np.nonzero(zero)
        hit = hit.copy()
        hit[rows] = np.where(hit[rows] < 0, cols, hit[rows])
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = weights[None, :] / diff
    return terms, hit


@dataclass(frozen=True)
class BarycentricInterpolant:
    """Values on a grid with barycentric weights, valid on ``core``.

    ``values`` has shape ``(count,)`` for scalar samples or ``(count, k)``
    for vector samples; vector components share one denominator.
    """

    grid: NodeGrid
    weights: BarycentricWeights
    values: np.ndarray
    core: tuple = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values))
        if len(self.weights) != self.grid.count or self.values.shape[0] != self.grid.count:
            raise ValueError("grid, weights and values must have the same length")
        if self.core is None:
            object.__setattr__(self, "core", (float(self.grid.nodes[0]), self.grid.end))
        lo, hi = self.core
        if not (self.grid.nodes[0] <= lo < hi <= self.grid.end):
            raise ValueError(f"core {self.core} is not inside the node span")

    def interval(self, allow_margin: bool = False) -> tuple:
        if allow_margin:
            return float(self.grid.nodes[0]), self.grid.end
        return self.core

    def check_domain(self, t, allow_margin: bool = False):
        lo, hi = self.interval(allow_margin)
        t = np.asarray(t, dtype=float)
        bad = ~((t >= lo) & (t <= hi))
        if np.any(bad):
            worst = t[bad].flat[0] if t.ndim else float(t)
            raise DomainError(f"t={worst!r} outside evaluation interval [{lo!r}, {hi!r}]")

    def __call__(self, t, allow_margin: bool = False):
        return barycentric_eval(self, t, allow_margin=allow_margin)

    def with_weights(self, weights: BarycentricWeights) -> "BarycentricInterpolant":
        return BarycentricInterpolant(self.grid, weights, self.values, self.core)


def barycentric_eval(interp: BarycentricInterpolant, t, allow_margin: bool = False):
    """Evaluate the barycentric quotient at ``t`` (scalar or array).

    Points equal to a node return the stored sample unchanged.
    """
    interp.check_domain(t, allow_margin)
    scalar, tt = _as_points(t)
    terms, hit = _barycentric_terms(interp.grid, interp.weights.values, tt)
    on_node = hit >= 0
    terms[on_node] = 0.0
    den = terms.sum(axis=1)
    num = terms @ interp.values
    den[on_node] = 1.0
    out = num / den if num.ndim == 1 else num / den[:, None]
    if np.any(on_node):
        out[on_node] = interp.values[hit[on_node]]
    return out[0] if scalar else out


@dataclass(frozen=True)
class SampleWindow:
    """Equispaced samples around a core interval of ``n`` steps.

    ``values[left]`` is the sample at the core start ``t0``; ``left`` and
    ``right`` count the neighbouring samples available on each side.
    """

    t0: float
    step: float
    n: int
    values: np.ndarray
    left: int = 0
    right: int = 0

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values))
        if self.n < 1:
            raise ValueError("core must contain at least one step")
        if min(self.left, self.right) < 0:
            raise ValueError("margins must be nonnegative")
        if self.values.shape[0] != self.left + self.n + 1 + self.right:
            raise ValueError(
                f"expected {self.left + self.n + 1 + self.right} samples, got {self.values.shape[0]}"
            )

    @property
    def t_end(self) -> float:
        return self.t0 + self.n * self.step

    @classmethod
    def from_samples(cls, t0_index: int, n: int, step: float, samples, d: int, t0: float | None = None):
        """Cut a window from a longer sample sequence, borrowing up to ``d`` per side."""
        samples = np.asarray(samples, dtype=float)
        left = min(d, t0_index)
        right = min(d, samples.shape[0] - 1 - (t0_index + n))
        if right < 0:
            raise BoundaryWindowError("core interval runs past the end of the samples")
        vals = samples[t0_index - left : t0_index + n + 1 + right]
        if t0 is None:
            t0 = t0_index * step
        return cls(t0, step, n, vals, left, right)


def build_bac_interpolant(window: SampleWindow, scheme: str, d: int = 0) -> BarycentricInterpolant:
    """Build a plain or borrowing-and-cutting interpolant for ``window``.

    ``poly_plain`` uses only the ``N+1`` core samples.  ``poly_bac`` and
    ``efh_bac`` take ``d`` real samples on each side (``N+2d+1`` nodes) with
    polynomial or Floater-Hormann ``(N+2d, d)`` weights.  The core is always
    ``[t0, t0 + N*step]``.
    """
    N = window.n
    if scheme == POLY_PLAIN:
        vals = window.values[window.left : window.left + N + 1]
        grid = NodeGrid(window.t0, window.step, N + 1)
        return BarycentricInterpolant(grid, equispaced_poly_weights(N), vals, (grid.start, grid.end))
    if scheme not in (POLY_BAC, EFH_BAC):
        raise ValueError(f"unknown scheme {scheme!r}")
    if d < 0:
        raise ValueError("borrow depth must be nonnegative")
    if window.left < d or window.right < d:
        raise BoundaryWindowError(
            f"boundary window: {scheme} needs {d} samples per side, "
            f"have {window.left} before and {window.right} after"
        )
    lo = window.left - d
    vals = window.values[lo : window.left + N + 1 + d]
    grid = NodeGrid(window.t0 - d * window.step, window.step, N + 2 * d + 1)
    weights = equispaced_poly_weights(N + 2 * d) if scheme == POLY_BAC else fh_weights(N + 2 * d, d)
    core = (float(grid.nodes[d]), float(grid.nodes[d + N]))
    return BarycentricInterpolant(grid, weights, vals, core)


def interpolant(grid: NodeGrid, values, scheme: str = "poly", d: int = 0) -> BarycentricInterpolant:
    """Whole-grid interpolant: ``poly`` (equispaced or Chebyshev weights) or ``fh``."""
    N = grid.degree
    if scheme == "poly":
        w = chebyshev2_weights(N) if grid.kind == CHEBYSHEV2 else equispaced_poly_weights(N)
    elif scheme == "fh":
        if grid.kind != EQUISPACED:
            raise ValueError("Floater-Hormann weights are only provided for equispaced nodes")
        w = fh_weights(N, d)
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    return BarycentricInterpolant(grid, w, values)


# -- oracles ---------------------------------------------------------------
# Direct product forms, deliberately free of the barycentric machinery above.

def _lagrange_basis(nodes, t):
    n = len(nodes)
    ell = np.ones(n)
    for j in range(n):
        for k in range(n):
            if k != j:
                ell[j] *= (t - nodes[k]) / (nodes[j] - nodes[k])
    return ell


def lagrange_eval_oracle(grid: NodeGrid, values, t: float):
    """Lagrange form ``sum_j l_j(t) f_j`` with the explicit basis products."""
    if grid.count > 31:
        raise ValueError("oracle limited to N <= 30")
    values = np.asarray(values, dtype=float)
    nodes = np.asarray(grid.nodes)
    hit = np.nonzero(nodes == t)[0]
    if hit.size:
        return values[hit[0]]
    return _lagrange_basis(nodes, float(t)) @ values


def fh_blend_eval_oracle(grid: NodeGrid, values, d: int, t: float):
    """Floater-Hormann interpolant as a blend of local degree-``d`` polynomials."""
    N = grid.degree
    if not 0 <= d <= N <= 30:
        raise ValueError("oracle needs 0 <= d <= N <= 30")
    values = np.asarray(values, dtype=float)
    nodes = np.asarray(grid.nodes)
    hit = np.nonzero(nodes == t)[0]
    if hit.size:
        return values[hit[0]]
    t = float(t)
    num = 0.0
    den = 0.0
    for j in range(N - d + 1):
        local = nodes[j : j + d + 1]
        lam = (-1.0) ** j / np.prod(t - local)
        p = _lagrange_basis(local, t) @ values[j : j + d + 1]
        num = num + lam * p
        den += lam
    return num / den
