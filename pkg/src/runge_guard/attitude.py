"""Angular-velocity reconstruction from increments and functional-iteration attitude.

Each computing interval of ``N`` increments is handled in interval-local
time ``[0, t_N]``.  Accumulated increments on the ``N+2d+1`` nodes are
interpolated (plain, BAC polynomial or BAC Floater-Hormann), the
interpolant is fitted by a Chebyshev series on the core, and its time
derivative becomes the angular velocity fed to a quaternion Picard
iteration.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from . import chebyshev as cheb
from .chebyshev import ChebSeries
from .errors import BoundaryWindowError, ContiguityError
from .interp_core import EFH_BAC, POLY_BAC, POLY_PLAIN, SCHEMES, SampleWindow, build_bac_interpolant
from .motion import ConingParams, IncrementStream, coning_quaternion
from .quaternion import Quaternion


@dataclass(frozen=True)
class ReconstructionConfig:
    N: int = 8
    d: int = 8
    scheme: str = POLY_BAC
    n_theta: int | None = None
    P_theta: int | None = None

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.N < 1:
            raise ValueError("N must be >= 1")
        if self.scheme != POLY_PLAIN and not 1 <= self.d <= self.N:
            raise ValueError(f"BAC schemes need 1 <= d <= N, got d={self.d}, N={self.N}")
        if self.n_theta is None:
            object.__setattr__(self, "n_theta", self.N + 2 * self.d)
        if self.P_theta is None:
            object.__setattr__(self, "P_theta", 4 * (self.n_theta + 1))
        if not 1 <= self.n_theta <= self.N + 2 * self.d:
            raise ValueError(f"n_theta must lie in [1, N+2d], got {self.n_theta}")
        if self.P_theta < self.n_theta + 1:
            raise ValueError("P_theta must be at least n_theta + 1")

    @property
    def borrow(self) -> int:
        return 0 if self.scheme == POLY_PLAIN else self.d

    def fallback(self) -> "ReconstructionConfig":
        """Plain-polynomial config used on boundary intervals."""
        return ReconstructionConfig(self.N, self.d, POLY_PLAIN, self.n_theta, self.P_theta)


@dataclass(frozen=True)
class PicardConfig:
    max_order: int = 40
    tol: float = 1e-15
    max_iters: int = 30

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.max_order < 1:
            raise ValueError("max_order must be >= 1")


@dataclass(frozen=True, eq=False)
class PicardResult:
    q_end: Quaternion
    series: ChebSeries
    iterations: int
    residual: float
    converged: bool
    norm_error: float  # |q(1)| - 1 before renormalization

    def __iter__(self):
        yield self.q_end
        yield self.series


def accumulate(increments, t_end=None) -> np.ndarray:
    """Running sums of a contiguous block of increments.

    The first node value equals the first increment; the additive
    constant is immaterial because only the derivative is used.
    """
    inc = np.asarray(increments, dtype=float)
    if inc.ndim == 1:
        inc = inc[:, None]
    if not np.all(np.isfinite(inc)):
        raise ContiguityError("increment block contains missing (non-finite) samples")
    if t_end is not None:
        steps = np.diff(np.asarray(t_end, dtype=float))
        if steps.size and (np.any(steps <= 0) or np.ptp(steps) > 1e-9 * np.max(steps)):
            raise ContiguityError("increment timestamps are not contiguous and uniform")
    return np.cumsum(inc, axis=0)


def reconstruct_omega(window: SampleWindow, cfg: ReconstructionConfig) -> ChebSeries:
    """Angular-velocity series on ``[0, t_N]`` from accumulated-increment samples.

    ``window.t0`` is taken as the interval start; the returned series is in
    rad/s and spans ``t_N = N * step``.  Raises :class:`BoundaryWindowError`
    when a BAC scheme lacks neighbouring samples.
    """
    if window.n != cfg.N:
        raise ValueError(f"window has {window.n} steps, config expects N={cfg.N}")
    interp = build_bac_interpolant(window, cfg.scheme, cfg.borrow)
    t0, t_N = window.t0, window.n * window.step

    def theta(tau):
        t = t0 + t_N * (1.0 + tau) / 2.0
        return interp(np.clip(t, *interp.core))

    series = cheb.fit(theta, cfg.n_theta, cfg.P_theta, interval_length=t_N)
    return cheb.differentiate(series)


def quatfiter_integrate(omega: ChebSeries, q0: Quaternion, pc: PicardConfig = PicardConfig()) -> PicardResult:
    """Integrate ``dq/dt = q o omega / 2`` over the series interval by Picard iteration.

    Iterates on quaternion-valued Chebyshev coefficients; stops when the
    largest coefficient change drops below ``pc.tol``.  Non-convergence is
    reported on the result, not raised.
    """
    t_N = omega.interval_length
    start = ChebSeries(q0.as_array()[None, :], t_N, quaternion=True)
    q = start
    residual = math.inf
    converged = False
    it = 0
    for it in range(1, pc.max_iters + 1):
        rate = cheb.multiply(q, omega, cap=pc.max_order) * 0.5
        new = (start + cheb.integrate(rate)).truncate(pc.max_order)
        a, b = new._padded(q)
        residual = float(np.max(np.abs(a - b)))
        q = new
        if residual < pc.tol:
            converged = True
            break
    end = cheb.evaluate(q, 1.0)
    raw = Quaternion.from_array(end)
    return PicardResult(raw.normalized(), q, it, residual, converged, raw.norm() - 1.0)


def attitude_error(q_true: Quaternion, q_est: Quaternion) -> float:
    """Principal-angle style error ``2 |vec(conj(q_true) o q_est)|`` in rad."""
    qs = []
    for q in (q_true, q_est):
        n = q.norm()
        if abs(n - 1.0) > 1e-6:
            warnings.warn(f"non-unit quaternion (norm {n}) normalized before scoring", stacklevel=2)
            q = q.normalized()
        qs.append(q)
    e = (qs[0].conj() * qs[1]).canonical()
    return 2.0 * float(np.linalg.norm(e.vector))


@dataclass(frozen=True)
class IntervalRecord:
    interval_index: int
    t_end: float
    err_att: float
    err_att_excl: float  # chain restarted after the first interval; nan on boundaries
    boundary_flag: bool
    converged: bool
    iterations: int


@dataclass(frozen=True, eq=False)
class SequenceResult:
    records: list
    config: ReconstructionConfig
    picard: PicardConfig
    seed: int | None = None
    meta: dict = field(default_factory=dict)

    @property
    def errors(self) -> np.ndarray:
        return np.array([r.err_att for r in self.records])

    @property
    def errors_excl(self) -> np.ndarray:
        return np.array([r.err_att_excl for r in self.records])

    @property
    def boundary(self) -> np.ndarray:
        return np.array([r.boundary_flag for r in self.records])

    @property
    def all_converged(self) -> bool:
        return all(r.converged for r in self.records)

    def max_error(self) -> float:
        return float(np.max(self.errors))

    def max_error_excl_boundary(self) -> float:
        e = self.errors_excl[~self.boundary]
        return float(np.max(e)) if e.size else math.nan

    def to_csv(self, fh=None) -> str | None:
        buf = fh if fh is not None else io.StringIO()
        for key, value in asdict(self.config).items():
            buf.write(f"# {key} = {value}\n")
        for key, value in asdict(self.picard).items():
            buf.write(f"# picard_{key} = {value}\n")
        buf.write(f"# seed = {self.seed}\n")
        for key, value in self.meta.items():
            buf.write(f"# {key} = {value}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["interval", "t_end", "err_rad", "boundary", "err_rad_excl", "converged"])
        for r in self.records:
            w.writerow([r.interval_index, repr(r.t_end), repr(r.err_att), int(r.boundary_flag),
                        repr(r.err_att_excl), int(r.converged)])
        if fh is None:
            return buf.getvalue()
        return None


def interval_window(stream: IncrementStream, k: int, N: int, d: int) -> SampleWindow:
    """Accumulated-increment window for interval ``k`` in interval-local time.

    Node ``-d`` (or ``0`` without margins) carries the value zero; margins
    are clipped to what the stream holds.
    """
    inc = stream.increments
    first = k * N
    left = min(d, first)
    right = min(d, len(stream) - (first + N))
    block = inc[first - left : first + N + right]
    zero = np.zeros((1, 3))
    values = accumulate(np.concatenate([zero, block]))
    return SampleWindow(0.0, stream.dt, N, values, left, right)


def run_sequence(
    stream: IncrementStream,
    cfg: ReconstructionConfig,
    pc: PicardConfig = PicardConfig(),
    truth: ConingParams | None = None,
    q_init: Quaternion | None = None,
    truth_fn=None,
) -> SequenceResult:
    """Chain interval attitude updates over a whole stream and score them.

    The first and last intervals fall back to plain polynomial
    reconstruction and are flagged.  Two chains are scored: one from the
    truth at ``t0``, and one restarted from the truth at the start of the
    second interval so that boundary-interval errors do not leak into the
    excluded-boundary assessment.  ``truth_fn(t) -> Quaternion`` overrides
    the coning truth.
    """
    N, d = cfg.N, cfg.borrow
    if len(stream) % N:
        raise ValueError(f"stream of {len(stream)} increments is not a multiple of N={N}")
    K = len(stream) // N
    if truth_fn is None:
        if truth is None:
            truth_fn = lambda t: Quaternion.identity()  # noqa: E731
        else:
            truth_fn = lambda t: coning_quaternion(t, truth)  # noqa: E731
    q_all = q_init if q_init is not None else truth_fn(stream.t0)
    q_excl = None
    records = []
    for k in range(K):
        boundary = k == 0 or k == K - 1
        window = interval_window(stream, k, N, cfg.d)
        use = cfg
        if cfg.scheme != POLY_PLAIN and (window.left < d or window.right < d):
            use = cfg.fallback()
        try:
            omega = reconstruct_omega(window, use)
        except BoundaryWindowError:
            omega = reconstruct_omega(window, cfg.fallback())
        step = quatfiter_integrate(omega, Quaternion.identity(), pc)
        t_end = float(stream.node_time((k + 1) * N))
        q_all = (q_all * step.q_end).normalized()
        truth_end = truth_fn(t_end)
        err_excl = math.nan
        if not boundary:
            if q_excl is None:
                q_excl = truth_fn(float(stream.node_time(k * N)))
            q_excl = (q_excl * step.q_end).normalized()
            err_excl = attitude_error(truth_end, q_excl)
        records.append(
            IntervalRecord(k, t_end, attitude_error(truth_end, q_all), err_excl, boundary,
                           step.converged, step.iterations)
        )
    seed = stream.meta.get("seed")
    return SequenceResult(records, cfg, pc, seed, dict(stream.meta))
