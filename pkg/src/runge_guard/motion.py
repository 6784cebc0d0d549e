"""Classical coning motion truth and gyroscope angular-increment synthesis."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .quaternion import Quaternion

NOISE_NONE = "none"
NOISE_GAUSS = "additive_gauss"
NOISE_ARW = "arw"


def deg_per_sqrt_hour(value: float) -> float:
    """Convert an angle random walk from deg/sqrt(h) to rad/sqrt(s)."""
    return value * (math.pi / 180.0) / 60.0


@dataclass(frozen=True)
class ConingParams:
    alpha: float  # half-angle, rad
    freq: float   # Hz

    def __post_init__(self):
        if not 0.0 < self.alpha < math.pi / 2:
            raise ValueError(f"coning angle must lie in (0, pi/2), got {self.alpha}")
        if not self.freq > 0:
            raise ValueError(f"coning frequency must be positive, got {self.freq}")

    @property
    def omega(self) -> float:
        return 2.0 * math.pi * self.freq

    @classmethod
    def from_degrees(cls, alpha_deg: float, freq: float) -> "ConingParams":
        return cls(math.radians(alpha_deg), freq)


@dataclass(frozen=True)
class GyroModel:
    """Sampling rate and per-increment noise of a rate-integrating gyro triad.

    ``noise_level`` is the per-increment standard deviation in rad for
    ``additive_gauss`` and the random-walk coefficient in rad/sqrt(s) for
    ``arw``; it is ignored for ``none``.
    """

    sample_rate: float = 1000.0
    noise: str = NOISE_NONE
    noise_level: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not self.sample_rate > 0:
            raise ValueError("sample_rate must be positive")
        if self.noise not in (NOISE_NONE, NOISE_GAUSS, NOISE_ARW):
            raise ValueError(f"unknown noise model {self.noise!r}")
        if self.noise_level < 0:
            raise ValueError("noise level must be nonnegative")

    @property
    def dt(self) -> float:
        return 1.0 / self.sample_rate

    def increment_sigma(self) -> float:
        if self.noise == NOISE_GAUSS:
            return self.noise_level
        if self.noise == NOISE_ARW:
            return self.noise_level * math.sqrt(self.dt)
        return 0.0


@dataclass(frozen=True, eq=False)
class IncrementStream:
    """Angular increments over consecutive windows ``(t0 + k dt, t0 + (k+1) dt]``."""

    dt: float
    increments: np.ndarray
    t0: float = 0.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        inc = np.array(self.increments, dtype=float)
        if inc.ndim != 2 or inc.shape[1] != 3:
            raise ValueError("increments must have shape (n, 3)")
        inc.setflags(write=False)
        object.__setattr__(self, "increments", inc)

    def __len__(self):
        return self.increments.shape[0]

    def node_time(self, k):
        """Time of the ``k``-th window boundary (``k = 0`` is ``t0``)."""
        return self.t0 + np.asarray(k) * self.dt

    @property
    def t_end(self) -> np.ndarray:
        return self.node_time(np.arange(1, len(self) + 1))

    @property
    def duration(self) -> float:
        return len(self) * self.dt

    def to_csv(self, fh=None) -> str | None:
        buf = fh if fh is not None else io.StringIO()
        for key, value in self.meta.items():
            buf.write(f"# {key} = {value}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t_end", "dthx", "dthy", "dthz"])
        for t, row in zip(self.t_end, self.increments):
            w.writerow([repr(float(t))] + [repr(float(v)) for v in row])
        if fh is None:
            return buf.getvalue()
        return None

    @classmethod
    def from_csv(cls, text_or_fh) -> "IncrementStream":
        from .errors import ContiguityError

        text = text_or_fh if isinstance(text_or_fh, str) else text_or_fh.read()
        lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        rows = list(csv.reader(lines))
        if not rows or [c.strip() for c in rows[0]] != ["t_end", "dthx", "dthy", "dthz"]:
            raise ValueError("increment CSV must start with header t_end,dthx,dthy,dthz")
        data = np.array([[float(c) for c in r] for r in rows[1:]], dtype=float)
        if data.shape[0] < 2:
            raise ValueError("need at least two increments to infer dt")
        steps = np.diff(data[:, 0])
        dt = float(np.median(steps))
        if np.any(np.abs(steps - dt) > 1e-9 * max(dt, 1.0)):
            raise ContiguityError("increment timestamps are not uniformly spaced")
        return cls(dt, data[:, 1:], float(data[0, 0] - dt))


def coning_omega(t, p: ConingParams) -> np.ndarray:
    """Body angular velocity (rad/s); shape ``(3,)`` or ``(len(t), 3)``."""
    t = np.asarray(t, dtype=float)
    W, a = p.omega, p.alpha
    ph = W * t
    out = np.stack(
        np.broadcast_arrays(-2.0 * math.sin(a / 2) ** 2, -math.sin(a) * np.sin(ph), math.sin(a) * np.cos(ph)),
        axis=-1,
    )
    return W * out


def coning_rotation_vector(t, p: ConingParams) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    ph = p.omega * t
    return p.alpha * np.stack(np.broadcast_arrays(0.0, np.cos(ph), np.sin(ph)), axis=-1)


def coning_quaternion(t: float, p: ConingParams) -> Quaternion:
    ph = p.omega * float(t)
    s = math.sin(p.alpha / 2)
    return Quaternion(math.cos(p.alpha / 2), 0.0, s * math.cos(ph), s * math.sin(ph))


def exact_increment(t_a, t_b, p: ConingParams) -> np.ndarray:
    """Closed-form integral of :func:`coning_omega` over ``[t_a, t_b]``.

    The trigonometric differences are taken in product form so short
    windows keep full relative precision.
    """
    t_a = np.asarray(t_a, dtype=float)
    t_b = np.asarray(t_b, dtype=float)
    if np.any(t_b <= t_a):
        raise ValueError("increment window must have t_b > t_a")
    W, a = p.omega, p.alpha
    pa, pb = W * t_a, W * t_b
    mid = 0.5 * (pa + pb)
    half = np.sin(0.5 * (pb - pa))
    dx = -2.0 * W * math.sin(a / 2) ** 2 * (t_b - t_a)
    dy = -2.0 * math.sin(a) * np.sin(mid) * half
    dz = 2.0 * math.sin(a) * np.cos(mid) * half
    return np.stack(np.broadcast_arrays(dx, dy, dz), axis=-1)


def synthesize(p: ConingParams, g: GyroModel, duration: float) -> IncrementStream:
    """Noise-free increments over ``duration`` plus the gyro model's per-increment noise."""
    n = int(round(duration * g.sample_rate))
    if n < 1 or abs(n / g.sample_rate - duration) > 4 * np.spacing(max(duration, 1.0)):
        raise ValueError(f"duration {duration} is not a positive multiple of 1/f_s")
    times = np.arange(n + 1) * g.dt
    inc = exact_increment(times[:-1], times[1:], p)
    sigma = g.increment_sigma()
    if sigma > 0:
        rng = np.random.default_rng(g.seed)
        inc = inc + rng.normal(0.0, sigma, size=inc.shape)
    meta = {
        "alpha_rad": repr(p.alpha),
        "freq_hz": repr(p.freq),
        "sample_rate_hz": repr(g.sample_rate),
        "noise": g.noise,
        "noise_level": repr(g.noise_level),
        "seed": g.seed,
    }
    return IncrementStream(g.dt, inc, 0.0, meta)
