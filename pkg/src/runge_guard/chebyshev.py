"""Truncated Chebyshev series on ``tau in [-1, 1]``.

A series covers a physical interval ``[0, t_N]`` through
``t = t_N (1 + tau) / 2``.  Coefficients may be scalar, 3-vector or
quaternion valued (trailing axis); quaternion series multiply with the
Hamilton product.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError

# (a o b)_k = sum_ij HAMILTON[i, j, k] a_i b_j, scalar-first
HAMILTON = np.zeros((4, 4, 4))
for _i, _j, _k, _s in [
    (0, 0, 0, 1), (1, 1, 0, -1), (2, 2, 0, -1), (3, 3, 0, -1),
    (0, 1, 1, 1), (1, 0, 1, 1), (2, 3, 1, 1), (3, 2, 1, -1),
    (0, 2, 2, 1), (2, 0, 2, 1), (3, 1, 2, 1), (1, 3, 2, -1),
    (0, 3, 3, 1), (3, 0, 3, 1), (1, 2, 3, 1), (2, 1, 3, -1),
]:
    HAMILTON[_i, _j, _k] = _s


@dataclass(frozen=True, eq=False)
class ChebSeries:
    """``sum_i coeffs[i] F_i(tau)`` over a physical interval of ``interval_length`` seconds."""

    coeffs: np.ndarray
    interval_length: float = 2.0
    quaternion: bool = False

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.ndim == 0:
            c = c[None]
        if c.shape[0] == 0:
            raise ValueError("a series needs at least one coefficient")
        if self.quaternion and (c.ndim != 2 or c.shape[1] != 4):
            raise ValueError("quaternion series need coefficients of shape (n, 4)")
        if not self.interval_length > 0:
            raise ValueError("interval_length must be positive")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def sample_shape(self) -> tuple:
        return self.coeffs.shape[1:]

    def __call__(self, tau):
        return evaluate(self, tau)

    def at_time(self, t):
        """Evaluate at physical time ``t`` measured from the interval start."""
        tau = 2.0 * np.asarray(t, dtype=float) / self.interval_length - 1.0
        return evaluate(self, np.clip(tau, -1.0, 1.0))

    def _padded(self, other: "ChebSeries"):
        n = max(self.coeffs.shape[0], other.coeffs.shape[0])
        return _pad(self.coeffs, n), _pad(other.coeffs, n)

    def __eq__(self, other):
        if not isinstance(other, ChebSeries):
            return NotImplemented
        if self.interval_length != other.interval_length or self.sample_shape != other.sample_shape:
            return False
        a, b = self._padded(other)
        return bool(np.array_equal(a, b))

    __hash__ = None

    def allclose(self, other: "ChebSeries", atol: float = 0.0, rtol: float = 0.0) -> bool:
        a, b = self._padded(other)
        return bool(np.allclose(a, b, atol=atol, rtol=rtol))

    def _like(self, coeffs, quaternion=None) -> "ChebSeries":
        q = self.quaternion if quaternion is None else quaternion
        return ChebSeries(coeffs, self.interval_length, q)

    def __add__(self, other: "ChebSeries") -> "ChebSeries":
        _check_same_interval(self, other)
        a, b = self._padded(other)
        return self._like(a + b, self.quaternion or other.quaternion)

    def __sub__(self, other: "ChebSeries") -> "ChebSeries":
        _check_same_interval(self, other)
        a, b = self._padded(other)
        return self._like(a - b, self.quaternion or other.quaternion)

    def __mul__(self, scalar) -> "ChebSeries":
        return self._like(self.coeffs * float(scalar))

    __rmul__ = __mul__

    def truncate(self, cap: int) -> "ChebSeries":
        return self._like(self.coeffs[: cap + 1])


def _pad(c, n):
    if c.shape[0] == n:
        return c
    out = np.zeros((n,) + c.shape[1:])
    out[: c.shape[0]] = c
    return out


def _check_same_interval(a: ChebSeries, b: ChebSeries):
    if a.interval_length != b.interval_length:
        raise ValueError(
            f"series live on different intervals ({a.interval_length} vs {b.interval_length})"
        )


def chebyshev_points(P: int) -> np.ndarray:
    """Chebyshev points of the first kind ``cos((k + 1/2) pi / P)``."""
    return np.cos((np.arange(P) + 0.5) * np.pi / P)


def fit(f, n: int, P: int | None = None, interval_length: float = 2.0) -> ChebSeries:
    """Fit degree-``n`` coefficients from ``P`` samples of ``f`` at first-kind points.

    ``f`` receives the array of ``tau`` points and returns one sample per
    point.  The result reproduces polynomials of degree ``<= n`` whenever
    ``P >= n + 1``.
    """
    if P is None:
        P = 4 * (n + 1)
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if P < n + 1:
        raise ValueError(f"P={P} < n+1={n + 1}: coefficients would alias")
    theta = (np.arange(P) + 0.5) * np.pi / P
    samples = np.asarray(f(np.cos(theta)), dtype=float)
    if samples.shape[0] != P:
        raise ValueError("f must return one sample per point")
    basis = np.cos(np.outer(np.arange(n + 1), theta))
    coeffs = np.tensordot(basis, samples, axes=(1, 0)) * (2.0 / P)
    coeffs[0] *= 0.5
    return ChebSeries(coeffs, interval_length)


def evaluate(series: ChebSeries, tau):
    """Value of the series at ``tau`` (Clenshaw recurrence)."""
    tau = np.asarray(tau, dtype=float)
    if np.any(np.abs(tau) > 1.0):
        raise DomainError("tau outside [-1, 1]")
    c = series.coeffs
    x = tau[..., None] if c.ndim > 1 else tau
    b1 = np.zeros(np.broadcast_shapes(x.shape, c.shape[1:]))
    b2 = np.zeros_like(b1)
    for ck in c[:0:-1]:
        b1, b2 = 2.0 * x * b1 - b2 + ck, b1
    return x * b1 - b2 + c[0]


def differentiate(series: ChebSeries) -> ChebSeries:
    """Time derivative ``(2/t_N) d/dtau``.

    Uses ``dF_i/dtau = i U_{i-1}`` with ``U_j`` expanded back onto
    first-kind polynomials of the same parity; summing those expansions
    from the top degree down gives the coefficients in one backward pass.
    """
    c = series.coeffs
    n = c.shape[0] - 1
    if n == 0:
        return series._like(np.zeros_like(c))
    g = np.zeros((n + 2,) + c.shape[1:])
    for s in range(n - 1, -1, -1):
        g[s] = g[s + 2] + 2.0 * (s + 1) * c[s + 1]
    g = g[:n]
    g[0] *= 0.5
    return series._like(g * (2.0 / series.interval_length))


def integrate(series: ChebSeries) -> ChebSeries:
    """Time antiderivative ``(t_N/2) int_{-1}^{tau}``, zero at ``tau = -1``."""
    c = series.coeffs
    n = c.shape[0]
    ext = np.zeros((n + 2,) + c.shape[1:])
    ext[:n] = c
    ext[0] *= 2.0
    k = np.arange(1, n + 1).reshape((-1,) + (1,) * (c.ndim - 1))
    out = np.zeros((n + 1,) + c.shape[1:])
    out[1:] = (ext[:n] - ext[2 : n + 2]) / (2.0 * k)
    signs = (-1.0) ** np.arange(1, n + 1)
    out[0] = -np.tensordot(signs, out[1:], axes=(0, 0))
    return series._like(out * (series.interval_length / 2.0))


@lru_cache(maxsize=64)
def _product_matrix(na: int, nb: int, size: int) -> np.ndarray:
    """Linear map from the ``na*nb`` coefficient-pair products to the product series."""
    m, n = np.divmod(np.arange(na * nb), nb)
    S = np.zeros((size, na * nb))
    for dst in (m + n, np.abs(m - n)):
        keep = dst < size
        np.add.at(S, (dst[keep], np.nonzero(keep)[0]), 0.5)
    S.setflags(write=False)
    return S


def _as_quaternion(c):
    if c.shape[1:] == (4,):
        return c
    if c.shape[1:] == (3,):
        return np.concatenate([np.zeros((c.shape[0], 1)), c], axis=1)
    raise ValueError("quaternion product needs 3- or 4-component coefficients")


def multiply(a: ChebSeries, b: ChebSeries, cap: int | None = None) -> ChebSeries:
    """Product series via ``F_m F_n = (F_{m+n} + F_{|m-n|}) / 2``, degree capped at ``cap``.

    If either factor is a quaternion series, 3-vector factors are read as
    pure quaternions and coefficient pairs multiply as Hamilton products
    (``a`` on the left).  Otherwise coefficients multiply elementwise with
    numpy broadcasting.
    """
    _check_same_interval(a, b)
    na, nb = a.coeffs.shape[0], b.coeffs.shape[0]
    size = na + nb - 1 if cap is None else min(cap + 1, na + nb - 1)
    quaternion = a.quaternion or b.quaternion
    if quaternion:
        left = np.tensordot(_as_quaternion(a.coeffs), HAMILTON, axes=(1, 0))  # (na, j, k)
        pairs = np.matmul(_as_quaternion(b.coeffs)[None], left)  # (na, nb, k)
    else:
        ca = a.coeffs.reshape((na, 1) + a.sample_shape)
        cb = b.coeffs.reshape((1, nb) + b.sample_shape)
        pairs = ca * cb
    sample_shape = pairs.shape[2:]
    out = _product_matrix(na, nb, size) @ pairs.reshape(na * nb, -1)
    return ChebSeries(out.reshape((size,) + sample_shape), a.interval_length, quaternion)
