"""Scalar-first Hamilton quaternions."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Quaternion:
    w: float
    x: float
    y: float
    z: float

    @classmethod
    def identity(cls) -> "Quaternion":
        return cls(1.0, 0.0, 0.0, 0.0)

    @classmethod
    def from_array(cls, a) -> "Quaternion":
        a = np.asarray(a, dtype=float)
        if a.shape != (4,):
            raise ValueError(f"expected 4 components, got shape {a.shape}")
        return cls(*(float(v) for v in a))

    @classmethod
    def from_rotation_vector(cls, v) -> "Quaternion":
        v = np.asarray(v, dtype=float)
        angle = float(np.linalg.norm(v))
        if angle == 0.0:
            return cls.identity()
        s = math.sin(angle / 2) / angle
        return cls(math.cos(angle / 2), *(float(c) * s for c in v))

    @classmethod
    def from_axis_angle(cls, axis, angle: float) -> "Quaternion":
        axis = np.asarray(axis, dtype=float)
        return cls.from_rotation_vector(axis / np.linalg.norm(axis) * angle)

    def as_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def norm(self) -> float:
        return math.sqrt(self.w ** 2 + self.x ** 2 + self.y ** 2 + self.z ** 2)

    def normalized(self) -> "Quaternion":
        n = self.norm()
        if n == 0.0:
            raise ZeroDivisionError("cannot normalize a zero quaternion")
        return Quaternion(self.w / n, self.x / n, self.y / n, self.z / n)

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def canonical(self) -> "Quaternion":
        """Same rotation with a nonnegative scalar part."""
        return self if self.w >= 0 else Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, o: "Quaternion") -> "Quaternion":
        if not isinstance(o, Quaternion):
            return NotImplemented
        a0, a1, a2, a3 = self.w, self.x, self.y, self.z
        b0, b1, b2, b3 = o.w, o.x, o.y, o.z
        return Quaternion(
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 + a2 * b0 + a3 * b1 - a1 * b3,
            a0 * b3 + a3 * b0 + a1 * b2 - a2 * b1,
        )

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def rotate(self, v) -> np.ndarray:
        """Rotate a 3-vector by ``q v q*``."""
        p = Quaternion(0.0, *(float(c) for c in v))
        return (self * p * self.conj()).vector
