"""Quaternions in the complex-pair form ``p + j q``.

Complex scalars act by right multiplication and ``j c = conj(c) j``.  The
imaginary quaternions are identified with R^3 through the (i, j, k) basis;
with ``q = x2 + i x3`` one has ``j q = x2 j - x3 k``, so

    i x1 + j (x2 + i x3)  ->  (x1, x2, -x3).

All functions accept numpy arrays in the ``p``/``q`` slots and operate
elementwise, which is how the surface code evaluates many points at once.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

IMAG_TOL = 1e-10


class NonImaginary(ValueError):
    """Raised when a quaternion expected in Im H has a real part."""


@dataclass(frozen=True)
class Quaternion:
    p: Any = 0j
    q: Any = 0j

    def __mul__(self, other: "Quaternion | complex") -> "Quaternion":
        if isinstance(other, Quaternion):
            return mul(self, other)
        # complex scalar on the right
        return Quaternion(self.p * other, self.q * other)

    def __rmul__(self, other: complex) -> "Quaternion":
        # c (p + j q) = c p + j conj(c) q
        return Quaternion(other * self.p, np.conj(other) * self.q)

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.p + other.p, self.q + other.q)

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.p - other.p, self.q - other.q)

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.p, -self.q)

    def conj(self) -> "Quaternion":
        return conj(self)

    def norm(self):
        return norm(self)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (float(np.real(self.p)), float(np.imag(self.p)),
                float(np.real(self.q)), float(np.imag(self.q)))

    @classmethod
    def from_r3(cls, x) -> "Quaternion":
        x1, x2, x3 = x
        return cls(1j * x1, x2 - 1j * x3)


ONE = Quaternion(1 + 0j, 0j)
I = Quaternion(1j, 0j)
J = Quaternion(0j, 1 + 0j)
K = Quaternion(0j, -1j)  # k = i j = j (-i)


def mul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product.

    (a1 + j a2)(b1 + j b2) = (a1 b1 - conj(a2) b2) + j (conj(a1) b2 + a2 b1)
    """
    return Quaternion(a.p * b.p - np.conj(a.q) * b.q,
                      np.conj(a.p) * b.q + a.q * b.p)


def conj(a: Quaternion) -> Quaternion:
    return Quaternion(np.conj(a.p), -a.q)


def norm_sq(a: Quaternion):
    return np.abs(a.p) ** 2 + np.abs(a.q) ** 2


def norm(a: Quaternion):
    return np.sqrt(norm_sq(a))


def to_r3(v: Quaternion, tol: float = IMAG_TOL) -> np.ndarray:
    """Coordinates of an imaginary quaternion along (i, j, k).

    Array inputs give an array of shape ``(..., 3)``.
    """
    re = np.real(v.p)
    if np.any(np.abs(re) > tol):
        raise NonImaginary(f"real part {np.max(np.abs(re)):.3e} exceeds {tol:.1e}")
    return np.stack([np.imag(v.p), np.real(v.q), -np.imag(v.q)], axis=-1)


def sandwich(lam: Quaternion, v: Quaternion) -> Quaternion:
    """conj(lam) v lam -- a stretch rotation of Im H when lam != 0."""
    return mul(mul(conj(lam), v), lam)
