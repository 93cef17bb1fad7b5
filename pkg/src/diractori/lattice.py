"""Period lattices in C, their duals, spin structures and point enumeration.

The pairing used throughout is ``<w, z> = Re(conj(w) z)``, under which the
lattice spanned by ``2 pi`` and ``2 pi i`` is dual to the Gaussian integers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

TWO_PI = 2.0 * math.pi


class DegenerateLattice(ValueError):
    pass


def pairing(w: complex, z: complex) -> float:
    return (w.conjugate() * z).real


def _cross(a: complex, b: complex) -> float:
    return (a.conjugate() * b).imag


@dataclass(frozen=True)
class LatticeBasis:
    gamma1: complex
    gamma2: complex

    def __post_init__(self):
        g1, g2 = complex(self.gamma1), complex(self.gamma2)
        area = _cross(g1, g2)
        if abs(area) < 1e-14 * abs(g1) * abs(g2) or area == 0.0:
            raise DegenerateLattice(f"generators {g1!r}, {g2!r} are collinear")
        if area < 0:
            # orientation normalization
            g2 = -g2
        object.__setattr__(self, "gamma1", g1)
        object.__setattr__(self, "gamma2", g2)

    @classmethod
    def from_tau(cls, tau: complex) -> "LatticeBasis":
        """The lattice 2 pi (Z + tau Z)."""
        return cls(TWO_PI, TWO_PI * complex(tau))

    @property
    def volume(self) -> float:
        return _cross(self.gamma1, self.gamma2)

    @property
    def matrix(self) -> np.ndarray:
        return _real_matrix(self.gamma1, self.gamma2)

    def point(self, p: float, q: float) -> complex:
        return p * self.gamma1 + q * self.gamma2


@dataclass(frozen=True)
class DualBasis:
    omega1: complex
    omega2: complex

    @property
    def matrix(self) -> np.ndarray:
        return _real_matrix(self.omega1, self.omega2)

    @property
    def gram(self) -> np.ndarray:
        m = self.matrix
        return m.T @ m

    def point(self, m, n) -> complex:
        return m * self.omega1 + n * self.omega2

    def exact_coordinates(self) -> tuple[Fraction, Fraction, Fraction, Fraction] | None:
        """Rational coordinates of the generators if they are "nice".

        A float counts as exact when a fraction with denominator at most 10**6
        reproduces it bit for bit; this catches 1, 0.5, 1/3 and rejects
        values such as sqrt(3)/2.
        """
        out = []
        for x in (self.omega1.real, self.omega1.imag, self.omega2.real, self.omega2.imag):
            fr = Fraction(x).limit_denominator(10**6)
            if float(fr) != x:
                return None
            out.append(fr)
        return tuple(out)


def _real_matrix(a: complex, b: complex) -> np.ndarray:
    return np.array([[a.real, b.real], [a.imag, b.imag]])


@dataclass(frozen=True)
class SpinStructure:
    s1: Fraction = Fraction(0)
    s2: Fraction = Fraction(0)

    def __post_init__(self):
        for s in (self.s1, self.s2):
            if Fraction(s) not in (Fraction(0), Fraction(1, 2)):
                raise ValueError(f"spin structure components must be 0 or 1/2, got {s}")
        object.__setattr__(self, "s1", Fraction(self.s1))
        object.__setattr__(self, "s2", Fraction(self.s2))

    def omega0(self, dual: DualBasis) -> complex:
        return float(self.s1) * dual.omega1 + float(self.s2) * dual.omega2

    @property
    def doubled(self) -> tuple[int, int]:
        """Integer coordinates of 2 omega0 in the dual basis."""
        return int(2 * self.s1), int(2 * self.s2)


def dual_basis(basis: LatticeBasis) -> DualBasis:
    """Generators w1, w2 with <w_i, gamma_j> = 2 pi delta_ij."""
    return DualBasis(*_two_pi_inverse_transpose(basis.gamma1, basis.gamma2))


def lattice_from_dual(dual: DualBasis) -> LatticeBasis:
    """Inverse of :func:`dual_basis` (duality is an involution up to 2 pi)."""
    return LatticeBasis(*_two_pi_inverse_transpose(dual.omega1, dual.omega2))


def _two_pi_inverse_transpose(u: complex, v: complex) -> tuple[complex, complex]:
    # 2 pi times the inverse transpose of [[u.x, v.x], [u.y, v.y]]; the 2 pi
    # factor goes into the numerator so (2 pi, 2 pi i) maps to exactly (1, i)
    a, b, c, d = u.real, v.real, u.imag, v.imag
    det = a * d - b * c
    # "+ 0.0" clears negative zeros so serialized output stays tidy
    return (complex(TWO_PI * d / det + 0.0, -TWO_PI * b / det + 0.0),
            complex(-TWO_PI * c / det + 0.0, TWO_PI * a / det + 0.0))


def enumerate_disk(dual: DualBasis, center: complex, radius: float
                   ) -> list[tuple[tuple[int, int], complex]]:
    """All lattice points within ``radius`` of ``center``, sorted by coordinates.

    Completeness comes from the coordinate box: for a point x of the disk the
    k-th lattice coordinate differs from the center's by at most
    ``radius * sqrt(inv(gram)[k, k])``.
    """
    if radius < 0:
        raise ValueError("radius must be non-negative")
    w = dual.matrix
    t_center = np.linalg.solve(w, [center.real, center.imag])
    ginv = np.linalg.inv(dual.gram)
    slack = 1e-9
    ranges = []
    for k in range(2):
        half = radius * math.sqrt(ginv[k, k]) + slack
        ranges.append(range(math.floor(t_center[k] - half), math.ceil(t_center[k] + half) + 1))
    out = []
    for m in ranges[0]:
        for n in ranges[1]:
            v = m * dual.omega1 + n * dual.omega2
            if abs(v - center) <= radius + 1e-12:
                out.append(((m, n), v))
    return out


def fundamental_grid(basis: LatticeBasis, n: int) -> np.ndarray:
    """The n*n points (p/n) gamma1 + (q/n) gamma2, p outer and q inner."""
    if n < 1:
        raise ValueError("n must be >= 1")
    t = np.arange(n) / n
    return (t[:, None] * basis.gamma1 + t[None, :] * basis.gamma2).ravel()


def parse_lattice(obj: dict) -> LatticeBasis:
    """Read ``{"gamma1": [re, im], "gamma2": [re, im]}`` or ``{"tau": [re, im]}``."""
    keys = set(obj)
    if keys == {"tau"}:
        re, im = obj["tau"]
        return LatticeBasis.from_tau(complex(re, im))
    if keys == {"gamma1", "gamma2"}:
        return LatticeBasis(complex(*obj["gamma1"]), complex(*obj["gamma2"]))
    raise ValueError(f"lattice must have keys gamma1/gamma2 or tau, got {sorted(keys)}")


def lattice_to_json(basis: LatticeBasis) -> dict:
    return {"gamma1": [basis.gamma1.real, basis.gamma1.imag],
            "gamma2": [basis.gamma2.real, basis.gamma2.imag]}
