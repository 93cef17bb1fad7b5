"""Frequency sets of the plane Dirac eigenvalue problem.

For a dual lattice, a spin structure w0 and an eigenvalue mu the spectral
set collects the dual vectors w with |w + w0|^2 = mu^2.  When the dual
generators have small rational coordinates and mu^2 is known exactly the
circle test is done in rational arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .lattice import DualBasis, SpinStructure, enumerate_disk

DEFAULT_TOL = 1e-9

Coords = tuple[int, int]


class NotInSet(KeyError):
    pass


@dataclass(frozen=True)
class SpectralSet:
    dual: DualBasis
    spin: SpinStructure
    mu: float
    elements: tuple[tuple[Coords, complex], ...]
    mu_sq: Fraction | None = None
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", dict(self.elements))

    @property
    def omega0(self) -> complex:
        return self.spin.omega0(self.dual)

    @property
    def coords(self) -> list[Coords]:
        return [c for c, _ in self.elements]

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, coords) -> bool:
        return tuple(coords) in self._index

    def value(self, coords: Coords) -> complex:
        return self._index[tuple(coords)]

    def shifted(self, coords: Coords) -> complex:
        """w + w0 for the element with the given coordinates."""
        return self._index[tuple(coords)] + self.omega0

    def partner(self, coords: Coords) -> Coords:
        return involution(self, coords)

    def pairs(self) -> list[tuple[Coords, Coords]]:
        """Involution orbits {w, -w - 2 w0}, each listed once."""
        seen, out = set(), []
        for c in self.coords:
            if c in seen:
                continue
            p = self.partner(c)
            seen.update((c, p))
            out.append((c, p))
        return out


def spectral_set(dual: DualBasis, spin: SpinStructure, mu: float,
                 tol: float = DEFAULT_TOL, mu_sq: Fraction | None = None) -> SpectralSet:
    """Dual vectors on the circle of radius mu about -w0.

    ``mu_sq`` (an exact value of mu^2) switches on the rational fast path
    when the dual basis has exact coordinates.
    """
    if mu <= 0:
        raise ValueError("mu must be positive")
    w0 = spin.omega0(dual)
    candidates = enumerate_disk(dual, -w0, mu * (1 + tol) + 1e-12)
    exact = dual.exact_coordinates() if mu_sq is not None else None
    if exact is not None:
        keep = [(c, v) for c, v in candidates if _exact_norm(exact, spin, c) == mu_sq]
    else:
        mu2 = mu * mu
        keep = [(c, v) for c, v in candidates if abs(abs(v + w0) ** 2 - mu2) <= tol * mu2]
    return SpectralSet(dual, spin, float(mu), tuple(keep), mu_sq)


def _exact_norm(exact, spin: SpinStructure, coords: Coords) -> Fraction:
    a, b, c, d = exact
    m = coords[0] + spin.s1
    n = coords[1] + spin.s2
    x = m * a + n * c
    y = m * b + n * d
    return x * x + y * y


def involution(s: SpectralSet, coords: Coords) -> Coords:
    """w -> -w - 2 w0, in lattice coordinates."""
    coords = tuple(coords)
    if coords not in s:
        raise NotInSet(coords)
    d1, d2 = s.spin.doubled
    return (-coords[0] - d1, -coords[1] - d2)


class SpectrumLine(NamedTuple):
    mu: float
    cardinality: int
    mu_sq: Fraction | None = None


def spectrum_search(dual: DualBasis, spin: SpinStructure, mu_max: float,
                    min_card: int = 6, tol: float = DEFAULT_TOL) -> list[SpectrumLine]:
    """Eigenvalues mu <= mu_max whose spectral set has at least ``min_card`` points."""
    if mu_max <= 0:
        raise ValueError("mu_max must be positive")
    if min_card < 2:
        raise ValueError("min_card must be >= 2")
    w0 = spin.omega0(dual)
    points = enumerate_disk(dual, -w0, mu_max)
    exact = dual.exact_coordinates()
    groups: list[list] = []
    if exact is not None:
        by_norm: dict[Fraction, int] = {}
        for c, _ in points:
            nrm = _exact_norm(exact, spin, c)
            by_norm[nrm] = by_norm.get(nrm, 0) + 1
        lines = [SpectrumLine(math.sqrt(nrm), k, nrm) for nrm, k in by_norm.items() if nrm > 0]
    else:
        norms = sorted(abs(v + w0) ** 2 for _, v in points)
        for nrm in norms:
            if groups and nrm - groups[-1][0] <= tol * max(nrm, 1e-300):
                groups[-1][1] += 1
            else:
                groups.append([nrm, 1])
        lines = [SpectrumLine(math.sqrt(nrm), k) for nrm, k in groups if nrm > 0]
    lines = [ln for ln in lines if ln.cardinality >= min_card and ln.mu <= mu_max * (1 + 1e-12)]
    return sorted(lines, key=lambda ln: ln.mu)


def set_to_json(s: SpectralSet) -> dict:
    w0 = s.omega0
    return {
        "mu": s.mu,
        "mu_squared": None if s.mu_sq is None else str(s.mu_sq),
        "omega0": [w0.real, w0.imag],
        "elements": [{"coords": list(c), "value": [v.real, v.imag]} for c, v in s.elements],
    }
